#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <cil/abelian_group.hpp>
#include <cil/errors.hpp>

#include "acceptance.hpp"
#include "test_util.hpp"

using namespace cil;
using cil::acceptance::reference_invariant_diagonal;
using test_util::Zc;
using test_util::Zf;
using test_util::cofactor_det;

namespace {

IntMatrix mk(long long rows, long long cols, std::initializer_list<long long> entries) {
  IntMatrix m(rows, cols);
  REQUIRE(static_cast<long long>(entries.size()) == rows * cols);
  long long i = 0;
  for (long long v : entries) m.a[static_cast<std::size_t>(i++)] = v;
  return m;
}

std::vector<bigint> smith_diag(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  std::vector<bigint> d;
  for (long long i = 0; i < std::min(m.rows, m.cols); ++i) d.push_back(s.d.at(i, i));
  return d;
}

std::vector<bigint> factors(std::initializer_list<long long> xs) {
  std::vector<bigint> v;
  for (long long x : xs) v.emplace_back(x);
  return v;
}

IntMatrix random_matrix(std::mt19937_64& rng, long long max_dim, long long amp) {
  long long rows = 1 + static_cast<long long>(rng() % max_dim);
  long long cols = 1 + static_cast<long long>(rng() % max_dim);
  IntMatrix m(rows, cols);
  std::uniform_int_distribution<long long> entry(-amp, amp);
  for (bigint& v : m.a) v = entry(rng);
  return m;
}

GroupHom hom1(const FgAbelianGroup& dom, const FgAbelianGroup& cod, long long entry) {
  IntMatrix m(1, 1);
  m.at(0, 0) = entry;
  return make_hom(dom, cod, m);
}

}  // namespace

TEST_CASE("smith normal form pins small matrices") {
  CHECK(smith_diag(mk(2, 2, {2, 4, 6, 8})) == factors({2, 4}));
  CHECK(smith_diag(mk(2, 2, {1, 2, 3, 4})) == factors({1, 2}));
  CHECK(smith_diag(mk(2, 2, {2, 0, 0, 3})) == factors({1, 6}));
  CHECK(smith_diag(mk(2, 2, {4, 0, 0, 6})) == factors({2, 12}));
  CHECK(smith_diag(mk(2, 2, {0, 0, 0, 0})) == factors({0, 0}));
  CHECK(smith_normal_form(mk(2, 2, {0, 0, 0, 0})).rank == 0);
  CHECK(smith_diag(mk(2, 3, {1, 0, 0, 0, 2, 0})) == factors({1, 2}));
  CHECK(smith_diag(mk(1, 1, {6})) == factors({6}));
}

TEST_CASE("smith normal form properties hold on random matrices") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    IntMatrix m = random_matrix(rng, 5, 15);
    SmithResult s = smith_normal_form(m);

    CHECK(mat_mul(mat_mul(s.u, m), s.v) == s.d);
    bigint du = determinant(s.u), dv = determinant(s.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    CHECK(mat_mul(s.u, s.u_inv) == IntMatrix::identity(m.rows));
    CHECK(mat_mul(s.v, s.v_inv) == IntMatrix::identity(m.cols));

    std::vector<bigint> diag;
    long long nonzero = 0;
    for (long long i = 0; i < std::min(m.rows, m.cols); ++i) {
      diag.push_back(s.d.at(i, i));
      CHECK(s.d.at(i, i) >= 0);
      if (s.d.at(i, i) != 0) ++nonzero;
    }
    for (long long i = 1; i < std::min(m.rows, m.cols); ++i)
      if (s.d.at(i - 1, i - 1) != 0) CHECK(s.d.at(i, i) % s.d.at(i - 1, i - 1) == 0);
    for (long long r = 0; r < s.d.rows; ++r)
      for (long long c = 0; c < s.d.cols; ++c)
        if (r != c) CHECK(s.d.at(r, c) == 0);
    CHECK(s.rank == nonzero);
    CHECK(diag == reference_invariant_diagonal(m));
  }
}

TEST_CASE("determinant agrees with cofactor expansion") {
  CHECK(determinant(mk(1, 1, {-7})) == -7);
  CHECK(determinant(mk(2, 2, {1, 2, 3, 4})) == -2);
  CHECK(determinant(mk(3, 3, {2, 0, 1, 0, 3, 0, 1, 0, 2})) == 9);
  CHECK(determinant(IntMatrix::identity(4)) == 1);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 80; ++trial) {
    long long n = 1 + static_cast<long long>(rng() % 5);
    IntMatrix m(n, n);
    std::uniform_int_distribution<long long> entry(-9, 9);
    for (bigint& v : m.a) v = entry(rng);
    CHECK(determinant(m) == cofactor_det(m));
  }
  CHECK_THROWS_AS(determinant(mk(2, 3, {1, 0, 0, 0, 1, 0})), IllDefinedHom);
}

TEST_CASE("presentations reduce to canonical groups") {
  // columns are relators in Z^rows
  CHECK(group_from_presentation(mk(2, 1, {2, 0})) == direct_sum(Zf(1), Zc(2)));
  CHECK(group_from_presentation(mk(1, 1, {3})) == Zc(3));
  CHECK(group_from_presentation(mk(3, 1, {1, 1, 1})) == Zf(2));
  CHECK(group_from_presentation(mk(2, 2, {2, 0, 0, 3})) == Zc(6));
  CHECK(group_from_presentation(IntMatrix(2, 0)) == Zf(2));
  CHECK(group_from_presentation(IntMatrix::identity(3)).is_trivial());
  FgAbelianGroup g = group_from_presentation(mk(2, 2, {2, 0, 0, 4}));
  CHECK(g.rank == 0);
  CHECK(g.invariant_factors == factors({2, 4}));
}

TEST_CASE("presentation change of basis is a two-sided inverse modulo relations") {
  std::mt19937_64 rng(4096);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix rel = random_matrix(rng, 4, 8);
    Presentation p = present(rel);
    const FgAbelianGroup& g = p.group;
    REQUIRE(p.generator_map.rows == rel.rows);
    REQUIRE(p.generator_map.cols == g.ambient_dim());
    REQUIRE(p.class_map.rows == g.ambient_dim());
    REQUIRE(p.class_map.cols == rel.rows);

    // class(generator_j) == e_j up to the torsion moduli
    IntMatrix round = mat_mul(p.class_map, p.generator_map);
    for (long long r = 0; r < round.rows; ++r)
      for (long long c = 0; c < round.cols; ++c) {
        bigint want = r == c ? 1 : 0;
        bigint diff = round.at(r, c) - want;
        if (r >= g.rank) {
          const bigint& d = g.invariant_factors[static_cast<std::size_t>(r - g.rank)];
          CHECK(diff % d == 0);
        } else {
          CHECK(diff == 0);
        }
      }

    // every relator maps to zero coordinates (mod the torsion moduli)
    IntMatrix killed = mat_mul(p.class_map, rel);
    for (long long r = 0; r < killed.rows; ++r)
      for (long long c = 0; c < killed.cols; ++c) {
        if (r >= g.rank) {
          const bigint& d = g.invariant_factors[static_cast<std::size_t>(r - g.rank)];
          CHECK(killed.at(r, c) % d == 0);
        } else {
          CHECK(killed.at(r, c) == 0);
        }
      }
  }
}

TEST_CASE("group strings render and parse canonically") {
  CHECK(group_to_string(Zf(0)) == "0");
  CHECK(group_to_string(Zf(1)) == "Z");
  CHECK(group_to_string(Zf(3)) == "Z^3");
  CHECK(group_to_string(Zc(2)) == "Z_2");
  CHECK(group_to_string(direct_sum(Zf(2), direct_sum(Zc(2), Zc(6)))) == "Z^2 + Z_2 + Z_6");
  CHECK(group_to_string(direct_sum(Zc(2), Zc(2))) == "Z_2 + Z_2");

  for (const std::string& text :
       {"0", "Z", "Z^5", "Z_4", "Z + Z_2", "Z^2 + Z_2 + Z_6", "Z_3 + Z_9"}) {
    CHECK(group_to_string(parse_group(text)) == text);
  }
  // non-canonical input normalizes
  CHECK(parse_group("Z_3 + Z_2") == Zc(6));
  CHECK(parse_group("  Z^2  ") == Zf(2));
  CHECK_THROWS_AS(parse_group("banana"), ParseError);
  CHECK_THROWS_AS(parse_group("Z^"), ParseError);
  CHECK_THROWS_AS(parse_group("Z_1_2"), ParseError);
  CHECK_THROWS_AS(parse_group(""), ParseError);
  CHECK_THROWS_AS(parse_group("Z^200"), ParseError);  // free rank cap
  CHECK_THROWS_AS(cyclic_group(0), UsageError);
}

TEST_CASE("direct sums renormalize to a divisibility chain") {
  CHECK(direct_sum(Zc(2), Zc(3)) == Zc(6));
  CHECK(direct_sum(Zc(2), Zc(4)).invariant_factors == factors({2, 4}));
  CHECK(direct_sum(Zc(4), Zc(6)).invariant_factors == factors({2, 12}));
  CHECK(direct_sum(Zf(2), Zf(3)) == Zf(5));
  FgAbelianGroup g = direct_sum(Zf(1), Zc(5));
  CHECK(direct_sum(g, Zf(0)) == g);
  CHECK(cyclic_group(1).is_trivial());
  CHECK(direct_sum(direct_sum(Zc(2), Zc(2)), Zc(3)).invariant_factors == factors({2, 6}));
}

TEST_CASE("group order is strict and total on a sample") {
  std::vector<FgAbelianGroup> sample = {
      Zf(0), Zc(2), Zc(4),  direct_sum(Zc(2), Zc(2)), Zc(12),
      Zf(1), direct_sum(Zf(1), Zc(2)), Zf(2), direct_sum(Zf(2), Zc(3)), Zf(3)};
  for (std::size_t i = 0; i < sample.size(); ++i) {
    CHECK(!group_less(sample[i], sample[i]));
    for (std::size_t j = 0; j < sample.size(); ++j) {
      if (i == j) continue;
      bool lt = group_less(sample[i], sample[j]);
      bool gt = group_less(sample[j], sample[i]);
      CHECK(lt != gt);  // trichotomy: distinct groups compare one way
    }
  }
  // rank dominates the order
  CHECK(group_less(Zc(1000), Zf(1)));
  CHECK(group_less(direct_sum(Zf(1), Zc(2)), Zf(2)));
}

TEST_CASE("kernels, images and cokernels of homomorphisms") {
  // multiplication by 3 on Z
  GroupHom t3 = hom1(Zf(1), Zf(1), 3);
  CHECK(hom_kernel(t3).is_trivial());
  CHECK(hom_image(t3) == Zf(1));
  CHECK(hom_cokernel(t3) == Zc(3));

  // addition Z^2 -> Z
  GroupHom add = make_hom(Zf(2), Zf(1), mk(1, 2, {1, 1}));
  CHECK(hom_kernel(add) == Zf(1));
  CHECK(hom_cokernel(add).is_trivial());

  // reduction Z -> Z_4
  GroupHom red = hom1(Zf(1), Zc(4), 1);
  CHECK(hom_kernel(red) == Zf(1));
  CHECK(hom_image(red) == Zc(4));
  CHECK(hom_cokernel(red).is_trivial());

  // doubling Z_2 -> Z_4
  GroupHom dbl = hom1(Zc(2), Zc(4), 2);
  CHECK(hom_kernel(dbl).is_trivial());
  CHECK(hom_image(dbl) == Zc(2));
  CHECK(hom_cokernel(dbl) == Zc(2));

  // relations must map into relations
  CHECK_THROWS_AS(hom1(Zc(2), Zc(4), 1), IllDefinedHom);
  CHECK_THROWS_AS(hom1(Zc(2), Zf(1), 1), IllDefinedHom);
  CHECK_NOTHROW(hom1(Zc(2), Zc(4), 0));
  CHECK_THROWS_AS(make_hom(Zf(2), Zf(1), mk(1, 1, {1})), IllDefinedHom);

  GroupHom z = zero_hom(Zc(6), Zf(2));
  CHECK(hom_kernel(z) == Zc(6));
  CHECK(hom_image(z).is_trivial());
  CHECK(hom_cokernel(z) == Zf(2));
  GroupHom id = identity_hom(direct_sum(Zf(1), Zc(4)));
  CHECK(hom_kernel(id).is_trivial());
  CHECK(hom_cokernel(id).is_trivial());
}

TEST_CASE("subgroup and quotient carriers compose correctly") {
  GroupHom t3 = hom1(Zf(1), Zf(1), 3);
  Subgroup im = image_subgroup(t3);
  CHECK(im.group == Zf(1));
  // the inclusion of the image, followed by nothing, is multiplication by +-3
  CHECK((im.inclusion.at(0, 0) == 3 || im.inclusion.at(0, 0) == -3));

  QuotientGroup q = cokernel_quotient(t3);
  CHECK(q.group == Zc(3));
  // projection is a valid hom from the codomain onto the cokernel
  GroupHom proj = make_hom(t3.codomain, q.group, q.projection);
  CHECK(hom_image(proj) == Zc(3));

  GroupHom add = make_hom(Zf(2), Zf(1), mk(1, 2, {1, 1}));
  Subgroup ker = kernel_subgroup(add);
  CHECK(ker.group == Zf(1));
  GroupHom incl = make_hom(ker.group, add.domain, ker.inclusion);
  CHECK(hom_image(compose(add, incl)).is_trivial());
}

TEST_CASE("exactness checker accepts and localizes") {
  // 0 -> Z --2--> Z -> Z_2 -> 0
  std::vector<GroupHom> chain = {
      zero_hom(Zf(0), Zf(1)),
      hom1(Zf(1), Zf(1), 2),
      hom1(Zf(1), Zc(2), 1),
      zero_hom(Zc(2), Zf(0)),
  };
  ExactnessReport ok = check_exact(chain, false);
  CHECK(ok.exact);
  CHECK(ok.first_failure == -1);
  CHECK(std::all_of(ok.node_ok.begin(), ok.node_ok.end(), [](bool b) { return b; }));

  // breaking the middle: multiplication by 4 followed by reduction mod 2
  std::vector<GroupHom> bad = chain;
  bad[1] = hom1(Zf(1), Zf(1), 4);
  ExactnessReport r = check_exact(bad, false);
  CHECK(!r.exact);
  CHECK(r.first_failure == 2);
  REQUIRE(r.node_ok.size() == 3);  // interior nodes only
  CHECK(r.node_ok[0]);
  CHECK(!r.node_ok[1]);
  CHECK(r.node_ok[2]);

  // a cyclic six-term chain of trivial groups is exact
  std::vector<GroupHom> loop;
  for (int i = 0; i < 6; ++i) loop.push_back(zero_hom(Zf(0), Zf(0)));
  CHECK(check_exact(loop, true).exact);
}

TEST_CASE("extension solver enumerates exactly the middle terms") {
  auto names = [](const std::vector<FgAbelianGroup>& gs) {
    std::set<std::string> out;
    for (const FgAbelianGroup& g : gs) out.insert(group_to_string(g));
    return out;
  };
  const long long bound = 12;

  CHECK(names(solve_extension(Zf(1), Zf(2), bound)) == std::set<std::string>{"Z^3"});
  CHECK(names(solve_extension(Zc(2), Zc(2), bound)) ==
        std::set<std::string>{"Z_2 + Z_2", "Z_4"});
  CHECK(names(solve_extension(Zf(0), Zc(6), bound)) == std::set<std::string>{"Z_6"});
  CHECK(names(solve_extension(Zc(3), Zf(0), bound)) == std::set<std::string>{"Z_3"});
  CHECK(names(solve_extension(Zc(2), Zc(4), bound)) ==
        std::set<std::string>{"Z_2 + Z_4", "Z_8"});
  CHECK(names(solve_extension(Zc(2), Zf(1), bound)) == std::set<std::string>{"Z + Z_2"});
  CHECK(names(solve_extension(Zc(3), Zc(3), bound)) ==
        std::set<std::string>{"Z_3 + Z_3", "Z_9"});

  // the split extension always appears, and results arrive sorted
  for (auto [a, c] : std::vector<std::pair<FgAbelianGroup, FgAbelianGroup>>{
           {Zc(4), Zc(2)}, {Zf(1), Zc(3)}, {direct_sum(Zf(1), Zc(2)), Zc(2)}}) {
    std::vector<FgAbelianGroup> xs = solve_extension(a, c, bound);
    CHECK(std::count(xs.begin(), xs.end(), direct_sum(a, c)) == 1);
    CHECK(std::is_sorted(xs.begin(), xs.end(), group_less));
  }
}

TEST_CASE("extension admission matches classification facts") {
  CHECK(admits_extension(Zc(4), Zc(2), Zc(2)));
  CHECK(admits_extension(direct_sum(Zc(2), Zc(2)), Zc(2), Zc(2)));
  CHECK(admits_extension(Zc(9), Zc(3), Zc(3)));
  CHECK(admits_extension(Zf(2), Zf(1), Zf(1)));
  CHECK(admits_extension(Zc(8), Zc(2), Zc(4)));
  CHECK(admits_extension(direct_sum(Zf(1), Zc(2)), Zc(2), Zf(1)));

  CHECK(!admits_extension(Zf(1), Zf(1), Zf(1)));  // ranks must add up
  CHECK(!admits_extension(direct_sum(Zc(2), Zc(2)), Zc(4), Zf(0)));
  CHECK(!admits_extension(direct_sum(Zc(2), direct_sum(Zc(2), Zc(2))), Zc(2), Zc(4)));
  CHECK(!admits_extension(Zc(16), Zc(2), Zc(4)));  // order 16 != 8
}
