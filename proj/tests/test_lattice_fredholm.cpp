#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include <cil/errors.hpp>
#include <cil/lattice_fredholm.hpp>

#include "test_util.hpp"

using namespace cil;
using test_util::const_scalar;
using test_util::delta;
using test_util::scalar_band;

namespace {

// Deterministic k x k multiplier with smooth dependence on the lattice point.
Multiplier trig_multiplier(int k, int salt) {
  Multiplier m;
  m.dim = 1;
  m.rows = k;
  m.cols = k;
  m.eval = [k, salt](const LatticePoint& p) {
    Eigen::MatrixXcd v(k, k);
    double x = static_cast<double>(p[0]);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c)
        v(r, c) = std::complex<double>(std::sin(0.37 * x * (salt + 1) + r - c),
                                       std::cos(0.23 * x + 2 * r + c + salt));
    return v;
  };
  return m;
}

// Scalar step coefficient [p >= 0] with a shift of choice; limits 0 and 1.
Multiplier step_up() {
  Multiplier m;
  m.dim = 1;
  m.eval = [](const LatticePoint& p) {
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = p[0] >= 0 ? 1.0 : 0.0;
    return v;
  };
  m.has_limits = true;
  m.limit_neg = Eigen::MatrixXcd::Zero(1, 1);
  m.limit_pos = Eigen::MatrixXcd::Identity(1, 1);
  m.variation_window = 0;
  return m;
}

Multiplier step_down() {
  Multiplier m = step_up();
  m.eval = [](const LatticePoint& p) {
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = p[0] >= 0 ? 0.0 : 1.0;
    return v;
  };
  m.limit_neg = Eigen::MatrixXcd::Identity(1, 1);
  m.limit_pos = Eigen::MatrixXcd::Zero(1, 1);
  return m;
}

}  // namespace

TEST_CASE("apply moves mass by the declared shifts") {
  // a single unit term with shift s sends the delta at 0 to the delta at -s
  LatticeVector moved = cil::apply(shift_operator(1), delta(0));
  REQUIRE(moved.size() == 1);
  CHECK(moved.count({-1}) == 1);
  CHECK(std::abs(moved.at({-1})(0) - std::complex<double>(1.0, 0.0)) < 1e-15);

  // the step operator annihilates nothing but relocates the delta at 0
  LatticeVector out = cil::apply(step_shift_operator(0), delta(0));
  double at1 = out.count({1}) ? std::abs(out.at({1})(0)) : 0.0;
  CHECK(at1 == doctest::Approx(1.0));
  for (const auto& [p, v] : out)
    if (p != LatticePoint{1}) CHECK(v.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("lattice inner product conjugates its first argument") {
  LatticeVector u = delta(0, {2.0, 0.0});
  LatticeVector v = delta(0, {0.0, 3.0});
  std::complex<double> d = lattice_dot(u, v);
  CHECK(std::abs(d - std::complex<double>(0.0, 6.0)) < 1e-15);
  CHECK(std::abs(lattice_dot(delta(0), delta(4))) == 0.0);
}

TEST_CASE("adjoint satisfies the inner-product pairing on random data") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 3);
    LatticeOperator a;
    a.dim = 1;
    a.rows = a.cols = k;
    for (long long s : {-2LL, 0LL, 1LL})
      a.terms.push_back({{s}, trig_multiplier(k, static_cast<int>(rng() % 17))});

    auto random_vec = [&](long long lo, long long hi) {
      LatticeVector u;
      for (long long p = lo; p <= hi; ++p) {
        Eigen::VectorXcd e(k);
        for (int i = 0; i < k; ++i) e(i) = std::complex<double>(coef(rng), coef(rng));
        u[{p}] = e;
      }
      return u;
    };
    LatticeVector u = random_vec(-4, 4), v = random_vec(-6, 6);

    LatticeOperator at = lattice_adjoint(a);
    std::complex<double> lhs = lattice_dot(cil::apply(a, u), v);
    std::complex<double> rhs = lattice_dot(u, cil::apply(at, v));
    CHECK(std::abs(lhs - rhs) < 1e-12);

    // the double adjoint acts like the original operator
    LatticeVector once = cil::apply(a, u), twice = cil::apply(lattice_adjoint(at), u);
    for (const auto& [p, val] : once) {
      REQUIRE(twice.count(p) == 1);
      CHECK((twice.at(p) - val).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("step operator kernel counts are independent of the step position") {
  for (long long n0 : {-17LL, -3LL, 0LL, 7LL}) {
    LatticeOperator a = step_shift_operator(n0);

    KernelCount kb = exact_kernel_band(a);
    CHECK(kb.ker_dim == 0);
    CHECK(kb.coker_dim == 1);
    CHECK(kb.index == -1);
    CHECK(kb.certificate == "exact_band");

    KernelCount kw = band_symbol_index(a);
    CHECK(kw.index == -1);
    CHECK(kw.ker_dim == -1);  // winding alone cannot count dimensions
    CHECK(kw.certificate == "winding");

    KernelCount kf = fredholm_index(a);
    CHECK(kf.certificate == "exact_band");  // the most informative agreeing method
    CHECK(kf.methods_agreeing == std::vector<std::string>{"exact_band", "winding"});
    CHECK(kf.index == -1);
  }
}

TEST_CASE("winding certificate calibration survives constructed band operators") {
  // pure shifts are unitary: both limit windings agree, index 0
  KernelCount ks = fredholm_index(shift_operator(2));
  CHECK(ks.ker_dim == 0);
  CHECK(ks.coker_dim == 0);
  CHECK(ks.index == 0);

  // step coefficient attached to a double shift: the plus-infinity symbol
  // winds -2, the minus-infinity symbol is constant, so the index is -2
  LatticeOperator a;
  a.dim = 1;
  a.terms.push_back({{-2}, step_up()});
  a.terms.push_back({{0}, step_down()});

  KernelCount kb = exact_kernel_band(a);
  CHECK(kb.ker_dim == 0);
  CHECK(kb.coker_dim == 2);
  CHECK(kb.index == -2);
  CHECK(band_symbol_index(a).index == -2);
  CHECK(fredholm_index(a).index == -2);
}

TEST_CASE("plane multiplier has one-dimensional kernel and cokernel") {
  LatticeOptions opts;
  opts.window = 50;
  KernelCount k = multiplier_kernel_dims(jk_multiplier_operator(), opts);
  CHECK(k.ker_dim == 1);
  CHECK(k.coker_dim == 1);
  CHECK(k.index == 0);
  CHECK(k.certificate == "exact_scan");
  CHECK(k.window == 50);

  KernelCount kf = fredholm_index(jk_multiplier_operator(), opts);
  CHECK(kf.certificate == "exact_scan");
  CHECK(kf.methods_agreeing == std::vector<std::string>{"exact_scan"});
}

TEST_CASE("results are stable under window enlargement") {
  LatticeOperator step = step_shift_operator(0);
  LatticeOptions w64, w96;
  w64.window = 64;
  w96.window = 96;
  KernelCount a = fredholm_index(step, w64), b = fredholm_index(step, w96);
  CHECK(a.ker_dim == b.ker_dim);
  CHECK(a.coker_dim == b.coker_dim);
  CHECK(a.index == b.index);

  LatticeOptions w50, w75;
  w50.window = 50;
  w75.window = 75;
  KernelCount c = fredholm_index(jk_multiplier_operator(), w50);
  KernelCount d = fredholm_index(jk_multiplier_operator(), w75);
  CHECK(c.ker_dim == d.ker_dim);
  CHECK(c.coker_dim == d.coker_dim);
}

TEST_CASE("the adjoint swaps kernel and cokernel and negates the index") {
  KernelCount k = fredholm_index(lattice_adjoint(step_shift_operator(0)));
  CHECK(k.ker_dim == 1);
  CHECK(k.coker_dim == 0);
  CHECK(k.index == 1);

  LatticeOptions opts;
  opts.window = 40;
  KernelCount kj = fredholm_index(lattice_adjoint(jk_multiplier_operator()), opts);
  CHECK(kj.ker_dim == 1);
  CHECK(kj.coker_dim == 1);
  CHECK(kj.index == 0);
}

TEST_CASE("window certification failures are explicit") {
  // declared variation exceeds the scan window
  LatticeOperator far = jk_multiplier_operator();
  far.terms[0].m.variation_window = 100;
  LatticeOptions w50;
  w50.window = 50;
  CHECK_THROWS_AS(multiplier_kernel_dims(far, w50), WindowTooSmall);

  LatticeOptions w10;
  w10.window = 10;
  CHECK_THROWS_AS(exact_kernel_band(step_shift_operator(30), w10), WindowTooSmall);

  // declared limits are spot-checked outside the window
  Multiplier lying = const_scalar(1.0);
  lying.eval = [](const LatticePoint& p) {
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = p[0] > 0 ? 0.9 : -1.0;
    return v;
  };
  lying.limit_neg = Eigen::MatrixXcd::Identity(1, 1) * -1.0;
  lying.limit_pos = Eigen::MatrixXcd::Identity(1, 1);  // but eval says 0.9
  LatticeOperator liar;
  liar.dim = 1;
  liar.terms.push_back({{0}, lying});
  CHECK_THROWS_AS(exact_kernel_band(liar), WindowTooSmall);

  // multiplier vanishing exactly on the boundary shell cannot be certified
  Multiplier shell;
  shell.dim = 1;
  shell.eval = [](const LatticePoint& p) {
    double x = static_cast<double>(p[0]);
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = (x * x - 400.0) / (1.0 + x * x);
    return v;
  };
  shell.has_limits = true;
  shell.limit_neg = Eigen::MatrixXcd::Identity(1, 1);
  shell.limit_pos = Eigen::MatrixXcd::Identity(1, 1);
  shell.variation_window = 20;
  LatticeOperator ring;
  ring.dim = 1;
  ring.terms.push_back({{0}, shell});
  LatticeOptions w20;
  w20.window = 20;
  try {
    multiplier_kernel_dims(ring, w20);
    FAIL("expected WindowTooSmall");
  } catch (const WindowTooSmall& e) {
    CHECK(e.margin < e.threshold);
  }
}

TEST_CASE("certificate preconditions dispatch precise errors") {
  CHECK_THROWS_AS(multiplier_kernel_dims(step_shift_operator(0)), NotPureMultiplier);

  // constant two-term tails: not a monomial tail, and the limit symbol
  // 1 + e^{-i theta} vanishes on the circle
  LatticeOperator two = scalar_band({{0, 1.0}, {-1, 1.0}});
  CHECK_THROWS_AS(exact_kernel_band(two), TailNotMonomial);
  CHECK_THROWS_AS(band_symbol_index(two), LimitSymbolVanishes);
  CHECK_THROWS_AS(fredholm_index(two), NoApplicableMethod);

  // matrix-valued band operators have no scalar winding certificate
  Multiplier m2 = trig_multiplier(2, 1);
  m2.has_limits = true;
  m2.limit_neg = Eigen::MatrixXcd::Identity(2, 2);
  m2.limit_pos = Eigen::MatrixXcd::Identity(2, 2);
  LatticeOperator mat;
  mat.dim = 1;
  mat.rows = mat.cols = 2;
  mat.terms.push_back({{-1}, m2});
  CHECK_THROWS_AS(band_symbol_index(mat), NotScalar);

  // certificates are one-dimensional (bands) or declared-far-field (scans)
  CHECK_THROWS_AS(exact_kernel_band(jk_multiplier_operator()), UsageError);
  CHECK_THROWS_AS(band_symbol_index(jk_multiplier_operator()), UsageError);
  LatticeOperator blind = jk_multiplier_operator();
  blind.terms[0].m.invertible_far_field = false;
  CHECK_THROWS_AS(multiplier_kernel_dims(blind), UsageError);

  // a pure multiplier without limit metadata matches no method at all
  Multiplier nolim;
  nolim.dim = 1;
  nolim.eval = [](const LatticePoint&) { return Eigen::MatrixXcd::Identity(1, 1); };
  LatticeOperator bare;
  bare.dim = 1;
  bare.terms.push_back({{0}, nolim});
  CHECK_THROWS_AS(multiplier_kernel_dims(bare), UsageError);
  CHECK_THROWS_AS(fredholm_index(bare), NoApplicableMethod);
}
