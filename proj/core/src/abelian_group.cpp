#include <cil/abelian_group.hpp>

#include <algorithm>
#include <cctype>
#include <climits>
#include <sstream>
#include <utility>

namespace cil {

namespace {

long long to_ll_sat(const bigint& v) {
  if (v > bigint(LLONG_MAX)) return LLONG_MAX;
  if (v < bigint(LLONG_MIN)) return LLONG_MIN;
  return v.convert_to<long long>();
}

// Columns d_i * e_{rank+i}: the relation lattice of a canonical group.
IntMatrix relation_lattice(const FgAbelianGroup& g) {
  IntMatrix l(g.ambient_dim(), g.torsion_count());
  for (long long i = 0; i < g.torsion_count(); ++i)
    l.at(g.rank + i, i) = g.invariant_factors[static_cast<std::size_t>(i)];
  return l;
}

}  // namespace

IntMatrix IntMatrix::identity(long long n) {
  IntMatrix m(n, n);
  for (long long i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix mat_mul(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw IllDefinedHom("matrix product with mismatched shapes");
  IntMatrix r(x.rows, y.cols);
  for (long long i = 0; i < x.rows; ++i)
    for (long long k = 0; k < x.cols; ++k) {
      const bigint& xv = x.at(i, k);
      if (xv == 0) continue;
      for (long long j = 0; j < y.cols; ++j) {
        const bigint& yv = y.at(k, j);
        if (yv != 0) r.at(i, j) += xv * yv;
      }
    }
  return r;
}

IntMatrix hstack(const IntMatrix& x, const IntMatrix& y) {
  if (x.rows != y.rows) throw IllDefinedHom("hstack with mismatched row counts");
  IntMatrix r(x.rows, x.cols + y.cols);
  for (long long i = 0; i < x.rows; ++i) {
    for (long long j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (long long j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
  }
  return r;
}

bigint determinant(const IntMatrix& m) {
  if (m.rows != m.cols) throw IllDefinedHom("determinant of a non-square matrix");
  const long long n = m.rows;
  if (n == 0) return 1;
  IntMatrix w = m;
  bigint prev = 1;
  int sign = 1;
  for (long long k = 0; k + 1 < n; ++k) {
    if (w.at(k, k) == 0) {
      long long r = -1;
      for (long long i = k + 1; i < n; ++i)
        if (w.at(i, k) != 0) {
          r = i;
          break;
        }
      if (r < 0) return 0;
      for (long long j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(r, j));
      sign = -sign;
    }
    for (long long i = k + 1; i < n; ++i)
      for (long long j = k + 1; j < n; ++j)
        w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
    prev = w.at(k, k);
  }
  return sign > 0 ? w.at(n - 1, n - 1) : -w.at(n - 1, n - 1);
}

namespace {

struct SnfWork {
  IntMatrix d, u, ui, v, vi;

  // row_r -= q * row_t on D; U tracks from the left, Ui from the right.
  void row_sub(long long r, long long t, const bigint& q) {
    for (long long j = 0; j < d.cols; ++j) d.at(r, j) -= q * d.at(t, j);
    for (long long j = 0; j < u.cols; ++j) u.at(r, j) -= q * u.at(t, j);
    for (long long i = 0; i < ui.rows; ++i) ui.at(i, t) += q * ui.at(i, r);
  }
  void row_swap(long long r, long long t) {
    if (r == t) return;
    for (long long j = 0; j < d.cols; ++j) std::swap(d.at(r, j), d.at(t, j));
    for (long long j = 0; j < u.cols; ++j) std::swap(u.at(r, j), u.at(t, j));
    for (long long i = 0; i < ui.rows; ++i) std::swap(ui.at(i, r), ui.at(i, t));
  }
  void row_negate(long long r) {
    for (long long j = 0; j < d.cols; ++j) d.at(r, j) = -d.at(r, j);
    for (long long j = 0; j < u.cols; ++j) u.at(r, j) = -u.at(r, j);
    for (long long i = 0; i < ui.rows; ++i) ui.at(i, r) = -ui.at(i, r);
  }
  void row_add(long long t, long long s) {  // row_t += row_s
    for (long long j = 0; j < d.cols; ++j) d.at(t, j) += d.at(s, j);
    for (long long j = 0; j < u.cols; ++j) u.at(t, j) += u.at(s, j);
    for (long long i = 0; i < ui.rows; ++i) ui.at(i, s) -= ui.at(i, t);
  }
  void col_sub(long long c, long long t, const bigint& q) {
    for (long long i = 0; i < d.rows; ++i) d.at(i, c) -= q * d.at(i, t);
    for (long long i = 0; i < v.rows; ++i) v.at(i, c) -= q * v.at(i, t);
    for (long long j = 0; j < vi.cols; ++j) vi.at(t, j) += q * vi.at(c, j);
  }
  void col_swap(long long c, long long t) {
    if (c == t) return;
    for (long long i = 0; i < d.rows; ++i) std::swap(d.at(i, c), d.at(i, t));
    for (long long i = 0; i < v.rows; ++i) std::swap(v.at(i, c), v.at(i, t));
    for (long long j = 0; j < vi.cols; ++j) std::swap(vi.at(c, j), vi.at(t, j));
  }
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
  SnfWork w;
  w.d = m;
  w.u = IntMatrix::identity(m.rows);
  w.ui = IntMatrix::identity(m.rows);
  w.v = IntMatrix::identity(m.cols);
  w.vi = IntMatrix::identity(m.cols);

  const long long steps = std::min(m.rows, m.cols);
  for (long long t = 0; t < steps; ++t) {
    for (;;) {
      // Deterministic pivot: smallest nonzero |entry| in the trailing block,
      // ties broken row-major.
      long long pr = -1, pc = -1;
      bigint best;
      for (long long i = t; i < m.rows; ++i)
        for (long long j = t; j < m.cols; ++j) {
          const bigint& e = w.d.at(i, j);
          if (e == 0) continue;
          bigint ae = e < 0 ? -e : e;
          if (pr < 0 || ae < best) {
            best = ae;
            pr = i;
            pc = j;
          }
        }
      if (pr < 0) {
        t = steps;  // trailing block is zero; done
        break;
      }
      w.row_swap(t, pr);
      w.col_swap(t, pc);

      bool reduced = true;
      for (long long i = t + 1; i < m.rows; ++i) {
        if (w.d.at(i, t) == 0) continue;
        bigint q = w.d.at(i, t) / w.d.at(t, t);
        if (q != 0) w.row_sub(i, t, q);
        if (w.d.at(i, t) != 0) reduced = false;
      }
      for (long long j = t + 1; j < m.cols; ++j) {
        if (w.d.at(t, j) == 0) continue;
        bigint q = w.d.at(t, j) / w.d.at(t, t);
        if (q != 0) w.col_sub(j, t, q);
        if (w.d.at(t, j) != 0) reduced = false;
      }
      if (!reduced) continue;  // remainders left; re-pick a smaller pivot

      // Pivot must divide the whole trailing block for the divisor chain.
      bool divides = true;
      for (long long i = t + 1; i < m.rows && divides; ++i)
        for (long long j = t + 1; j < m.cols && divides; ++j)
          if (w.d.at(i, j) % w.d.at(t, t) != 0) {
            w.row_add(t, i);
            divides = false;
          }
      if (divides) break;
    }
    if (t >= steps) break;
    if (w.d.at(t, t) < 0) w.row_negate(t);
  }

  SmithResult r;
  r.u = std::move(w.u);
  r.d = std::move(w.d);
  r.v = std::move(w.v);
  r.u_inv = std::move(w.ui);
  r.v_inv = std::move(w.vi);
  r.rank = 0;
  for (long long i = 0; i < steps; ++i)
    if (r.d.at(i, i) != 0) ++r.rank;
  return r;
}

bigint FgAbelianGroup::torsion_order() const {
  bigint t = 1;
  for (const bigint& d : invariant_factors) t *= d;
  return t;
}

FgAbelianGroup free_group(long long rank) {
  FgAbelianGroup g;
  g.rank = rank;
  return g;
}

FgAbelianGroup cyclic_group(const bigint& order) {
  if (order < 1) throw UsageError("cyclic group order must be >= 1");
  FgAbelianGroup g;
  if (order >= 2) g.invariant_factors.push_back(order);
  return g;
}

namespace {

// Canonicalize an arbitrary multiset of cyclic orders into a divisor chain by
// presenting the direct sum and reading off the Smith form.
std::vector<bigint> canonical_chain(std::vector<bigint> orders) {
  orders.erase(std::remove(orders.begin(), orders.end(), bigint(1)), orders.end());
  if (orders.empty()) return {};
  const long long n = static_cast<long long>(orders.size());
  IntMatrix rel(n, n);
  for (long long i = 0; i < n; ++i) rel.at(i, i) = orders[static_cast<std::size_t>(i)];
  SmithResult s = smith_normal_form(rel);
  std::vector<bigint> chain;
  for (long long i = 0; i < n; ++i)
    if (s.d.at(i, i) >= 2) chain.push_back(s.d.at(i, i));
  return chain;
}

}  // namespace

FgAbelianGroup direct_sum(const FgAbelianGroup& x, const FgAbelianGroup& y) {
  FgAbelianGroup g;
  g.rank = x.rank + y.rank;
  std::vector<bigint> orders = x.invariant_factors;
  orders.insert(orders.end(), y.invariant_factors.begin(), y.invariant_factors.end());
  g.invariant_factors = canonical_chain(std::move(orders));
  return g;
}

std::string group_to_string(const FgAbelianGroup& g) {
  if (g.is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (g.rank == 1) {
    os << "Z";
    first = false;
  } else if (g.rank > 1) {
    os << "Z^" << g.rank;
    first = false;
  }
  for (const bigint& d : g.invariant_factors) {
    if (!first) os << " + ";
    os << "Z_" << d;
    first = false;
  }
  return os.str();
}

FgAbelianGroup parse_group(const std::string& text) {
  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  auto parse_positive = [&](const std::string& s) -> bigint {
    if (s.empty()) throw ParseError("empty integer in group expression");
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw ParseError("bad integer '" + s + "' in group expression");
    bigint v(s);
    if (v < 1) throw ParseError("group component must be positive in '" + s + "'");
    return v;
  };

  std::string body = trim(text);
  if (body.empty()) throw ParseError("empty group expression");
  if (body == "0") return FgAbelianGroup{};

  FgAbelianGroup g;
  std::vector<bigint> orders;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t plus = body.find('+', pos);
    std::string tok = trim(plus == std::string::npos ? body.substr(pos)
                                                     : body.substr(pos, plus - pos));
    if (tok.empty()) throw ParseError("empty component in group expression '" + body + "'");
    if (tok == "Z") {
      g.rank += 1;
    } else if (tok.rfind("Z^", 0) == 0) {
      bigint r = parse_positive(tok.substr(2));
      if (r > 64) throw ParseError("free rank too large in '" + tok + "'");
      g.rank += r.convert_to<long long>();
    } else if (tok.rfind("Z_", 0) == 0) {
      orders.push_back(parse_positive(tok.substr(2)));
    } else {
      throw ParseError("unrecognized group component '" + tok + "'");
    }
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  g.invariant_factors = canonical_chain(std::move(orders));
  return g;
}

bool group_less(const FgAbelianGroup& x, const FgAbelianGroup& y) {
  if (x.rank != y.rank) return x.rank < y.rank;
  if (x.invariant_factors.size() != y.invariant_factors.size())
    return x.invariant_factors.size() < y.invariant_factors.size();
  return x.invariant_factors < y.invariant_factors;
}

FgAbelianGroup group_from_presentation(const IntMatrix& m) { return present(m).group; }

Presentation present(const IntMatrix& relations) {
  const long long n = relations.rows;
  SmithResult s = smith_normal_form(relations);

  auto diag = [&](long long i) -> bigint {
    if (i < std::min(relations.rows, relations.cols)) return s.d.at(i, i);
    return 0;
  };

  std::vector<long long> free_idx, torsion_idx;
  for (long long i = 0; i < n; ++i) {
    bigint d = diag(i);
    if (d == 0)
      free_idx.push_back(i);
    else if (d >= 2)
      torsion_idx.push_back(i);
  }

  Presentation p;
  p.group.rank = static_cast<long long>(free_idx.size());
  for (long long i : torsion_idx) p.group.invariant_factors.push_back(diag(i));

  const long long a = p.group.ambient_dim();
  p.generator_map = IntMatrix(n, a);
  p.class_map = IntMatrix(a, n);
  long long col = 0;
  auto emit = [&](long long i) {
    for (long long r = 0; r < n; ++r) p.generator_map.at(r, col) = s.u_inv.at(r, i);
    for (long long c = 0; c < n; ++c) p.class_map.at(col, c) = s.u.at(i, c);
    ++col;
  };
  for (long long i : free_idx) emit(i);
  for (long long i : torsion_idx) emit(i);
  return p;
}

GroupHom make_hom(const FgAbelianGroup& domain, const FgAbelianGroup& codomain,
                  const IntMatrix& matrix) {
  if (matrix.rows != codomain.ambient_dim() || matrix.cols != domain.ambient_dim())
    throw IllDefinedHom("hom matrix shape does not match the generator counts");
  for (long long j = 0; j < domain.torsion_count(); ++j) {
    const bigint& dj = domain.invariant_factors[static_cast<std::size_t>(j)];
    const long long c = domain.rank + j;
    for (long long i = 0; i < codomain.rank; ++i)
      if (matrix.at(i, c) != 0)
        throw IllDefinedHom("torsion generator maps to an infinite-order element");
    for (long long i = 0; i < codomain.torsion_count(); ++i) {
      const bigint& ei = codomain.invariant_factors[static_cast<std::size_t>(i)];
      if ((matrix.at(codomain.rank + i, c) * dj) % ei != 0)
        throw IllDefinedHom("torsion relation not respected by the matrix");
    }
  }
  return GroupHom{domain, codomain, matrix};
}

GroupHom identity_hom(const FgAbelianGroup& g) {
  return make_hom(g, g, IntMatrix::identity(g.ambient_dim()));
}

GroupHom zero_hom(const FgAbelianGroup& domain, const FgAbelianGroup& codomain) {
  return make_hom(domain, codomain, IntMatrix::zero(codomain.ambient_dim(), domain.ambient_dim()));
}

GroupHom compose(const GroupHom& g, const GroupHom& f) {
  if (!(f.codomain == g.domain)) throw IllDefinedHom("composition through mismatched groups");
  return make_hom(f.domain, g.codomain, mat_mul(g.matrix, f.matrix));
}

namespace {

// Generators of { x in Z^n : M x lies in the column lattice of L }.
IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& l) {
  IntMatrix a = hstack(m, l);
  SmithResult s = smith_normal_form(a);
  const long long n = m.cols;
  const long long free_cols = a.cols - s.rank;
  IntMatrix gen(n, free_cols);
  for (long long j = 0; j < free_cols; ++j)
    for (long long i = 0; i < n; ++i) gen.at(i, j) = s.v.at(i, s.rank + j);
  return gen;
}

// Is v inside the column lattice of B (described by its Smith data)?
bool in_lattice(const SmithResult& s, const std::vector<bigint>& v) {
  const long long n = s.u.rows;
  for (long long i = 0; i < n; ++i) {
    bigint ui = 0;
    for (long long j = 0; j < n; ++j) ui += s.u.at(i, j) * v[static_cast<std::size_t>(j)];
    if (i < s.rank) {
      if (ui % s.d.at(i, i) != 0) return false;
    } else if (ui != 0) {
      return false;
    }
  }
  return true;
}

// Every column of candidate must lie in the column lattice of basis.
bool lattice_contained(const IntMatrix& candidate, const SmithResult& basis) {
  std::vector<bigint> v(static_cast<std::size_t>(candidate.rows));
  for (long long j = 0; j < candidate.cols; ++j) {
    for (long long i = 0; i < candidate.rows; ++i) v[static_cast<std::size_t>(i)] = candidate.at(i, j);
    if (!in_lattice(basis, v)) return false;
  }
  return true;
}

// Abstract class and inclusion of span(W + relations)/relations inside parent.
Subgroup lattice_subgroup(const FgAbelianGroup& parent, const IntMatrix& w) {
  const IntMatrix lp = relation_lattice(parent);
  IntMatrix wfull = hstack(w, lp);
  SmithResult s = smith_normal_form(wfull);
  const long long n = parent.ambient_dim();
  const long long r = s.rank;

  // Lattice basis: column i of u_inv scaled by d_i, i < r.
  IntMatrix kb(n, r);
  for (long long j = 0; j < r; ++j)
    for (long long i = 0; i < n; ++i) kb.at(i, j) = s.u_inv.at(i, j) * s.d.at(j, j);

  // Relation coordinates of the parent's relation lattice in that basis.
  IntMatrix rel(r, parent.torsion_count());
  for (long long c = 0; c < parent.torsion_count(); ++c) {
    for (long long i = 0; i < n; ++i) {
      bigint ui = 0;
      for (long long j = 0; j < n; ++j)
        if (lp.at(j, c) != 0) ui += s.u.at(i, j) * lp.at(j, c);
      if (i < r) {
        if (ui % s.d.at(i, i) != 0)
          throw NumericalError("relation lattice escapes its enclosing sublattice");
        rel.at(i, c) = ui / s.d.at(i, i);
      } else if (ui != 0) {
        throw NumericalError("relation lattice escapes its enclosing sublattice");
      }
    }
  }

  Presentation p = present(rel);
  Subgroup sub;
  sub.group = p.group;
  sub.inclusion = mat_mul(kb, p.generator_map);
  return sub;
}

}  // namespace

Subgroup kernel_subgroup(const GroupHom& f) {
  IntMatrix gens = preimage_lattice(f.matrix, relation_lattice(f.codomain));
  return lattice_subgroup(f.domain, gens);
}

Subgroup image_subgroup(const GroupHom& f) { return lattice_subgroup(f.codomain, f.matrix); }

QuotientGroup cokernel_quotient(const GroupHom& f) {
  Presentation p = present(hstack(f.matrix, relation_lattice(f.codomain)));
  QuotientGroup q;
  q.group = p.group;
  q.projection = p.class_map;
  return q;
}

FgAbelianGroup hom_kernel(const GroupHom& f) { return kernel_subgroup(f).group; }
FgAbelianGroup hom_image(const GroupHom& f) { return image_subgroup(f).group; }
FgAbelianGroup hom_cokernel(const GroupHom& f) { return cokernel_quotient(f).group; }

ExactnessReport check_exact(const std::vector<GroupHom>& arrows, bool cyclic) {
  if (arrows.empty()) throw UsageError("exactness check needs at least one arrow");
  const long long n = static_cast<long long>(arrows.size());
  for (long long j = 0; j < n; ++j) {
    const GroupHom& out = arrows[static_cast<std::size_t>((j + 1) % n)];
    if (!cyclic && j + 1 >= n) break;
    if (!(arrows[static_cast<std::size_t>(j)].codomain == out.domain))
      throw UsageError("consecutive arrows do not share a node group");
  }

  ExactnessReport rep;
  auto check_node = [&](const GroupHom& fin, const GroupHom& fout) -> bool {
    const FgAbelianGroup& node = fin.codomain;
    IntMatrix im = hstack(fin.matrix, relation_lattice(node));
    IntMatrix ker = preimage_lattice(fout.matrix, relation_lattice(fout.codomain));
    SmithResult im_s = smith_normal_form(im);
    SmithResult ker_s = smith_normal_form(ker);
    return lattice_contained(im, ker_s) && lattice_contained(ker, im_s);
  };

  if (cyclic) {
    rep.node_ok.resize(static_cast<std::size_t>(n));
    for (long long j = 0; j < n; ++j) {
      bool ok = check_node(arrows[static_cast<std::size_t>((j + n - 1) % n)],
                           arrows[static_cast<std::size_t>(j)]);
      rep.node_ok[static_cast<std::size_t>(j)] = ok;
      if (!ok && rep.exact) {
        rep.exact = false;
        rep.first_failure = j;
        rep.detail = "image != kernel at node " + std::to_string(j);
      }
    }
  } else {
    rep.node_ok.resize(static_cast<std::size_t>(n - 1));
    for (long long j = 1; j < n; ++j) {
      bool ok = check_node(arrows[static_cast<std::size_t>(j - 1)], arrows[static_cast<std::size_t>(j)]);
      rep.node_ok[static_cast<std::size_t>(j - 1)] = ok;
      if (!ok && rep.exact) {
        rep.exact = false;
        rep.first_failure = j;
        rep.detail = "image != kernel at node " + std::to_string(j);
      }
    }
  }
  return rep;
}

namespace {

constexpr long long kMaxExtensionEnum = 200000;

// Enumerate surjections G -> C of the normalized shape (identity on the free
// part, arbitrary twists into the torsion part) and test their kernels.
bool extension_by_enumeration(const FgAbelianGroup& g, const FgAbelianGroup& a,
                              const FgAbelianGroup& c) {
  const long long gr = g.rank, gk = g.torsion_count();
  const long long cr = c.rank, ck = c.torsion_count();

  // Entry ranges: free columns run mod e_i; torsion column j contributes
  // multiples of e_i / gcd(e_i, d_j).
  std::vector<bigint> moduli;    // number of choices per slot
  std::vector<bigint> strides;   // increment per choice
  std::vector<std::pair<long long, long long>> slot;  // (torsion row i, column)
  bigint total = 1;
  for (long long i = 0; i < ck; ++i) {
    const bigint& ei = c.invariant_factors[static_cast<std::size_t>(i)];
    for (long long jcol = 0; jcol < gr; ++jcol) {
      moduli.push_back(ei);
      strides.push_back(1);
      slot.push_back({i, jcol});
      total *= ei;
    }
    for (long long j = 0; j < gk; ++j) {
      const bigint& dj = g.invariant_factors[static_cast<std::size_t>(j)];
      bigint gcd = boost::multiprecision::gcd(ei, dj);
      moduli.push_back(gcd);
      strides.push_back(ei / gcd);
      slot.push_back({i, gr + j});
      total *= gcd;
    }
    if (total > kMaxExtensionEnum)
      throw BoundTooSmall(to_ll_sat(total), kMaxExtensionEnum);
  }

  IntMatrix base(c.ambient_dim(), g.ambient_dim());
  for (long long i = 0; i < cr; ++i) base.at(i, i) = 1;  // rank checked by caller

  std::vector<bigint> odo(moduli.size(), 0);
  for (;;) {
    IntMatrix mat = base;
    for (std::size_t s = 0; s < odo.size(); ++s)
      mat.at(cr + slot[s].first, slot[s].second) = odo[s] * strides[s];
    GroupHom rho = make_hom(g, c, mat);
    if (hom_cokernel(rho).is_trivial() && hom_kernel(rho) == a) return true;

    std::size_t s = 0;
    for (; s < odo.size(); ++s) {
      odo[s] += 1;
      if (odo[s] < moduli[s]) break;
      odo[s] = 0;
    }
    if (s == odo.size()) break;
  }
  return false;
}

}  // namespace

bool admits_extension(const FgAbelianGroup& g, const FgAbelianGroup& a,
                      const FgAbelianGroup& c) {
  if (g.rank != a.rank + c.rank) return false;
  if (c.is_trivial()) return g == a;
  if (a.is_trivial()) return g == c;
  if (c.is_free()) return g == direct_sum(a, free_group(c.rank));
  return extension_by_enumeration(g, a, c);
}

namespace {

void torsion_chains(const bigint& remaining, const bigint& prev, std::vector<bigint>& chain,
                    std::vector<std::vector<bigint>>& out) {
  if (remaining == 1) {
    out.push_back(chain);
    return;
  }
  // Divisors of `remaining` that are multiples of the previous factor.
  for (bigint m = 2; m * m <= remaining; ++m) {
    if (remaining % m != 0) continue;
    const bigint duo[2] = {m, bigint(remaining / m)};
    for (const bigint& cand : duo) {
      if (cand < 2) continue;
      if (prev > 1 && cand % prev != 0) continue;
      if (cand < prev) continue;
      chain.push_back(cand);
      torsion_chains(remaining / cand, cand, chain, out);
      chain.pop_back();
    }
    if (m == remaining / m) break;  // avoid duplicating a square divisor pair
  }
  // remaining itself as the final factor
  if ((prev <= 1 || remaining % prev == 0) && remaining >= 2 && remaining >= prev) {
    chain.push_back(remaining);
    torsion_chains(1, remaining, chain, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<FgAbelianGroup> solve_extension(const FgAbelianGroup& a, const FgAbelianGroup& c,
                                            long long bound) {
  if (bound < 2) throw UsageError("extension bound must be at least 2");
  bigint max_factor = 0;
  for (const bigint& d : a.invariant_factors) max_factor = std::max(max_factor, d);
  for (const bigint& d : c.invariant_factors) max_factor = std::max(max_factor, d);
  if (max_factor > bound) throw BoundTooSmall(to_ll_sat(max_factor), bound);

  if (c.is_free()) return {direct_sum(a, free_group(c.rank))};

  const bigint torsion = a.torsion_order() * c.torsion_order();
  if (torsion > 1000000) throw BoundTooSmall(to_ll_sat(torsion), bound);

  std::vector<std::vector<bigint>> chains;
  std::vector<bigint> chain;
  torsion_chains(torsion, 1, chain, chains);

  std::vector<FgAbelianGroup> out;
  for (const auto& ch : chains) {
    FgAbelianGroup x;
    x.rank = a.rank + c.rank;
    x.invariant_factors = ch;
    if (admits_extension(x, a, c)) out.push_back(x);
  }
  std::sort(out.begin(), out.end(), group_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());

  const FgAbelianGroup split = direct_sum(a, c);
  if (std::find(out.begin(), out.end(), split) == out.end())
    throw NumericalError("extension enumeration missed the split extension");
  return out;
}

}  // namespace cil
