#include "cil/lattice_fredholm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "cil/fedosov_index.hpp"
#include "cil/torus_grid.hpp"

namespace cil {

namespace {

// Calibrated once against exact_kernel_band on the step-multiplier operator
// (index -1) and frozen by test; see band_symbol_index.
constexpr long long kWindingSign = +1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::MatrixXcd eval_checked(const Multiplier& m, const LatticePoint& p) {
  Eigen::MatrixXcd v = m.eval(p);
  if (v.rows() != m.rows || v.cols() != m.cols)
    throw ShapeInconsistent("multiplier evaluation has wrong shape");
  return v;
}

void for_box(int dim, long long V, const std::function<void(const LatticePoint&)>& fn) {
  LatticePoint p(static_cast<std::size_t>(dim), -V);
  while (true) {
    fn(p);
    int a = dim - 1;
    for (; a >= 0; --a) {
      if (++p[static_cast<std::size_t>(a)] <= V) break;
      p[static_cast<std::size_t>(a)] = -V;
    }
    if (a < 0) break;
  }
}

bool is_pure_multiplier(const LatticeOperator& a) {
  if (a.terms.size() != 1) return false;
  for (long long s : a.terms[0].shift)
    if (s != 0) return false;
  return true;
}

long long max_abs_shift(const LatticeOperator& a) {
  long long s = 0;
  for (const LatticeTerm& t : a.terms)
    for (long long c : t.shift) s = std::max(s, std::llabs(c));
  return s;
}

// Kernel dimension of the windowed linear system Au = 0 with unknowns in
// [-(V+S), V+S] and equations in [-(V+2S), V+2S]; exact for operators whose
// two constant tails are single invertible shifts (zeros propagate inward).
long long band_nullity(const LatticeOperator& a, long long V, double rank_tol) {
  const long long S = std::max<long long>(1, max_abs_shift(a));
  const int k = a.rows;
  const long long lo_u = -(V + S), hi_u = V + S;
  const long long lo_e = -(V + 2 * S), hi_e = V + 2 * S;
  const long long nu = hi_u - lo_u + 1;
  const long long ne = hi_e - lo_e + 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(ne * k, nu * k);
  for (long long p = lo_e; p <= hi_e; ++p) {
    for (const LatticeTerm& t : a.terms) {
      long long q = p + t.shift[0];
      if (q < lo_u || q > hi_u) continue;
      M.block((p - lo_e) * k, (q - lo_u) * k, k, k) += eval_checked(t.m, {p});
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  long long null = nu * k - svd.singularValues().size();
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] < rank_tol) ++null;
  return null;
}

// Identify the single nonzero tail term on one side; throws TailNotMonomial.
void check_monomial_tail(const LatticeOperator& a, bool positive_side, double rank_tol) {
  int nonzero = 0;
  Eigen::MatrixXcd tail;
  for (const LatticeTerm& t : a.terms) {
    const Eigen::MatrixXcd& lim = positive_side ? t.m.limit_pos : t.m.limit_neg;
    if (lim.size() == 0) throw TailNotMonomial("a multiplier declares no limit value");
    if (lim.cwiseAbs().maxCoeff() > 1e-14) {
      ++nonzero;
      tail = lim;
    }
  }
  const char* side = positive_side ? "+inf" : "-inf";
  if (nonzero != 1)
    throw TailNotMonomial("tail at " + std::string(side) + " has " +
                          std::to_string(nonzero) + " nonzero shift terms; need exactly 1");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tail);
  if (svd.singularValues().minCoeff() < rank_tol)
    throw TailNotMonomial("tail coefficient at " + std::string(side) + " is singular");
}

void check_band_preconditions(const LatticeOperator& a, const LatticeOptions& opts) {
  if (a.dim != 1) throw UsageError("band kernel method needs a 1-dimensional lattice");
  if (a.terms.empty()) throw UsageError("operator has no terms");
  for (const LatticeTerm& t : a.terms) {
    if (!t.m.has_limits) throw TailNotMonomial("a multiplier declares no limits");
    if (t.m.variation_window > opts.window)
      throw WindowTooSmall("operator varies beyond the window: variation radius " +
                           std::to_string(t.m.variation_window) + " > window " +
                           std::to_string(opts.window));
    // Spot-check the declared constancy outside the window.
    for (long long probe : {opts.window + 1, opts.window + 7, 2 * opts.window + 3}) {
      for (long long sgn : {1LL, -1LL}) {
        Eigen::MatrixXcd v = eval_checked(t.m, {sgn * probe});
        const Eigen::MatrixXcd& lim = sgn > 0 ? t.m.limit_pos : t.m.limit_neg;
        if ((v - lim).cwiseAbs().maxCoeff() > opts.tail_match_tol)
          throw WindowTooSmall(
              "multiplier does not match its declared limit outside the window");
      }
    }
  }
  check_monomial_tail(a, true, opts.rank_tol);
  check_monomial_tail(a, false, opts.rank_tol);
}

bool band_applicable(const LatticeOperator& a, const LatticeOptions& opts) {
  try {
    check_band_preconditions(a, opts);
    return true;
  } catch (const Error&) {
    return false;
  }
}

MatrixSymbol limit_symbol(const LatticeOperator& a, bool positive_side, int N) {
  TorusGrid g({N});
  MatrixSymbol f(g, 1, 1);
  for (int j = 0; j < N; ++j) {
    double th = g.angle(0, j);
    cplx v = 0.0;
    for (const LatticeTerm& t : a.terms) {
      const Eigen::MatrixXcd& lim = positive_side ? t.m.limit_pos : t.m.limit_neg;
      v += lim(0, 0) * std::exp(cplx(0.0, static_cast<double>(t.shift[0]) * th));
    }
    f.raw()[static_cast<std::size_t>(j)] = v;
  }
  return f;
}

}  // namespace

LatticeVector apply(const LatticeOperator& a, const LatticeVector& u) {
  LatticeVector out;
  for (const auto& [q, v] : u) {
    for (const LatticeTerm& t : a.terms) {
      LatticePoint p(q.size());
      for (std::size_t i = 0; i < q.size(); ++i) p[i] = q[i] - t.shift[i];
      Eigen::VectorXcd contrib = eval_checked(t.m, p) * v;
      auto it = out.find(p);
      if (it == out.end())
        out.emplace(p, contrib);
      else
        it->second += contrib;
    }
  }
  return out;
}

LatticeOperator lattice_adjoint(const LatticeOperator& a) {
  LatticeOperator adj;
  adj.dim = a.dim;
  adj.rows = a.cols;
  adj.cols = a.rows;
  for (const LatticeTerm& t : a.terms) {
    LatticeTerm nt;
    nt.shift.resize(t.shift.size());
    for (std::size_t i = 0; i < t.shift.size(); ++i) nt.shift[i] = -t.shift[i];
    Multiplier m;
    m.dim = t.m.dim;
    m.rows = t.m.cols;
    m.cols = t.m.rows;
    Multiplier orig = t.m;
    LatticePoint shift = t.shift;
    m.eval = [orig, shift](const LatticePoint& p) -> Eigen::MatrixXcd {
      LatticePoint q(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] - shift[i];
      return orig.eval(q).adjoint();
    };
    m.has_limits = orig.has_limits;
    if (orig.has_limits) {
      m.limit_neg = orig.limit_neg.adjoint();
      m.limit_pos = orig.limit_pos.adjoint();
    }
    m.invertible_far_field = orig.invertible_far_field;
    long long extra = 0;
    for (long long c : shift) extra = std::max(extra, std::llabs(c));
    m.variation_window = orig.variation_window + extra;
    nt.m = m;
    adj.terms.push_back(std::move(nt));
  }
  return adj;
}

cplx lattice_dot(const LatticeVector& u, const LatticeVector& v) {
  cplx s = 0.0;
  for (const auto& [p, uv] : u) {
    auto it = v.find(p);
    if (it != v.end()) s += uv.dot(it->second);  // Eigen dot conjugates the left factor
  }
  return s;
}

KernelCount multiplier_kernel_dims(const LatticeOperator& a, const LatticeOptions& opts) {
  auto t0 = Clock::now();
  if (!is_pure_multiplier(a)) throw NotPureMultiplier();
  const Multiplier& m = a.terms[0].m;
  if (m.dim == 1) {
    if (!m.has_limits) throw UsageError("multiplier declares no limit metadata");
  } else if (!m.invertible_far_field) {
    throw UsageError("multiplier does not declare an invertible far field");
  }
  if (m.variation_window > opts.window)
    throw WindowTooSmall("multiplier varies beyond the window");

  auto scan = [&](const Multiplier& mm) -> long long {
    long long count = 0;
    double shell_min = -1.0;
    for_box(a.dim, opts.window, [&](const LatticePoint& p) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval_checked(mm, p));
      // dim ker m(p) = cols - rank.
      long long zeros = mm.cols - static_cast<long long>(svd.singularValues().size());
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] < opts.rank_tol) ++zeros;
      count += zeros;
      long long linf = 0;
      for (long long c : p) linf = std::max(linf, std::llabs(c));
      if (linf == opts.window) {
        double smin = svd.singularValues().size() > 0 ? svd.singularValues().minCoeff() : 0.0;
        if (shell_min < 0 || smin < shell_min) shell_min = smin;
      }
    });
    if (shell_min < opts.shell_margin) throw WindowTooSmall(shell_min, opts.shell_margin);
    return count;
  };

  // Kernel counts null directions of m(p) (columns), cokernel those of the
  // adjoint multiplier; both scans certify their own boundary shell.
  const LatticeOperator adj = lattice_adjoint(a);
  KernelCount kc;
  kc.ker_dim = scan(m);
  kc.coker_dim = scan(adj.terms[0].m);
  kc.index = kc.ker_dim - kc.coker_dim;
  kc.window = opts.window;
  kc.certificate = "exact_scan";
  kc.methods_agreeing = {"exact_scan"};
  kc.elapsed_seconds = seconds_since(t0);
  return kc;
}

KernelCount exact_kernel_band(const LatticeOperator& a, const LatticeOptions& opts) {
  auto t0 = Clock::now();
  check_band_preconditions(a, opts);
  const LatticeOperator adj = lattice_adjoint(a);
  LatticeOptions adj_opts = opts;
  adj_opts.window = opts.window + max_abs_shift(a);

  KernelCount kc;
  kc.ker_dim = band_nullity(a, opts.window, opts.rank_tol);
  kc.coker_dim = band_nullity(adj, adj_opts.window, opts.rank_tol);
  kc.index = kc.ker_dim - kc.coker_dim;
  kc.window = opts.window;
  kc.certificate = "exact_band";
  kc.methods_agreeing = {"exact_band"};
  kc.elapsed_seconds = seconds_since(t0);
  return kc;
}

KernelCount band_symbol_index(const LatticeOperator& a, const LatticeOptions& opts) {
  auto t0 = Clock::now();
  if (a.dim != 1) throw UsageError("winding certificate needs a 1-dimensional lattice");
  if (a.rows != 1 || a.cols != 1) throw NotScalar();
  for (const LatticeTerm& t : a.terms) {
    if (t.m.rows != 1 || t.m.cols != 1) throw NotScalar();
    if (!t.m.has_limits) throw UsageError("winding certificate needs declared limits");
  }
  const int N = 256;
  IndexOptions iopts;
  iopts.singular_tol = opts.rank_tol;
  long long w[2];
  for (int side = 0; side < 2; ++side) {
    MatrixSymbol f = limit_symbol(a, side == 1, N);
    double fmin = std::numeric_limits<double>::infinity();
    for (const cplx& v : f.raw()) fmin = std::min(fmin, std::abs(v));
    if (fmin <= opts.rank_tol) throw LimitSymbolVanishes(fmin);
    w[side] = winding_number(f, iopts).rounded;
  }
  KernelCount kc;
  kc.index = kWindingSign * (w[1] - w[0]);
  kc.window = opts.window;
  kc.certificate = "winding";
  kc.methods_agreeing = {"winding"};
  kc.elapsed_seconds = seconds_since(t0);
  return kc;
}

KernelCount fredholm_index(const LatticeOperator& a, const LatticeOptions& opts) {
  auto t0 = Clock::now();
  std::vector<KernelCount> results;
  std::vector<std::string> names;

  if (is_pure_multiplier(a) &&
      (a.terms[0].m.dim == 2 ? a.terms[0].m.invertible_far_field
                             : a.terms[0].m.has_limits)) {
    results.push_back(multiplier_kernel_dims(a, opts));
    names.push_back("exact_scan");
  }
  if (a.dim == 1 && band_applicable(a, opts)) {
    results.push_back(exact_kernel_band(a, opts));
    names.push_back("exact_band");
  }
  if (a.dim == 1 && a.rows == 1 && a.cols == 1) {
    bool ok = true;
    for (const LatticeTerm& t : a.terms)
      ok = ok && t.m.has_limits && t.m.rows == 1 && t.m.cols == 1;
    if (ok) {
      try {
        results.push_back(band_symbol_index(a, opts));
        names.push_back("winding");
      } catch (const LimitSymbolVanishes&) {
        // Limit symbol hits zero: the certificate simply does not apply.
      }
    }
  }
  if (results.empty())
    throw NoApplicableMethod("operator matches no certified index method");
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].index != results[0].index)
      throw MethodDisagreement(names[0], results[0].index, names[i], results[i].index);
  }
  // Exact certificates populate kernel dimensions; prefer them.
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].ker_dim >= 0 && results[best].ker_dim < 0) best = i;
  KernelCount kc = results[best];
  kc.methods_agreeing = names;
  kc.elapsed_seconds = seconds_since(t0);
  return kc;
}

LatticeOperator step_shift_operator(long long n0) {
  auto scalar = [](cplx v) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = v;
    return m;
  };
  Multiplier b;
  b.dim = 1;
  b.eval = [n0, scalar](const LatticePoint& p) {
    return scalar(p[0] >= n0 ? 1.0 : 0.0);
  };
  b.has_limits = true;
  b.limit_neg = scalar(0.0);
  b.limit_pos = scalar(1.0);
  b.variation_window = std::llabs(n0);

  Multiplier c = b;
  c.eval = [n0, scalar](const LatticePoint& p) {
    return scalar(p[0] >= n0 ? 0.0 : 1.0);
  };
  c.limit_neg = scalar(1.0);
  c.limit_pos = scalar(0.0);

  LatticeOperator a;
  a.dim = 1;
  a.terms.push_back({{-1}, b});
  a.terms.push_back({{0}, c});
  return a;
}

LatticeOperator jk_multiplier_operator() {
  Multiplier m;
  m.dim = 2;
  m.eval = [](const LatticePoint& p) {
    double j = static_cast<double>(p[0]), k = static_cast<double>(p[1]);
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = cplx(j, -k) / std::sqrt(1.0 + j * j + k * k);
    return v;
  };
  m.invertible_far_field = true;
  m.variation_window = 0;
  LatticeOperator a;
  a.dim = 2;
  a.terms.push_back({{0, 0}, m});
  return a;
}

LatticeOperator shift_operator(long long s) {
  Multiplier one;
  one.dim = 1;
  one.eval = [](const LatticePoint&) {
    Eigen::MatrixXcd v(1, 1);
    v(0, 0) = 1.0;
    return v;
  };
  one.has_limits = true;
  one.limit_neg = one.eval({0});
  one.limit_pos = one.eval({0});
  one.variation_window = 0;
  LatticeOperator a;
  a.dim = 1;
  a.terms.push_back({{s}, one});
  return a;
}

}  // namespace cil
