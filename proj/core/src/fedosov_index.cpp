#include "cil/fedosov_index.hpp"

#include <chrono>
#include <cmath>

namespace cil {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;

long long round_to_integer(cplx raw, double tol, double* residual_out) {
  long long nearest = std::llround(raw.real());
  double residual = std::abs(raw - cplx(static_cast<double>(nearest), 0.0));
  if (residual_out) *residual_out = residual;
  if (residual > tol) throw IntegralityFailure(raw, nearest, residual);
  return nearest;
}

const char* scheme_name(DerivScheme s) {
  return s == DerivScheme::spectral ? "spectral" : "central4";
}

IndexReport winding_impl(const MatrixSymbol& f, const IndexOptions& opts,
                         const char* op_name) {
  auto t0 = std::chrono::steady_clock::now();
  if (f.grid().dim() != 1)
    throw ShapeInconsistent("winding number needs a 1-axis symbol");
  if (f.rows() != f.cols())
    throw ShapeInconsistent("winding number needs a square symbol");
  IndexReport rep;
  rep.operation = op_name;
  rep.grid_sizes = f.grid().sizes();
  rep.scheme = scheme_name(opts.scheme);
  rep.integrality_tol = opts.integrality_tol;
  rep.singular_tol = opts.singular_tol;
  rep.min_singular_value = min_singular_value(f);
  MatrixSymbol inv = pointwise_inverse(f, opts.singular_tol);
  MatrixSymbol df = derivative(f, 0, opts.scheme);
  rep.integral = integrate(trace(pointwise_mul(inv, df)));
  rep.raw = rep.integral / cplx(0.0, 2.0 * kPi);
  rep.rounded = round_to_integer(rep.raw, opts.integrality_tol, &rep.residual);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}
}  // namespace

IndexReport winding_number(const MatrixSymbol& f, const IndexOptions& opts) {
  return winding_impl(f, opts, "winding");
}

IndexReport fedosov_index(const MatrixSymbol& sigma, const IndexOptions& opts) {
  const int d = sigma.grid().dim();
  if (d == 1) {
    IndexReport rep = winding_impl(sigma, opts, "fedosov");
    return rep;
  }
  if (d != 3)
    throw ShapeInconsistent("index formula implemented for 1- and 3-axis symbols");
  if (sigma.rows() != sigma.cols())
    throw ShapeInconsistent("index needs a square symbol");

  auto t0 = std::chrono::steady_clock::now();
  IndexReport rep;
  rep.operation = "fedosov";
  rep.grid_sizes = sigma.grid().sizes();
  rep.scheme = scheme_name(opts.scheme);
  rep.integrality_tol = opts.integrality_tol;
  rep.singular_tol = opts.singular_tol;
  rep.min_singular_value = min_singular_value(sigma);

  MatrixSymbol inv = pointwise_inverse(sigma, opts.singular_tol);
  // X_a = sigma^-1 d_a sigma; the 3-form integrand contracts the three of
  // them with the Levi-Civita sign, grouped by leading axis:
  //   A_1 = tr(X_0 X_1 X_2 - X_0 X_2 X_1), and cyclic shifts for A_2, A_3.
  std::vector<MatrixSymbol> x;
  for (int a = 0; a < 3; ++a)
    x.push_back(pointwise_mul(inv, derivative(sigma, a, opts.scheme)));

  rep.contributions.resize(3);
  for (int i = 0; i < 3; ++i) {
    const MatrixSymbol& xa = x[static_cast<std::size_t>(i)];
    const MatrixSymbol& xb = x[static_cast<std::size_t>((i + 1) % 3)];
    const MatrixSymbol& xc = x[static_cast<std::size_t>((i + 2) % 3)];
    MatrixSymbol comm =
        pointwise_sub(pointwise_mul(xb, xc), pointwise_mul(xc, xb));
    rep.contributions[static_cast<std::size_t>(i)] =
        integrate(trace(pointwise_mul(xa, comm)));
  }
  rep.integral = rep.contributions[0] + rep.contributions[1] + rep.contributions[2];
  rep.raw = rep.integral / (24.0 * kPi * kPi);
  rep.rounded = round_to_integer(rep.raw, opts.integrality_tol, &rep.residual);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<IndexReport> homotopy_scan(const std::vector<MatrixSymbol>& family,
                                       const IndexOptions& opts) {
  if (family.empty()) throw UsageError("homotopy scan needs at least one symbol");
  std::vector<IndexReport> reps;
  reps.reserve(family.size());
  for (const MatrixSymbol& s : family) reps.push_back(fedosov_index(s, opts));
  for (std::size_t i = 1; i < reps.size(); ++i) {
    if (reps[i].rounded != reps[0].rounded)
      throw MethodDisagreement("family slot 0", reps[0].rounded,
                               "family slot " + std::to_string(i), reps[i].rounded);
  }
  return reps;
}

}  // namespace cil
