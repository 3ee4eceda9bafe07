#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cil/torus_grid.hpp"

namespace cil {

// A pair of real-valued 1x1 symbols (b, c) with b^2 + c^2 = 1 pointwise:
// the coordinates of a map into the unit circle.
struct CirclePair {
  MatrixSymbol b;
  MatrixSymbol c;
};

// (cos, sin) of the angle along one grid axis.
CirclePair standard_circle_pair(const TorusGrid& grid, int axis = 0);

// Checks both components are 1x1, real within tol, and b^2 + c^2 = 1
// within tol. Raises ShapeInconsistent / NumericalError.
void validate_circle_pair(const CirclePair& pair, double tol = 1e-12);

// Repeat a symbol along extra axes: axes[k] names the axis of `big` that
// axis k of `s` maps to (injective, ascending not required). Result value at
// a big-grid point is s at the pulled-back multi-index.
MatrixSymbol extend(const MatrixSymbol& s, const TorusGrid& big,
                    const std::vector<int>& axes);

// The projection-valued symbol built from a unitary u and a circle pair:
//   Q11 = I - (2I - u - u*) (1-b)/8
//   Q12 = (u^2 - I)/2 * sqrt((1-b)/8) - (u - I)^2 * c/8
//   Q21 = Q12*           Q22 = (2I - u - u*) (1-b)/8
// The square root takes the nonnegative real branch; roundoff negatives of
// magnitude <= 1e-14 are clamped to zero. Result is 2k x 2k for k x k u.
MatrixSymbol bott_projection(const MatrixSymbol& u, const CirclePair& pair,
                             double tol = 1e-10);

// Homotopy of projections joining diag(I,0) at t=0 to a conjugate of it at
// t=1, with u entering through the rotation trick. Closed form in
// c = cos(pi t/2), s = sin(pi t/2):
//   q11 = I - (2I-u-u*) c^2 s^2
//   q12 = (u-I) c^3 s + u(u-I) c s^3,   q21 = q12*,
//   q22 = (2I-u-u*) c^2 s^2
MatrixSymbol theta_path(const MatrixSymbol& u, double t, double tol = 1e-10);

// The whole theta family as one symbol on the 2-torus (u-axis first, then a
// t-circle of t_size points, t = angle/(2 pi)). Pointwise it coincides with
// bott_projection of the lifted u against the standard circle pair on the
// t-axis.
MatrixSymbol theta_circle_form(const MatrixSymbol& u_on_circle, int t_size,
                               double tol = 1e-10);

// Unitary loop attached to a projection: z p + (I - p), z a 1x1 unimodular
// symbol, p a projection symbol (validated within tol).
MatrixSymbol bott_loop(const MatrixSymbol& p, const MatrixSymbol& z,
                       double tol = 1e-10);

// Idempotent attached to an almost-inverse pair (a, b), exact for any a, b:
//   [ 2ab - (ab)^2      a(2 - ba)(I - ba) ]
//   [ (I - ba) b        (I - ba)^2        ]
MatrixSymbol index_projection(const MatrixSymbol& a, const MatrixSymbol& b);

// exp(2 pi i h) with h = (p + p*)/2, via Hermitian eigendecomposition.
// Projections map to the identity; paths of near-projections map to loops of
// unitaries.
MatrixSymbol unitary_exponential(const MatrixSymbol& p);

// Elliptic 2m x 2m symbol on a 3-torus grid (axes alpha, beta, lambda):
// m diagonal copies of  I + f(lambda) Q(e^{i alpha}, cos beta, sin beta)
// with f(lambda) = -cos(lambda) + i sin(lambda) - 1. Its determinant is
// (-e^{-i lambda})^m, so the symbol is invertible everywhere.
MatrixSymbol sigma_T(const TorusGrid& grid3, int blocks = 1);

// Smooth triple (b4, b5, b6) with b4^2 + b5^2 + b6^2 = 1 identically:
//   b4 = (1 + x^2 + y^2)^{-1/2},  b5 = -x b4,  b6 = -y b4.
std::array<double, 3> b_prime_triple(double x, double y);

// Random smooth k x k unitary loop on a 1-axis grid: exp(i H(theta)) where H
// is a random Hermitian trigonometric polynomial of degree <= bandwidth
// (coefficients decay like 1/(1+m^2)). Deterministic in seed; the generator
// derives all randomness from explicitly specified integer arithmetic.
MatrixSymbol random_smooth_unitary(const TorusGrid& grid1, int k, int bandwidth,
                                   std::uint64_t seed);

// Random 1x1 nowhere-zero smooth loop with known winding: z^w * exp(g) for a
// random smooth scalar g. Returns the symbol; its winding number is w.
MatrixSymbol random_scalar_loop(const TorusGrid& grid1, int winding,
                                std::uint64_t seed);

namespace detail {
// Deterministic standard normal stream independent of the standard library's
// distribution implementations.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed);
  double next();
  double uniform();  // in [0, 1)

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};
}  // namespace detail

}  // namespace cil
