#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cil/errors.hpp"

namespace cil {

using LatticePoint = std::vector<long long>;

// k x k matrix function on the lattice with declared behaviour at infinity:
// on Z, limit values at -inf/+inf; on Z^2, a declared invertible far field.
// Outside variation_window (sup-norm radius) eval must match the declared
// limit form to < 1e-12.
struct Multiplier {
  int dim = 1;
  int rows = 1, cols = 1;
  std::function<Eigen::MatrixXcd(const LatticePoint&)> eval;
  bool has_limits = false;  // dim == 1 only
  Eigen::MatrixXcd limit_neg, limit_pos;
  bool invertible_far_field = false;  // dim == 2 certification flag
  long long variation_window = 0;
};

// Finite sum of shifted multipliers acting on square-summable sequences:
//   (A u)(p) = sum over terms (s, m) of m(p) * u(p + s),
// so the term (shift -1, b) realizes (A u)_j = b(j) u_{j-1}: the shift names
// the translation operator whose coefficient the multiplier is.
struct LatticeTerm {
  LatticePoint shift;
  Multiplier m;
};

struct LatticeOperator {
  int dim = 1;
  int rows = 1, cols = 1;  // scalar_size when square
  std::vector<LatticeTerm> terms;
};

// Finitely supported vector over the lattice (one column per point).
using LatticeVector = std::map<LatticePoint, Eigen::VectorXcd>;

struct KernelCount {
  long long ker_dim = -1;    // -1 = not populated by the certifying method
  long long coker_dim = -1;  // -1 = not populated
  long long index = 0;
  long long window = 0;
  std::string certificate;  // exact_scan | exact_band | winding
  std::vector<std::string> methods_agreeing;
  double elapsed_seconds = 0.0;
};

struct LatticeOptions {
  long long window = 64;          // [-window, window]^dim scan box
  double rank_tol = 1e-10;        // singular values below this count as zero
  double shell_margin = 1e-6;     // required invertibility margin on the shell
  double tail_match_tol = 1e-12;  // eval-vs-limit agreement outside the window
};

LatticeVector apply(const LatticeOperator& a, const LatticeVector& u);

// Adjoint for the pairing <u, v> = sum of u(p)^H v(p):
// term (s, m) becomes (-s, p -> m(p - s)^H).
LatticeOperator lattice_adjoint(const LatticeOperator& a);

std::complex<double> lattice_dot(const LatticeVector& u, const LatticeVector& v);

// Kernel/cokernel of a pure multiplication operator by exact scan over the
// window box: ker_dim sums dim ker m(p); cokernel via the adjoint
// multiplier. The boundary shell must be invertible with margin >=
// shell_margin and the multiplier must declare an invertible far field
// (or invertible limits on Z); certificate exact_scan.
KernelCount multiplier_kernel_dims(const LatticeOperator& a,
                                   const LatticeOptions& opts = {});

// Exact kernel/cokernel of a band operator on Z whose multipliers are
// constant outside the window and whose two constant tails are single
// invertible shift terms. The tail relation propagates zeros, so kernel
// vectors live in a finite box and Au = 0 becomes a finite linear system;
// certificate exact_band.
KernelCount exact_kernel_band(const LatticeOperator& a,
                              const LatticeOptions& opts = {});

// Index-only certificate for scalar band operators on Z with invertible
// limit symbols f_pm(theta) = sum_s m_s(pm inf) e^{i s theta}:
//   index = sign_convention * (winding(f_plus) - winding(f_minus)).
// The sign convention is a module constant calibrated against
// exact_kernel_band on the step-multiplier operator and frozen by test.
KernelCount band_symbol_index(const LatticeOperator& a,
                              const LatticeOptions& opts = {});

// Runs every certified method that applies to the operator; all computed
// indices must agree (else MethodDisagreement). Returns the most informative
// certificate, with the list of agreeing methods attached.
KernelCount fredholm_index(const LatticeOperator& a,
                           const LatticeOptions& opts = {});

// Built-in operators.
// Step-coefficient band operator b(M) Y_{-1} + c(M) with b = [j >= n0],
// c = 1 - b: kernel 0, cokernel 1, index -1 for every n0.
LatticeOperator step_shift_operator(long long n0);
// Z^2 multiplier (j - i k)(1 + j^2 + k^2)^{-1/2}: kernel and cokernel are
// one-dimensional (the point (0,0)), index 0.
LatticeOperator jk_multiplier_operator();
// Pure shift by s (unitary): index 0.
LatticeOperator shift_operator(long long s);

}  // namespace cil
