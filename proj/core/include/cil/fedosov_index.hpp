#pragma once

#include <string>
#include <vector>

#include "cil/torus_grid.hpp"

namespace cil {

struct IndexOptions {
  DerivScheme scheme = DerivScheme::spectral;
  double singular_tol = 1e-10;    // ellipticity margin below which we refuse
  double integrality_tol = 1e-6;  // max |raw - nearest integer|
};

// Result of a topological index evaluation. `raw` is the normalized value
// that must round to the integer index; `integral` is the un-normalized
// curvature integral; for the 3-axis formula `contributions` holds the three
// cyclic groupings of the integrand whose sum is `integral`.
struct IndexReport {
  std::string operation;
  std::vector<int> grid_sizes;
  std::string scheme;
  cplx raw = 0.0;
  long long rounded = 0;
  double residual = 0.0;
  cplx integral = 0.0;
  std::vector<cplx> contributions;
  double min_singular_value = 0.0;
  double elapsed_seconds = 0.0;
  double integrality_tol = 0.0;
  double singular_tol = 0.0;
};

// Winding number of an invertible loop: (1/2 pi i) Integral of tr(f^-1 f')
// over the circle. For matrix loops this is the winding of det f. Raises
// NearSingular if the loop is not invertible within tolerance and
// IntegralityFailure if the normalized value is not close to an integer.
IndexReport winding_number(const MatrixSymbol& f, const IndexOptions& opts = {});

// Index of an elliptic symbol via the odd curvature integral:
//   1-axis grid:  (1/2 pi i) Integral tr(s^-1 ds)
//   3-axis grid:  (1/24 pi^2) Integral tr((s^-1 ds)^3)
// The 3-form integrand is reported in three groupings, one per cyclic choice
// of leading axis; analytically each is a third of the total for the
// built-in operator family. Orientation is fixed so that the distinguished
// 2x2 operator symbol on the 3-torus has index +1.
IndexReport fedosov_index(const MatrixSymbol& sigma, const IndexOptions& opts = {});

// Indices of a family that should be an elliptic homotopy; raises
// MethodDisagreement naming the offending parameter slots if the index is
// not constant along the family.
std::vector<IndexReport> homotopy_scan(const std::vector<MatrixSymbol>& family,
                                       const IndexOptions& opts = {});

}  // namespace cil
