#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "cil/errors.hpp"

namespace cil {

using cplx = std::complex<double>;

// Matrix block stored row-major so it maps onto contiguous symbol storage.
using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;

// Uniform periodic grid on the d-torus: axis a has sizes[a] points at angles
// 2*pi*i/sizes[a]. Sizes must be even and >= 8 so that spectral derivatives
// have a well-defined (zeroed) Nyquist mode and quadrature is accurate.
class TorusGrid {
public:
  explicit TorusGrid(std::vector<int> sizes);

  int dim() const { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& sizes() const { return sizes_; }
  int size(int axis) const { return sizes_[axis]; }
  std::size_t npoints() const { return npoints_; }

  double angle(int axis, int i) const;
  std::vector<double> angles(const std::vector<int>& idx) const;

  // Flattening is row-major over axes in declaration order: axis 0 slowest.
  std::size_t flat(const std::vector<int>& idx) const;
  std::vector<int> unflat(std::size_t f) const;
  // Distance in flat index between neighbours along an axis.
  std::size_t stride(int axis) const { return strides_[axis]; }

  bool operator==(const TorusGrid& o) const { return sizes_ == o.sizes_; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

private:
  std::vector<int> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t npoints_ = 1;
};

// A k x m matrix-valued function sampled on a torus grid. Storage is one
// contiguous row-major rows x cols block per grid point, blocks ordered by
// flattened point index.
class MatrixSymbol {
public:
  MatrixSymbol(TorusGrid grid, int rows, int cols);

  const TorusGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t block_size() const { return static_cast<std::size_t>(rows_) * cols_; }

  MapMat at(std::size_t p) {
    return MapMat(data_.data() + p * block_size(), rows_, cols_);
  }
  CMapMat at(std::size_t p) const {
    return CMapMat(data_.data() + p * block_size(), rows_, cols_);
  }
  MapMat at(const std::vector<int>& idx) { return at(grid_.flat(idx)); }
  CMapMat at(const std::vector<int>& idx) const { return at(grid_.flat(idx)); }

  std::vector<cplx>& raw() { return data_; }
  const std::vector<cplx>& raw() const { return data_; }

private:
  TorusGrid grid_;
  int rows_;
  int cols_;
  std::vector<cplx> data_;
};

// Evaluate f at every grid point. f receives the angle tuple and must return
// a rows x cols matrix; a wrong shape raises ShapeInconsistent.
MatrixSymbol sample(const TorusGrid& grid, int rows, int cols,
                    const std::function<Eigen::MatrixXcd(const std::vector<double>&)>& f);
MatrixSymbol sample_scalar(const TorusGrid& grid,
                           const std::function<cplx(const std::vector<double>&)>& f);

enum class DerivScheme {
  spectral,  // exact for trigonometric polynomials below the Nyquist mode
  central4,  // 4th-order centred periodic finite difference
};

// Entrywise partial derivative along one axis.
MatrixSymbol derivative(const MatrixSymbol& s, int axis,
                        DerivScheme scheme = DerivScheme::spectral);

// Riemann-sum quadrature of a 1x1 symbol over the whole torus, weight
// prod_a (2*pi/sizes[a]). Summation is a fixed pairwise reduction so the
// result is bit-identical regardless of thread count.
cplx integrate(const MatrixSymbol& s);

MatrixSymbol pointwise_mul(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol pointwise_add(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol pointwise_sub(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol scalar_mul(cplx c, const MatrixSymbol& a);
MatrixSymbol adjoint(const MatrixSymbol& a);
MatrixSymbol trace(const MatrixSymbol& a);  // 1x1 result

// Pointwise inverse of a square symbol. Raises NearSingular at the first grid
// point whose smallest singular value is <= singular_tol.
MatrixSymbol pointwise_inverse(const MatrixSymbol& a, double singular_tol = 1e-10);

// Smallest singular value over all grid points (ellipticity margin).
double min_singular_value(const MatrixSymbol& a);

// Largest entry magnitude over all grid points.
double sup_abs(const MatrixSymbol& a);

// Largest entrywise deviation between two symbols of equal shape.
double max_abs_diff(const MatrixSymbol& a, const MatrixSymbol& b);

MatrixSymbol identity_symbol(const TorusGrid& grid, int k);
MatrixSymbol constant_symbol(const TorusGrid& grid, const Eigen::MatrixXcd& m);

// Max over points of ||a a* - I|| and ||a - a*||, ||a^2 - a|| respectively.
double unitary_deviation(const MatrixSymbol& a);
double projection_deviation(const MatrixSymbol& a);
// Checked asserts: raise NotUnitary / NotProjection above tol.
void require_unitary(const MatrixSymbol& a, double tol = 1e-10);
void require_projection(const MatrixSymbol& a, double tol = 1e-10);

namespace detail {
// Run fn(begin, end) over [0, n) in parallel. Worker count is
// min(CIL_THREADS if set, hardware concurrency); <= 1 runs inline.
void for_range(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);
int worker_count();
}  // namespace detail

}  // namespace cil
