#include "cil/torus_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace cil {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_same_grid(const MatrixSymbol& a, const MatrixSymbol& b) {
  if (a.grid() != b.grid())
    throw ShapeInconsistent("symbols live on different grids");
}

void require_same_shape(const MatrixSymbol& a, const MatrixSymbol& b) {
  require_same_grid(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeInconsistent("symbol shapes differ: " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                            "x" + std::to_string(b.cols()));
}

// Fixed-shape pairwise reduction; the split points depend only on n, so the
// result is independent of threading and evaluation order.
cplx pairwise_sum(const cplx* v, std::size_t n) {
  if (n <= 16) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}
}  // namespace

TorusGrid::TorusGrid(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw UsageError("grid needs at least one axis");
  for (int s : sizes_) {
    if (s < 8 || s % 2 != 0) throw OddSize(s);
  }
  strides_.assign(sizes_.size(), 1);
  for (int a = static_cast<int>(sizes_.size()) - 2; a >= 0; --a)
    strides_[a] = strides_[a + 1] * static_cast<std::size_t>(sizes_[a + 1]);
  npoints_ = strides_[0] * static_cast<std::size_t>(sizes_[0]);
}

double TorusGrid::angle(int axis, int i) const {
  return kTwoPi * static_cast<double>(i) / static_cast<double>(sizes_[axis]);
}

std::vector<double> TorusGrid::angles(const std::vector<int>& idx) const {
  std::vector<double> a(sizes_.size());
  for (std::size_t k = 0; k < sizes_.size(); ++k)
    a[k] = angle(static_cast<int>(k), idx[k]);
  return a;
}

std::size_t TorusGrid::flat(const std::vector<int>& idx) const {
  if (idx.size() != sizes_.size())
    throw ShapeInconsistent("multi-index has wrong dimension");
  std::size_t f = 0;
  for (std::size_t a = 0; a < sizes_.size(); ++a) {
    int i = idx[a];
    if (i < 0 || i >= sizes_[a]) throw UsageError("multi-index out of range");
    f += strides_[a] * static_cast<std::size_t>(i);
  }
  return f;
}

std::vector<int> TorusGrid::unflat(std::size_t f) const {
  std::vector<int> idx(sizes_.size());
  for (std::size_t a = 0; a < sizes_.size(); ++a) {
    idx[a] = static_cast<int>(f / strides_[a]);
    f %= strides_[a];
  }
  return idx;
}

MatrixSymbol::MatrixSymbol(TorusGrid grid, int rows, int cols)
    : grid_(std::move(grid)), rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) throw ShapeInconsistent("symbol shape must be positive");
  data_.assign(grid_.npoints() * block_size(), cplx(0.0, 0.0));
}

namespace detail {

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("CIL_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = std::min<long>(v, 256);
  }
  return std::max(1, n);
}

void for_range(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  int workers = worker_count();
  if (workers <= 1 || n < 1024) {
    fn(0, n);
    return;
  }
  std::size_t chunk = (n + workers - 1) / static_cast<std::size_t>(workers);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end]() {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

MatrixSymbol sample(const TorusGrid& grid, int rows, int cols,
                    const std::function<Eigen::MatrixXcd(const std::vector<double>&)>& f) {
  MatrixSymbol s(grid, rows, cols);
  std::size_t n = grid.npoints();
  for (std::size_t p = 0; p < n; ++p) {
    Eigen::MatrixXcd v = f(grid.angles(grid.unflat(p)));
    if (v.rows() != rows || v.cols() != cols)
      throw ShapeInconsistent("sampled matrix is " + std::to_string(v.rows()) + "x" +
                              std::to_string(v.cols()) + ", declared " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    s.at(p) = v;
  }
  return s;
}

MatrixSymbol sample_scalar(const TorusGrid& grid,
                           const std::function<cplx(const std::vector<double>&)>& f) {
  MatrixSymbol s(grid, 1, 1);
  std::size_t n = grid.npoints();
  for (std::size_t p = 0; p < n; ++p)
    s.raw()[p] = f(grid.angles(grid.unflat(p)));
  return s;
}

namespace {

// Apply a length-N periodic line transform to every grid line along `axis`,
// for every matrix entry. transform(in, out) maps one gathered line.
MatrixSymbol transform_lines(
    const MatrixSymbol& s, int axis,
    const std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>& transform) {
  const TorusGrid& g = s.grid();
  if (axis < 0 || axis >= g.dim()) throw UsageError("derivative axis out of range");
  const int N = g.size(axis);
  const std::size_t stride = g.stride(axis);
  const std::size_t bs = s.block_size();
  MatrixSymbol out(g, s.rows(), s.cols());

  // Enumerate line starts: all flat indices whose component along `axis` is 0.
  std::vector<std::size_t> starts;
  starts.reserve(g.npoints() / static_cast<std::size_t>(N));
  for (std::size_t p = 0; p < g.npoints(); ++p) {
    if ((p / stride) % static_cast<std::size_t>(N) == 0) starts.push_back(p);
  }

  detail::for_range(starts.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> in(static_cast<std::size_t>(N)), res(static_cast<std::size_t>(N));
    for (std::size_t li = lo; li < hi; ++li) {
      std::size_t base = starts[li] * bs;
      for (std::size_t e = 0; e < bs; ++e) {
        for (int j = 0; j < N; ++j)
          in[static_cast<std::size_t>(j)] =
              s.raw()[base + static_cast<std::size_t>(j) * stride * bs + e];
        transform(in, res);
        for (int j = 0; j < N; ++j)
          out.raw()[base + static_cast<std::size_t>(j) * stride * bs + e] =
              res[static_cast<std::size_t>(j)];
      }
    }
  });
  return out;
}

}  // namespace

MatrixSymbol derivative(const MatrixSymbol& s, int axis, DerivScheme scheme) {
  const int N = s.grid().size(axis);
  if (scheme == DerivScheme::spectral) {
    return transform_lines(s, axis, [N](const std::vector<cplx>& in, std::vector<cplx>& out) {
      thread_local Eigen::FFT<double> fft;
      std::vector<cplx> freq;
      fft.fwd(freq, const_cast<std::vector<cplx>&>(in));
      for (int k = 0; k < N; ++k) {
        int m;
        if (k < N / 2)
          m = k;
        else if (k == N / 2)
          m = 0;  // Nyquist mode of a derivative is ambiguous; zero it
        else
          m = k - N;
        freq[static_cast<std::size_t>(k)] *= cplx(0.0, static_cast<double>(m));
      }
      fft.inv(out, freq);
    });
  }
  const double h = kTwoPi / static_cast<double>(N);
  return transform_lines(s, axis, [N, h](const std::vector<cplx>& in, std::vector<cplx>& out) {
    for (int j = 0; j < N; ++j) {
      auto wrap = [N](int i) { return ((i % N) + N) % N; };
      out[static_cast<std::size_t>(j)] =
          (-in[static_cast<std::size_t>(wrap(j + 2))] +
           8.0 * in[static_cast<std::size_t>(wrap(j + 1))] -
           8.0 * in[static_cast<std::size_t>(wrap(j - 1))] +
           in[static_cast<std::size_t>(wrap(j - 2))]) /
          (12.0 * h);
    }
  });
}

cplx integrate(const MatrixSymbol& s) {
  if (s.rows() != 1 || s.cols() != 1)
    throw ShapeInconsistent("integrate expects a 1x1 symbol; take trace first");
  double weight = 1.0;
  for (int a = 0; a < s.grid().dim(); ++a)
    weight *= kTwoPi / static_cast<double>(s.grid().size(a));
  return weight * pairwise_sum(s.raw().data(), s.raw().size());
}

MatrixSymbol pointwise_mul(const MatrixSymbol& a, const MatrixSymbol& b) {
  require_same_grid(a, b);
  if (a.cols() != b.rows())
    throw ShapeInconsistent("inner dimensions differ: " + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()));
  MatrixSymbol out(a.grid(), a.rows(), b.cols());
  detail::for_range(a.grid().npoints(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) out.at(p) = a.at(p) * b.at(p);
  });
  return out;
}

MatrixSymbol pointwise_add(const MatrixSymbol& a, const MatrixSymbol& b) {
  require_same_shape(a, b);
  MatrixSymbol out(a.grid(), a.rows(), a.cols());
  for (std::size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = a.raw()[i] + b.raw()[i];
  return out;
}

MatrixSymbol pointwise_sub(const MatrixSymbol& a, const MatrixSymbol& b) {
  require_same_shape(a, b);
  MatrixSymbol out(a.grid(), a.rows(), a.cols());
  for (std::size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = a.raw()[i] - b.raw()[i];
  return out;
}

MatrixSymbol scalar_mul(cplx c, const MatrixSymbol& a) {
  MatrixSymbol out(a.grid(), a.rows(), a.cols());
  for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] = c * a.raw()[i];
  return out;
}

MatrixSymbol adjoint(const MatrixSymbol& a) {
  MatrixSymbol out(a.grid(), a.cols(), a.rows());
  detail::for_range(a.grid().npoints(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) out.at(p) = a.at(p).adjoint();
  });
  return out;
}

MatrixSymbol trace(const MatrixSymbol& a) {
  if (a.rows() != a.cols()) throw ShapeInconsistent("trace needs a square symbol");
  MatrixSymbol out(a.grid(), 1, 1);
  for (std::size_t p = 0; p < a.grid().npoints(); ++p) out.raw()[p] = a.at(p).trace();
  return out;
}

MatrixSymbol pointwise_inverse(const MatrixSymbol& a, double singular_tol) {
  if (a.rows() != a.cols()) throw ShapeInconsistent("inverse needs a square symbol");
  MatrixSymbol out(a.grid(), a.rows(), a.cols());
  std::size_t n = a.grid().npoints();
  // Find the worst-conditioned point first so the reported failure point is
  // deterministic, then invert via the SVD already computed.
  double worst = -1.0;
  std::size_t worst_p = 0;
  detail::for_range(n, [&](std::size_t lo, std::size_t hi) {
    double local_worst = -1.0;
    std::size_t local_p = 0;
    for (std::size_t p = lo; p < hi; ++p) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.at(p), Eigen::ComputeFullU | Eigen::ComputeFullV);
      double smin = svd.singularValues().minCoeff();
      if (local_worst < 0 || smin < local_worst) {
        local_worst = smin;
        local_p = p;
      }
      Eigen::VectorXd inv_s = svd.singularValues().cwiseInverse();
      out.at(p) = svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
    }
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (worst < 0 || local_worst < worst || (local_worst == worst && local_p < worst_p)) {
      worst = local_worst;
      worst_p = local_p;
    }
  });
  if (worst <= singular_tol) throw NearSingular(a.grid().unflat(worst_p), worst);
  return out;
}

double min_singular_value(const MatrixSymbol& a) {
  double best = -1.0;
  for (std::size_t p = 0; p < a.grid().npoints(); ++p) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.at(p));
    double smin = svd.singularValues().minCoeff();
    if (best < 0 || smin < best) best = smin;
  }
  return best;
}

double sup_abs(const MatrixSymbol& a) {
  double m = 0.0;
  for (const cplx& v : a.raw()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const MatrixSymbol& a, const MatrixSymbol& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i)
    m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
  return m;
}

MatrixSymbol identity_symbol(const TorusGrid& grid, int k) {
  MatrixSymbol s(grid, k, k);
  for (std::size_t p = 0; p < grid.npoints(); ++p)
    s.at(p) = Eigen::MatrixXcd::Identity(k, k);
  return s;
}

MatrixSymbol constant_symbol(const TorusGrid& grid, const Eigen::MatrixXcd& m) {
  MatrixSymbol s(grid, static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (std::size_t p = 0; p < grid.npoints(); ++p) s.at(p) = m;
  return s;
}

double unitary_deviation(const MatrixSymbol& a) {
  if (a.rows() != a.cols()) throw ShapeInconsistent("unitarity needs a square symbol");
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  double dev = 0.0;
  for (std::size_t p = 0; p < a.grid().npoints(); ++p) {
    CMapMat m = a.at(p);
    dev = std::max(dev, (m * m.adjoint() - id).cwiseAbs().maxCoeff());
    dev = std::max(dev, (m.adjoint() * m - id).cwiseAbs().maxCoeff());
  }
  return dev;
}

double projection_deviation(const MatrixSymbol& a) {
  if (a.rows() != a.cols()) throw ShapeInconsistent("projection needs a square symbol");
  double dev = 0.0;
  for (std::size_t p = 0; p < a.grid().npoints(); ++p) {
    CMapMat m = a.at(p);
    dev = std::max(dev, (m - m.adjoint()).cwiseAbs().maxCoeff());
    dev = std::max(dev, (Eigen::MatrixXcd(m * m) - m).cwiseAbs().maxCoeff());
  }
  return dev;
}

void require_unitary(const MatrixSymbol& a, double tol) {
  double dev = unitary_deviation(a);
  if (dev > tol) throw NotUnitary(dev);
}

void require_projection(const MatrixSymbol& a, double tol) {
  double dev = projection_deviation(a);
  if (dev > tol) throw NotProjection(dev);
}

}  // namespace cil
