#include "cil/symbol_library.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace cil {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;

void require_scalar_on(const MatrixSymbol& s, const TorusGrid& g, const char* what) {
  if (s.rows() != 1 || s.cols() != 1)
    throw ShapeInconsistent(std::string(what) + " must be a 1x1 symbol");
  if (s.grid() != g) throw ShapeInconsistent(std::string(what) + " lives on a different grid");
}

// sqrt((1-b)/8) with the nonnegative real branch; clamps roundoff negatives.
double circle_sqrt(double b) {
  double v = (1.0 - b) / 8.0;
  if (v < 0.0) {
    if (v < -1e-14)
      throw NumericalError("circle pair component b exceeds 1: (1-b)/8 = " + std::to_string(v));
    v = 0.0;
  }
  return std::sqrt(v);
}
}  // namespace

CirclePair standard_circle_pair(const TorusGrid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) throw UsageError("circle pair axis out of range");
  CirclePair pair{MatrixSymbol(grid, 1, 1), MatrixSymbol(grid, 1, 1)};
  for (std::size_t p = 0; p < grid.npoints(); ++p) {
    double th = grid.angles(grid.unflat(p))[static_cast<std::size_t>(axis)];
    pair.b.raw()[p] = std::cos(th);
    pair.c.raw()[p] = std::sin(th);
  }
  return pair;
}

void validate_circle_pair(const CirclePair& pair, double tol) {
  require_scalar_on(pair.c, pair.b.grid(), "circle pair component");
  if (pair.b.rows() != 1 || pair.b.cols() != 1)
    throw ShapeInconsistent("circle pair component must be a 1x1 symbol");
  for (std::size_t p = 0; p < pair.b.grid().npoints(); ++p) {
    cplx b = pair.b.raw()[p], c = pair.c.raw()[p];
    if (std::abs(b.imag()) > tol || std::abs(c.imag()) > tol)
      throw NumericalError("circle pair must be real-valued");
    double r = b.real() * b.real() + c.real() * c.real();
    if (std::abs(r - 1.0) > tol)
      throw NumericalError("circle pair is off the unit circle: b^2+c^2 = " +
                           std::to_string(r));
  }
}

MatrixSymbol extend(const MatrixSymbol& s, const TorusGrid& big,
                    const std::vector<int>& axes) {
  const TorusGrid& g = s.grid();
  if (static_cast<int>(axes.size()) != g.dim())
    throw ShapeInconsistent("extend: need one target axis per source axis");
  std::vector<bool> used(static_cast<std::size_t>(big.dim()), false);
  for (int k = 0; k < g.dim(); ++k) {
    int a = axes[static_cast<std::size_t>(k)];
    if (a < 0 || a >= big.dim() || used[static_cast<std::size_t>(a)])
      throw UsageError("extend: target axes must be distinct and in range");
    used[static_cast<std::size_t>(a)] = true;
    if (big.size(a) != g.size(k))
      throw ShapeInconsistent("extend: axis sizes differ");
  }
  MatrixSymbol out(big, s.rows(), s.cols());
  std::vector<int> small_idx(static_cast<std::size_t>(g.dim()));
  for (std::size_t p = 0; p < big.npoints(); ++p) {
    std::vector<int> idx = big.unflat(p);
    for (int k = 0; k < g.dim(); ++k)
      small_idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(axes[static_cast<std::size_t>(k)])];
    out.at(p) = s.at(g.flat(small_idx));
  }
  return out;
}

MatrixSymbol bott_projection(const MatrixSymbol& u, const CirclePair& pair, double tol) {
  require_unitary(u, tol);
  validate_circle_pair(pair, tol);
  if (pair.b.grid() != u.grid())
    throw ShapeInconsistent("unitary and circle pair live on different grids");
  const int k = u.rows();
  MatrixSymbol out(u.grid(), 2 * k, 2 * k);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
  for (std::size_t p = 0; p < u.grid().npoints(); ++p) {
    Eigen::MatrixXcd U = u.at(p);
    double b = pair.b.raw()[p].real();
    double c = pair.c.raw()[p].real();
    double w = (1.0 - b) / 8.0;
    double s = circle_sqrt(b);
    Eigen::MatrixXcd M = 2.0 * id - U - U.adjoint();
    Eigen::MatrixXcd q12 =
        (U * U - id) * (0.5 * s) - (U - id) * (U - id) * (c / 8.0);
    MapMat o = out.at(p);
    o.topLeftCorner(k, k) = id - M * w;
    o.topRightCorner(k, k) = q12;
    o.bottomLeftCorner(k, k) = q12.adjoint();
    o.bottomRightCorner(k, k) = M * w;
  }
  return out;
}

MatrixSymbol theta_path(const MatrixSymbol& u, double t, double tol) {
  require_unitary(u, tol);
  const int k = u.rows();
  const double c = std::cos(kPi * t / 2.0), s = std::sin(kPi * t / 2.0);
  MatrixSymbol out(u.grid(), 2 * k, 2 * k);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
  for (std::size_t p = 0; p < u.grid().npoints(); ++p) {
    Eigen::MatrixXcd U = u.at(p);
    Eigen::MatrixXcd M = 2.0 * id - U - U.adjoint();
    Eigen::MatrixXcd q12 = (U - id) * (c * c * c * s) + U * (U - id) * (c * s * s * s);
    MapMat o = out.at(p);
    o.topLeftCorner(k, k) = id - M * (c * c * s * s);
    o.topRightCorner(k, k) = q12;
    o.bottomLeftCorner(k, k) = q12.adjoint();
    o.bottomRightCorner(k, k) = M * (c * c * s * s);
  }
  return out;
}

MatrixSymbol theta_circle_form(const MatrixSymbol& u_on_circle, int t_size, double tol) {
  if (u_on_circle.grid().dim() != 1)
    throw ShapeInconsistent("theta_circle_form expects a 1-axis unitary");
  TorusGrid big({u_on_circle.grid().size(0), t_size});
  MatrixSymbol lifted = extend(u_on_circle, big, {0});
  return bott_projection(lifted, standard_circle_pair(big, 1), tol);
}

MatrixSymbol bott_loop(const MatrixSymbol& p, const MatrixSymbol& z, double tol) {
  require_projection(p, tol);
  require_scalar_on(z, p.grid(), "loop parameter");
  for (const cplx& v : z.raw())
    if (std::abs(std::abs(v) - 1.0) > tol) throw NotUnitary(std::abs(std::abs(v) - 1.0));
  const int k = p.rows();
  MatrixSymbol out(p.grid(), k, k);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
  for (std::size_t q = 0; q < p.grid().npoints(); ++q) {
    Eigen::MatrixXcd P = p.at(q);
    out.at(q) = z.raw()[q] * P + (id - P);
  }
  return out;
}

MatrixSymbol index_projection(const MatrixSymbol& a, const MatrixSymbol& b) {
  if (a.grid() != b.grid()) throw ShapeInconsistent("symbols live on different grids");
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw ShapeInconsistent("index projection needs composable shapes a: kxm, b: mxk");
  const int k = a.rows(), m = a.cols();
  MatrixSymbol out(a.grid(), k + m, k + m);
  Eigen::MatrixXcd idk = Eigen::MatrixXcd::Identity(k, k);
  Eigen::MatrixXcd idm = Eigen::MatrixXcd::Identity(m, m);
  for (std::size_t p = 0; p < a.grid().npoints(); ++p) {
    Eigen::MatrixXcd A = a.at(p), B = b.at(p);
    Eigen::MatrixXcd ab = A * B, ba = B * A;
    MapMat o = out.at(p);
    o.topLeftCorner(k, k) = 2.0 * ab - ab * ab;
    o.topRightCorner(k, m) = A * (2.0 * idm - ba) * (idm - ba);
    o.bottomLeftCorner(m, k) = (idm - ba) * B;
    o.bottomRightCorner(m, m) = (idm - ba) * (idm - ba);
  }
  return out;
}

MatrixSymbol unitary_exponential(const MatrixSymbol& p) {
  if (p.rows() != p.cols())
    throw ShapeInconsistent("unitary exponential needs a square symbol");
  const int k = p.rows();
  double dev = 0.0;
  for (std::size_t q = 0; q < p.grid().npoints(); ++q) {
    const Eigen::MatrixXcd& M = p.at(q);
    dev = std::max(dev, (M - M.adjoint().eval()).cwiseAbs().maxCoeff());
  }
  if (dev > 1e-10) throw NotSelfAdjoint(dev);
  MatrixSymbol out(p.grid(), k, k);
  for (std::size_t q = 0; q < p.grid().npoints(); ++q) {
    Eigen::MatrixXcd M = p.at(q);
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
    Eigen::VectorXcd phases(k);
    for (int i = 0; i < k; ++i) {
      double lam = eig.eigenvalues()[i];
      phases[i] = std::exp(cplx(0.0, 2.0 * kPi * lam));
    }
    out.at(q) = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
  return out;
}

MatrixSymbol sigma_T(const TorusGrid& grid3, int blocks) {
  if (grid3.dim() != 3) throw ShapeInconsistent("sigma_T needs a 3-axis grid");
  if (blocks < 1) throw UsageError("sigma_T needs at least one block");
  const int n = 2 * blocks;
  MatrixSymbol out(grid3, n, n);
  for (std::size_t p = 0; p < grid3.npoints(); ++p) {
    std::vector<double> ang = grid3.angles(grid3.unflat(p));
    const double alpha = ang[0], beta = ang[1], lambda = ang[2];
    const cplx u = std::exp(cplx(0.0, alpha));
    const double b = std::cos(beta), c = std::sin(beta);
    const double s = circle_sqrt(b);
    const double w = (1.0 - b) / 8.0;
    const cplx m = 2.0 - u - std::conj(u);
    Eigen::Matrix2cd q;
    q(0, 0) = 1.0 - m * w;
    q(0, 1) = (u * u - 1.0) * (0.5 * s) - (u - 1.0) * (u - 1.0) * (c / 8.0);
    q(1, 0) = std::conj(q(0, 1));
    q(1, 1) = m * w;
    const cplx f = cplx(-std::cos(lambda) - 1.0, std::sin(lambda));
    Eigen::Matrix2cd block = Eigen::Matrix2cd::Identity() + f * q;
    MapMat o = out.at(p);
    o.setZero();
    for (int j = 0; j < blocks; ++j) o.block(2 * j, 2 * j, 2, 2) = block;
  }
  return out;
}

std::array<double, 3> b_prime_triple(double x, double y) {
  double b4 = 1.0 / std::sqrt(1.0 + x * x + y * y);
  return {b4, -x * b4, -y * b4};
}

namespace detail {

GaussianStream::GaussianStream(std::uint64_t seed) : state_(seed) {}

double GaussianStream::uniform() {
  // splitmix64: fully specified, no library distribution involved.
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  have_spare_ = true;
  spare_ = r * std::sin(2.0 * kPi * u2);
  return r * std::cos(2.0 * kPi * u2);
}

}  // namespace detail

MatrixSymbol random_smooth_unitary(const TorusGrid& grid1, int k, int bandwidth,
                                   std::uint64_t seed) {
  if (grid1.dim() != 1) throw ShapeInconsistent("random unitary needs a 1-axis grid");
  if (bandwidth < 0 || 2 * bandwidth >= grid1.size(0))
    throw UsageError("bandwidth must satisfy 2*bandwidth < grid size");
  detail::GaussianStream g(seed);
  auto random_matrix = [&](double scale) {
    Eigen::MatrixXcd m(k, k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) m(r, c) = scale * cplx(g.next(), g.next());
    return m;
  };
  Eigen::MatrixXcd a0 = random_matrix(0.5);
  Eigen::MatrixXcd h0 = 0.5 * (a0 + a0.adjoint());
  std::vector<Eigen::MatrixXcd> coef;
  for (int m = 1; m <= bandwidth; ++m)
    coef.push_back(random_matrix(0.5 / (1.0 + m * m)));

  const int N = grid1.size(0);
  MatrixSymbol out(grid1, k, k);
  for (int j = 0; j < N; ++j) {
    double th = grid1.angle(0, j);
    Eigen::MatrixXcd H = h0;
    for (int m = 1; m <= bandwidth; ++m) {
      cplx e = std::exp(cplx(0.0, m * th));
      H += e * coef[static_cast<std::size_t>(m - 1)] +
           std::conj(e) * coef[static_cast<std::size_t>(m - 1)].adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
    Eigen::VectorXcd phases(k);
    for (int i = 0; i < k; ++i)
      phases[i] = std::exp(cplx(0.0, eig.eigenvalues()[i]));
    out.at(static_cast<std::size_t>(j)) =
        eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
  return out;
}

MatrixSymbol random_scalar_loop(const TorusGrid& grid1, int winding, std::uint64_t seed) {
  if (grid1.dim() != 1) throw ShapeInconsistent("random loop needs a 1-axis grid");
  detail::GaussianStream g(seed);
  const int M = 5;
  std::vector<cplx> pos, neg;
  for (int m = 1; m <= M; ++m) {
    double scale = 0.35 / (1.0 + m * m);
    pos.push_back(scale * cplx(g.next(), g.next()));
    neg.push_back(scale * cplx(g.next(), g.next()));
  }
  cplx c0 = 0.25 * cplx(g.next(), g.next());
  const int N = grid1.size(0);
  MatrixSymbol out(grid1, 1, 1);
  for (int j = 0; j < N; ++j) {
    double th = grid1.angle(0, j);
    cplx gg = c0;
    for (int m = 1; m <= M; ++m) {
      gg += pos[static_cast<std::size_t>(m - 1)] * std::exp(cplx(0.0, m * th));
      gg += neg[static_cast<std::size_t>(m - 1)] * std::exp(cplx(0.0, -m * th));
    }
    out.raw()[static_cast<std::size_t>(j)] =
        std::exp(cplx(0.0, winding * th)) * std::exp(gg);
  }
  return out;
}

}  // namespace cil
