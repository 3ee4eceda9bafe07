#pragma once

// Shared test helpers: independent oracles (argument-tracking winding,
// cofactor determinants) and small builders for lattice operators and groups.
// The oracles deliberately use different algorithms than the library so the
// two implementations check each other.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <cil/abelian_group.hpp>
#include <cil/lattice_fredholm.hpp>
#include <cil/torus_grid.hpp>

namespace test_util {

inline const double kPi = std::acos(-1.0);

// Winding number of an invertible matrix loop by tracking the argument of
// det f around the circle: sums the wrapped argument increments between
// neighbouring grid points, no derivatives involved.
inline long long arg_winding(const cil::MatrixSymbol& f) {
  const cil::TorusGrid& g = f.grid();
  const int n = g.size(0);
  auto det_at = [&](int i) {
    Eigen::MatrixXcd m = f.at(static_cast<std::size_t>(i % n));
    return m.determinant();
  };
  double total = 0.0;
  double prev = std::arg(det_at(0));
  for (int i = 1; i <= n; ++i) {
    double cur = std::arg(det_at(i));
    double d = cur - prev;
    while (d > kPi) d -= 2.0 * kPi;
    while (d < -kPi) d += 2.0 * kPi;
    total += d;
    prev = cur;
  }
  return std::llround(total / (2.0 * kPi));
}

// Exact determinant by cofactor expansion along the first row. Exponential
// cost, fine for the tiny matrices the tests use.
inline cil::bigint cofactor_det(const cil::IntMatrix& m) {
  if (m.rows == 0) return 1;
  if (m.rows == 1) return m.at(0, 0);
  cil::bigint acc = 0;
  for (long long j = 0; j < m.cols; ++j) {
    if (m.at(0, j) == 0) continue;
    cil::IntMatrix minor(m.rows - 1, m.cols - 1);
    for (long long r = 1; r < m.rows; ++r) {
      long long cc = 0;
      for (long long c = 0; c < m.cols; ++c) {
        if (c == j) continue;
        minor.at(r - 1, cc++) = m.at(r, c);
      }
    }
    cil::bigint term = m.at(0, j) * cofactor_det(minor);
    if (j % 2 == 0)
      acc += term;
    else
      acc -= term;
  }
  return acc;
}

// Scalar multiplier on Z that is the same constant everywhere.
inline cil::Multiplier const_scalar(std::complex<double> v) {
  cil::Multiplier m;
  m.dim = 1;
  m.eval = [v](const cil::LatticePoint&) {
    Eigen::MatrixXcd r(1, 1);
    r(0, 0) = v;
    return r;
  };
  m.has_limits = true;
  m.limit_neg = m.eval({0});
  m.limit_pos = m.eval({0});
  m.variation_window = 0;
  return m;
}

// Band operator on Z with constant scalar coefficients: one (shift, value)
// term per entry.
inline cil::LatticeOperator scalar_band(
    const std::vector<std::pair<long long, std::complex<double>>>& terms) {
  cil::LatticeOperator a;
  a.dim = 1;
  for (const auto& [s, v] : terms) a.terms.push_back({{s}, const_scalar(v)});
  return a;
}

// One-point lattice vector.
inline cil::LatticeVector delta(long long p, std::complex<double> v = 1.0) {
  Eigen::VectorXcd e(1);
  e(0) = v;
  cil::LatticeVector u;
  u[{p}] = e;
  return u;
}

inline cil::FgAbelianGroup Zf(long long rank) { return cil::free_group(rank); }
inline cil::FgAbelianGroup Zc(long long order) { return cil::cyclic_group(order); }

}  // namespace test_util
