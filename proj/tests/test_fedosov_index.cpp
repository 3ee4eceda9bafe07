#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <cil/errors.hpp>
#include <cil/fedosov_index.hpp>
#include <cil/symbol_library.hpp>
#include <cil/torus_grid.hpp>

#include "test_util.hpp"

using namespace cil;
using test_util::arg_winding;
using test_util::kPi;

namespace {

MatrixSymbol monomial(const TorusGrid& g, double p) {
  return sample_scalar(g, [p](const std::vector<double>& a) {
    return std::exp(cplx(0.0, p * a[0]));
  });
}

}  // namespace

TEST_CASE("winding of monomial loops matches the exponent and the argument oracle") {
  TorusGrid g({64});
  for (long long p : {-5LL, -1LL, 0LL, 2LL, 7LL}) {
    MatrixSymbol f = monomial(g, static_cast<double>(p));
    IndexReport r = winding_number(f);
    CHECK(r.rounded == p);
    CHECK(arg_winding(f) == p);
    CHECK(r.residual < 1e-12);  // spectral derivative is exact here
    CHECK(std::abs(r.raw - cplx(static_cast<double>(p), 0.0)) < 1e-12);
    // the un-normalized integral is 2 pi i p
    CHECK(std::abs(r.integral - cplx(0.0, 2.0 * kPi * static_cast<double>(p))) < 1e-10);
  }
}

TEST_CASE("winding agrees with the argument oracle on seeded loops and is additive") {
  TorusGrid g({128});
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    int w = static_cast<int>((seed * 7) % 11) - 5;
    MatrixSymbol f = random_scalar_loop(g, w, seed);
    CHECK(winding_number(f).rounded == w);
    CHECK(arg_winding(f) == w);
  }
  MatrixSymbol f = random_scalar_loop(g, 3, 1);
  MatrixSymbol h = random_scalar_loop(g, -5, 2);
  CHECK(winding_number(pointwise_mul(f, h)).rounded == -2);
}

TEST_CASE("matrix winding is the winding of the determinant") {
  TorusGrid g({64});
  MatrixSymbol f = sample(g, 2, 2, [](const std::vector<double>& a) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = std::exp(cplx(0.0, 2.0 * a[0]));
    m(1, 1) = std::exp(cplx(0.0, -a[0]));
    return m;
  });
  CHECK(winding_number(f).rounded == 1);
  CHECK(arg_winding(f) == 1);

  // conjugating by a unitary loop leaves the determinant unchanged
  MatrixSymbol u = random_smooth_unitary(g, 2, 3, 17);
  MatrixSymbol conj = pointwise_mul(pointwise_mul(u, f), adjoint(u));
  CHECK(winding_number(conj).rounded == 1);
}

TEST_CASE("curvature integral reproduces the calibrated index and its cyclic split") {
  TorusGrid g({24, 24, 24});
  IndexOptions opts;
  opts.integrality_tol = 1e-3;  // coarse grid: quadrature residual is ~4e-6

  IndexReport r = fedosov_index(sigma_T(g, 1), opts);
  CHECK(r.rounded == 1);  // orientation calibration, frozen
  CHECK(std::abs(r.raw - cplx(1.0, 0.0)) < 1e-4);
  const double total = 24.0 * kPi * kPi;
  CHECK(std::abs(r.integral.real() - total) / total < 1e-4);
  REQUIRE(r.contributions.size() == 3);
  for (const cplx& c : r.contributions)
    CHECK(std::abs(c.real() - total / 3.0) / (total / 3.0) < 1e-3);
  CHECK(r.min_singular_value > 0.5);  // the family is uniformly elliptic

  // indices add over block-diagonal direct sums
  IndexReport r2 = fedosov_index(sigma_T(g, 2), opts);
  CHECK(r2.rounded == 2);
}

TEST_CASE("quadrature residual decays like the fourth power of the mesh") {
  IndexOptions opts;
  opts.integrality_tol = 1e-3;
  auto residual_at = [&](int n) {
    TorusGrid g({n, n, n});
    return fedosov_index(sigma_T(g, 1), opts).residual;
  };
  double r24 = residual_at(24), r32 = residual_at(32);
  CHECK(r24 > 1e-6);   // frozen band: ~3.7e-6
  CHECK(r24 < 1e-5);
  CHECK(r32 > 5e-7);   // frozen band: ~1.2e-6
  CHECK(r32 < 2e-6);
  double ratio = r24 / r32;  // (32/24)^4 is about 3.16
  CHECK(ratio > 2.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("derivative scheme option switches to finite differences") {
  TorusGrid g({64});
  MatrixSymbol f = monomial(g, 3.0);

  IndexOptions fd;
  fd.scheme = DerivScheme::central4;
  fd.integrality_tol = 1e-2;
  IndexReport r = winding_number(f, fd);
  CHECK(r.rounded == 3);
  CHECK(r.scheme == "central4");
  CHECK(r.residual > 1e-9);  // visibly a finite-difference evaluation
  CHECK(r.residual < 1e-3);

  IndexReport rs = winding_number(f);
  CHECK(rs.scheme == "spectral");
  CHECK(rs.residual < 1e-12);
}

TEST_CASE("ellipticity failures and non-integer values are refused") {
  TorusGrid g({64});
  MatrixSymbol vanishing = sample_scalar(g, [](const std::vector<double>& a) {
    return cplx(std::cos(a[0]), 0.0);
  });
  CHECK_THROWS_AS(winding_number(vanishing), NearSingular);

  // too coarse for the default integrality tolerance
  TorusGrid coarse({16, 16, 16});
  try {
    fedosov_index(sigma_T(coarse, 1));
    FAIL("expected IntegralityFailure");
  } catch (const IntegralityFailure& e) {
    CHECK(e.nearest == 1);
    CHECK(e.residual > 1e-6);
    CHECK(e.residual < 1e-4);  // frozen band: ~1.9e-5
    CHECK(e.kind() == ErrorKind::numerical);
  }
}

TEST_CASE("homotopy scan enforces a constant index along the family") {
  TorusGrid g({64});
  std::vector<MatrixSymbol> family;
  for (double t : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
    family.push_back(sample_scalar(g, [t](const std::vector<double>& a) {
      return std::exp(cplx(0.0, a[0])) * (1.0 + 0.4 * t * std::cos(a[0]));
    }));
  }
  std::vector<IndexReport> reports = homotopy_scan(family);
  REQUIRE(reports.size() == 4);
  for (const IndexReport& r : reports) CHECK(r.rounded == 1);

  std::vector<MatrixSymbol> broken;
  broken.push_back(monomial(g, 1.0));
  broken.push_back(monomial(g, 2.0));
  try {
    homotopy_scan(broken);
    FAIL("expected MethodDisagreement");
  } catch (const MethodDisagreement& e) {
    CHECK(e.value_a == 1);
    CHECK(e.value_b == 2);
  }
}

TEST_CASE("index report metadata is faithful") {
  TorusGrid g({32});
  IndexReport r = winding_number(monomial(g, 2.0));
  CHECK(!r.operation.empty());
  CHECK(r.grid_sizes == std::vector<int>{32});
  CHECK(r.scheme == "spectral");
  CHECK(r.min_singular_value == doctest::Approx(1.0));  // unimodular loop
  CHECK(r.elapsed_seconds >= 0.0);
  CHECK(r.integrality_tol == 1e-6);
  CHECK(r.singular_tol == 1e-10);
}
