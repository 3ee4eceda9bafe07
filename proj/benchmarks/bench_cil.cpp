// Microbenchmarks for the hot paths: symbol assembly, curvature-integral
// index evaluation, integer Smith reduction, and the lattice kernel
// certificates. Run with --benchmark_filter=<regex> to narrow.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "cil/abelian_group.hpp"
#include "cil/fedosov_index.hpp"
#include "cil/lattice_fredholm.hpp"
#include "cil/symbol_library.hpp"
#include "cil/torus_grid.hpp"

namespace {

using cil::DerivScheme;
using cil::IndexOptions;
using cil::IntMatrix;
using cil::LatticeOptions;
using cil::MatrixSymbol;
using cil::TorusGrid;

// Coarse grids carry an O(n^-4) quadrature residual well above the default
// integrality tolerance, so the benchmark loosens it; throughput is the
// same either way.
IndexOptions coarse_options(DerivScheme scheme = DerivScheme::spectral) {
  IndexOptions opts;
  opts.scheme = scheme;
  opts.integrality_tol = 1e-2;
  return opts;
}

MatrixSymbol unit_loop(const TorusGrid& grid, double power) {
  return cil::sample_scalar(grid, [power](const std::vector<double>& a) {
    return std::exp(std::complex<double>(0.0, power * a[0]));
  });
}

IntMatrix random_int_matrix(long long n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(-9, 9);
  IntMatrix m(n, n);
  for (long long r = 0; r < n; ++r)
    for (long long c = 0; c < n; ++c) m.at(r, c) = entry(rng);
  return m;
}

void BM_sigma_T_assembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TorusGrid grid({n, n, n});
  for (auto _ : state) {
    MatrixSymbol s = cil::sigma_T(grid, 1);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_sigma_T_assembly)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_fedosov_index_3axis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TorusGrid grid({n, n, n});
  const MatrixSymbol sym = cil::sigma_T(grid, 1);
  const IndexOptions opts = coarse_options();
  for (auto _ : state) {
    auto report = cil::fedosov_index(sym, opts);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_fedosov_index_3axis)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_winding_spectral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TorusGrid grid({n});
  const MatrixSymbol loop = unit_loop(grid, 3.0);
  const IndexOptions opts = coarse_options(DerivScheme::spectral);
  for (auto _ : state) {
    auto report = cil::winding_number(loop, opts);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_winding_spectral)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_winding_central4(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TorusGrid grid({n});
  const MatrixSymbol loop = unit_loop(grid, 3.0);
  const IndexOptions opts = coarse_options(DerivScheme::central4);
  for (auto _ : state) {
    auto report = cil::winding_number(loop, opts);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_winding_central4)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_smith_normal_form(benchmark::State& state) {
  const long long n = state.range(0);
  const IntMatrix m = random_int_matrix(n, 99u + static_cast<unsigned>(n));
  for (auto _ : state) {
    auto snf = cil::smith_normal_form(m);
    benchmark::DoNotOptimize(snf);
  }
}
BENCHMARK(BM_smith_normal_form)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_lattice_exact_band(benchmark::State& state) {
  const auto op = cil::step_shift_operator(0);
  LatticeOptions opts;
  opts.window = state.range(0);
  for (auto _ : state) {
    auto count = cil::exact_kernel_band(op, opts);
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_lattice_exact_band)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_lattice_exact_scan(benchmark::State& state) {
  const auto op = cil::jk_multiplier_operator();
  LatticeOptions opts;
  opts.window = state.range(0);
  for (auto _ : state) {
    auto count = cil::multiplier_kernel_dims(op, opts);
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_lattice_exact_scan)->Arg(25)->Arg(50)->Arg(75)->Unit(benchmark::kMillisecond);

void BM_lattice_band_winding(benchmark::State& state) {
  const auto op = cil::step_shift_operator(0);
  const LatticeOptions opts;
  for (auto _ : state) {
    auto count = cil::band_symbol_index(op, opts);
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_lattice_band_winding)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
