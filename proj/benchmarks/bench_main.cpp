#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "hypwave/fuchsian.hpp"
#include "hypwave/hyperbolic.hpp"
#include "hypwave/kernel.hpp"
#include "hypwave/prng.hpp"
#include "hypwave/specfun.hpp"
#include "hypwave/spectra.hpp"

namespace {

void BM_Laguerre(benchmark::State& state) {
  const hypwave::PolyParams p{static_cast<int>(state.range(0)), 2.3};
  double t = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::laguerre(p, t));
    t += 1e-9;
  }
}
BENCHMARK(BM_Laguerre)->Arg(2)->Arg(6)->Arg(12);

void BM_GaussLaguerreBuild(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::gauss_laguerre(order, 1.5));
  }
}
BENCHMARK(BM_GaussLaguerreBuild)->Arg(40)->Arg(80)->Arg(160);

void BM_KernelEval(benchmark::State& state) {
  const hypwave::WaveletParams p{static_cast<int>(state.range(0)), 2.3};
  const hypwave::HPoint z{0.3, 1.1};
  hypwave::HPoint w{-0.7, 0.6};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::kernel_eval(p, z, w));
    w.x += 1e-9;
  }
}
BENCHMARK(BM_KernelEval)->Arg(0)->Arg(3)->Arg(6);

void BM_EnumerateBall(benchmark::State& state) {
  const auto group = hypwave::GroupPresentation::psl2z();
  const hypwave::HPoint z{0.0, 2.0};
  const double r = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::enumerate_ball(group, z, r));
  }
}
BENCHMARK(BM_EnumerateBall)->Arg(3)->Arg(4)->Arg(5);

void BM_GramAssembleOrbit(benchmark::State& state) {
  const auto group = hypwave::GroupPresentation::psl2z();
  const auto orbit = hypwave::enumerate_ball(
      group, {0.0, 2.0}, static_cast<double>(state.range(0)));
  const hypwave::WaveletParams p{0, 4.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::gram_assemble(p, orbit));
  }
  state.counters["points"] = static_cast<double>(orbit.elements.size());
}
BENCHMARK(BM_GramAssembleOrbit)->Arg(3)->Arg(4);

void BM_NystromAssemble(benchmark::State& state) {
  const hypwave::WaveletParams p{0, 2.0};
  const auto dom = hypwave::DomainSpec::rectangle(0.0, 1.0, 1.0, 2.0);
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::nystrom_assemble(p, dom, res));
  }
}
BENCHMARK(BM_NystromAssemble)->Arg(8)->Arg(16)->Arg(32);

void BM_HermitianEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  // Seeded random Hermitian matrix so every repetition diagonalizes the
  // same input.
  hypwave::Prng rng(42);
  hypwave::HermitianMatrix M(n);
  for (std::size_t i = 0; i < n; ++i) {
    M.at(i, i) = rng.uniform(-1.0, 1.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::complex<double> v{rng.uniform(-1.0, 1.0),
                                   rng.uniform(-1.0, 1.0)};
      M.at(i, j) = v;
      M.at(j, i) = std::conj(v);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hypwave::hermitian_eig(M));
  }
}
BENCHMARK(BM_HermitianEig)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
