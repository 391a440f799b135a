// Serial vs OpenMP-parallel versions of the two heavy kernels: sampling a
// feature basis and mapping a dataset through it.  Both pairs are
// bit-identical by construction; these benchmarks measure what the
// parallel path buys on the build machine.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "qrf/ansatz.hpp"
#include "qrf/featmap.hpp"
#include "qrf/matrix.hpp"

namespace {

qrf::AnsatzParams params_for(int basis_size) {
  qrf::AnsatzParams p;
  p.basis_size = basis_size;
  p.seed = 5;
  return p;
}

qrf::Matrix random_points(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  qrf::Matrix m(dim, count);
  for (double& v : m.data) v = dist(eng);
  return m;
}

void bm_sample_basis(benchmark::State& state, bool parallel) {
  const qrf::AnsatzParams p = params_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    qrf::FeatureBasis basis = parallel ? qrf::sample_basis(p) : qrf::sample_basis_serial(p);
    benchmark::DoNotOptimize(basis.vectors.data.data());
  }
}

void bm_map_dataset(benchmark::State& state, bool parallel) {
  const qrf::FeatureBasis basis = qrf::sample_basis(params_for(static_cast<int>(state.range(0))));
  const qrf::Matrix points = random_points(basis.dim, 512, 11);
  for (auto _ : state) {
    qrf::MappedFeatures mapped = parallel ? qrf::map_dataset(basis.vectors, points)
                                          : qrf::map_dataset_serial(basis.vectors, points);
    benchmark::DoNotOptimize(mapped.features.data.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_sample_basis, serial, false)
    ->Arg(256)
    ->Arg(1024)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_sample_basis, parallel, true)
    ->Arg(256)
    ->Arg(1024)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_map_dataset, serial, false)
    ->Arg(1024)
    ->Arg(4096)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_map_dataset, parallel, true)
    ->Arg(1024)
    ->Arg(4096)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
