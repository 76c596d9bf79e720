#include "geomedian/bootstrap.hpp"
#include "geomedian/inference.hpp"
#include "geomedian/simdata.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace geomedian;

Sample gaussian_sample(Eigen::Index n, Eigen::Index p) {
  return draw(DistributionSpec::gaussian(Vector::Zero(p), ShapeMatrix::identity(p)), n, 11);
}

void BM_BootstrapMedian(benchmark::State& state) {
  const Sample sample = gaussian_sample(100, state.range(0));
  const auto fit = spatial_median(sample);
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_spatial_median(sample, fit, 200, 5, {}, workers).stats.data());
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BootstrapMedian)->Args({100, 1})->Args({1000, 1})->Args({1000, 4})->Unit(benchmark::kMillisecond);

void BM_BootstrapMean(benchmark::State& state) {
  const Sample sample = gaussian_sample(100, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_mean(sample, 200, 5).stats.data());
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BootstrapMean)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_WplTest(benchmark::State& state) {
  const Sample sample = gaussian_sample(100, state.range(0));
  const Vector zero = Vector::Zero(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(global_test_wpl(sample, zero, 0.05).statistic);
  }
}
BENCHMARK(BM_WplTest)->Arg(100)->Arg(1000);

void BM_FdrScreen(benchmark::State& state) {
  const Sample sample = gaussian_sample(50, 1000);
  const Vector zero = Vector::Zero(1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fdr_screen(sample, zero, 0.1).k_hat);
  }
}
BENCHMARK(BM_FdrScreen)->Unit(benchmark::kMillisecond);

}  // namespace
