#include "geomedian/estimator.hpp"
#include "geomedian/simdata.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace geomedian;

Sample gaussian_sample(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  return draw(DistributionSpec::gaussian(Vector::Zero(p), ShapeMatrix::identity(p)), n, seed);
}

void BM_SpatialMedian(benchmark::State& state) {
  const Sample sample = gaussian_sample(state.range(0), state.range(1), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spatial_median(sample).theta_hat.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_SpatialMedian)->Args({100, 10})->Args({100, 100})->Args({100, 1000})->Args({1000, 100});

void BM_CoordinatewiseMedian(benchmark::State& state) {
  const Sample sample = gaussian_sample(state.range(0), state.range(1), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coordinatewise_median(sample.values()).data());
  }
}
BENCHMARK(BM_CoordinatewiseMedian)->Args({100, 1000});

void BM_Gmom(benchmark::State& state) {
  const Sample sample = gaussian_sample(1000, 50, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmom(sample, state.range(0), {}, 4).data());
  }
}
BENCHMARK(BM_Gmom)->Arg(10)->Arg(100);

void BM_DrawAr1(benchmark::State& state) {
  const Sampler sampler(DistributionSpec::gaussian(Vector::Zero(state.range(0)), ar1_shape(state.range(0), 0.8)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.draw(100, ++seed).values().data());
  }
}
BENCHMARK(BM_DrawAr1)->Arg(100)->Arg(1000);

}  // namespace
