// Serial reference vs OpenMP for the dense loops.

#include "gpcert/parallel.hpp"
#include "gpcert/sampling.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace gpcert;

namespace {

RowMatrix points(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RowMatrix x(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) x(i, j) = u(rng);
  return x;
}

KernelSpec relu(Index m) { return KernelSpec::relu_deep(2, 3.19, 0.0, m); }

TrainedGP example_gp(Index n) {
  const RowMatrix x = points(n, 2, 1);
  Dataset d{x, Matrix(n, 1)};
  for (Index i = 0; i < n; ++i) d.targets(i, 0) = x(i, 0) * x(i, 1);
  return TrainedGP::fit(KernelSpec::squared_exponential(0.1, Vector::Constant(2, 0.5)), d, 1e-4);
}

template <class F>
void gram_bench(benchmark::State& state, F f) {
  const RowMatrix x = points(state.range(0), 784, 2);
  const KernelSpec k = relu(784);
  for (auto _ : state) benchmark::DoNotOptimize(f(k, x));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) + 1) / 2);
}

void BM_GramSerial(benchmark::State& s) { gram_bench(s, [](auto& k, auto& x) { return serial::gram(k, x); }); }
void BM_GramOmp(benchmark::State& s) { gram_bench(s, [](auto& k, auto& x) { return omp::gram(k, x); }); }

template <class F>
void cross_bench(benchmark::State& state, F f) {
  const RowMatrix a = points(state.range(0), 784, 3);
  const RowMatrix b = points(100, 784, 4);
  const KernelSpec k = relu(784);
  for (auto _ : state) benchmark::DoNotOptimize(f(k, a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

void BM_CrossSerial(benchmark::State& s) {
  cross_bench(s, [](auto& k, auto& a, auto& b) { return serial::kernel_matrix(k, a, b); });
}
void BM_CrossOmp(benchmark::State& s) {
  cross_bench(s, [](auto& k, auto& a, auto& b) { return omp::kernel_matrix(k, a, b); });
}

template <class F>
void grid_bench(benchmark::State& state, F f) {
  const TrainedGP gp = example_gp(128);
  const RowMatrix g = grid_points(Box::around(Vector::Constant(2, 0.5), 0.1), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(f(gp, g));
  state.SetItemsProcessed(state.iterations() * g.rows());
}

void BM_MeanGridSerial(benchmark::State& s) {
  grid_bench(s, [](auto& gp, auto& g) { return serial::posterior_mean_grid(gp, g); });
}
void BM_MeanGridOmp(benchmark::State& s) {
  grid_bench(s, [](auto& gp, auto& g) { return omp::posterior_mean_grid(gp, g); });
}
void BM_VarGridSerial(benchmark::State& s) {
  grid_bench(s, [](auto& gp, auto& g) { return serial::posterior_var_grid(gp, g); });
}
void BM_VarGridOmp(benchmark::State& s) {
  grid_bench(s, [](auto& gp, auto& g) { return omp::posterior_var_grid(gp, g); });
}

template <class F>
void sampling_bench(benchmark::State& state, F f) {
  const TrainedGP gp = example_gp(128);
  const Vector x = Vector::Constant(2, 0.5);
  const RowMatrix g = grid_points(Box::around(x, 0.1), 45);
  SamplingOptions opts;
  opts.n_samples = static_cast<int>(state.range(0));
  opts.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(f(gp, x, g, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SamplingSerial(benchmark::State& s) {
  sampling_bench(s, [](auto&... a) { return serial::sample_sup_statistics(a...); });
}
void BM_SamplingOmp(benchmark::State& s) {
  sampling_bench(s, [](auto&... a) { return omp::sample_sup_statistics(a...); });
}

}  // namespace

BENCHMARK(BM_GramSerial)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramOmp)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CrossSerial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossOmp)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MeanGridSerial)->Arg(45)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MeanGridOmp)->Arg(45)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VarGridSerial)->Arg(45)->Arg(201)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VarGridOmp)->Arg(45)->Arg(201)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SamplingSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SamplingOmp)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
