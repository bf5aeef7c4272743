#include <benchmark/benchmark.h>

#include <random>

#include "cascade/cascade.hpp"

using namespace cascade;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Matrix cross_holdings(std::mt19937_64& rng, std::size_t n) {
  Matrix c(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) sum += c(i, j) = uniform(rng, 0.0, 1.0);
    const double target = uniform(rng, 0.1, 0.9);
    for (std::size_t i = 0; i < n; ++i) c(i, j) *= target / sum;
  }
  return c;
}

FinancialNetwork network(std::size_t n, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  Matrix c = cross_holdings(rng, n);
  Matrix d(n, 1, 1.0);
  Vector beta(n), thr(n);
  for (std::size_t i = 0; i < n; ++i) {
    beta[i] = uniform(rng, 0.1, 0.7);
    thr[i] = uniform(rng, 0.5, 2.0);
  }
  return FinancialNetwork::validate({c, d, {1.0}, beta, thr});
}

void BM_InvertIMinusC(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const Matrix c = cross_holdings(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(numerics::invert_i_minus_c(c));
}
BENCHMARK(BM_InvertIMinusC)->RangeMultiplier(2)->Range(8, 256);

void BM_FrobeniusEigenvalue(benchmark::State& state) {
  std::mt19937_64 rng(8);
  const Matrix c = cross_holdings(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(numerics::frobenius_eigenvalue(c));
}
BENCHMARK(BM_FrobeniusEigenvalue)->RangeMultiplier(2)->Range(8, 256);

void BM_Simulate(benchmark::State& state) {
  const auto net = network(static_cast<std::size_t>(state.range(0)));
  const Vector v0(net.organizations(), 1.0);
  const PriceSignal prices(net.prices());
  for (auto _ : state) benchmark::DoNotOptimize(simulate(net, v0, prices, {.horizon = 200}));
}
BENCHMARK(BM_Simulate)->RangeMultiplier(2)->Range(8, 128);

void BM_EnumerateEquilibria(benchmark::State& state) {
  const auto net = network(static_cast<std::size_t>(state.range(0)));
  const auto ts = translate(net);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_equilibria(ts, net));
}
BENCHMARK(BM_EnumerateEquilibria)->DenseRange(4, 16, 4);

void BM_SignIteration(benchmark::State& state) {
  const auto net = network(static_cast<std::size_t>(state.range(0)));
  const auto ts = translate(net);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_worst(ts));
    benchmark::DoNotOptimize(iterate_best(ts));
  }
}
BENCHMARK(BM_SignIteration)->RangeMultiplier(2)->Range(8, 256);

void BM_Attractors(benchmark::State& state) {
  const auto net = network(static_cast<std::size_t>(state.range(0)));
  const auto ts = translate(net);
  for (auto _ : state) benchmark::DoNotOptimize(attractors(ts));
}
BENCHMARK(BM_Attractors)->RangeMultiplier(2)->Range(8, 128);

}  // namespace

BENCHMARK_MAIN();
