#include <cmath>
#include <cstddef>
#include <vector>

#include <benchmark/benchmark.h>

#include "epilab/dist.hpp"
#include "epilab/entropy.hpp"
#include "epilab/kernels.hpp"
#include "epilab/transport.hpp"

// Serial reference vs OpenMP kernels, and the two convolution routes. The
// parallel kernels promise bit-identical results for any thread count, so
// the only question these answer is speed.

namespace {

using epilab::kernels::block_sum;
using epilab::kernels::block_sum_serial;
using epilab::kernels::block_sum_transform;
using epilab::kernels::block_sum_transform_serial;

std::vector<double> make_data(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.001 * static_cast<double>(i));
  return v;
}

void bm_block_sum_serial(benchmark::State& state) {
  const auto v = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(block_sum_serial(v.data(), v.size()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_block_sum_serial)->Arg(1 << 16)->Arg(1 << 20);

void bm_block_sum_parallel(benchmark::State& state) {
  const auto v = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(block_sum(v.data(), v.size()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_block_sum_parallel)->Arg(1 << 16)->Arg(1 << 20);

double probe(std::size_t i) {
  const double x = 1e-5 * static_cast<double>(i) - 5.0;
  return x * std::exp(-0.5 * x * x);
}

void bm_sum_transform_serial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(block_sum_transform_serial(n, probe));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_sum_transform_serial)->Arg(1 << 16)->Arg(1 << 20);

void bm_sum_transform_parallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(block_sum_transform(n, probe));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_sum_transform_parallel)->Arg(1 << 16)->Arg(1 << 20);

void bm_convolve_direct(benchmark::State& state) {
  const auto a = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(epilab::kernels::convolve_direct(a, a));
}
BENCHMARK(bm_convolve_direct)->Arg(1 << 10)->Arg(1 << 12);

void bm_convolve_fft(benchmark::State& state) {
  const auto a = make_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(epilab::kernels::convolve_fft(a, a));
}
BENCHMARK(bm_convolve_fft)->Arg(1 << 10)->Arg(1 << 12)->Arg(1 << 16);

void bm_combo_entropy(benchmark::State& state) {
  const auto x = epilab::dist::Distribution1D::laplace(1.0);
  const auto y = epilab::dist::Distribution1D::logistic(1.0);
  const double c = std::sqrt(0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(epilab::entropy::entropy_of_combo({c, c}, {x, y}).nats);
}
BENCHMARK(bm_combo_entropy);

void bm_jensen_tensor(benchmark::State& state) {
  const auto g1 = epilab::dist::Distribution1D::gaussian(1.0);
  const auto l1 = epilab::dist::Distribution1D::laplace(1.0);
  const auto tx = epilab::transport::build_transport(g1, l1);
  const auto ty = epilab::transport::build_transport(g1, l1);
  for (auto _ : state)
    benchmark::DoNotOptimize(epilab::transport::jensen_expectation(tx, ty, 0.5).e_mix);
}
BENCHMARK(bm_jensen_tensor);

}  // namespace

BENCHMARK_MAIN();
