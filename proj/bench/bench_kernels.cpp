// Serial reference vs OpenMP kernels on LeNet-sized workloads.
//
//   bench_kernels --benchmark_filter=gemm

#include <benchmark/benchmark.h>

#include <vector>

#include "patchshuffle/kernels.hpp"
#include "patchshuffle/patch_shuffle.hpp"
#include "patchshuffle/rng.hpp"
#include "patchshuffle/tensor.hpp"

using namespace patchshuffle;
namespace ref = patchshuffle::kernels::reference;
namespace par = patchshuffle::kernels::parallel;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform01() - 0.5;
  return v;
}

// conv2 of LeNet on a batch of 64: 50 filters over 20x5x5 columns, 64*8*8 outputs.
constexpr std::size_t kM = 50, kK = 500, kN = 64 * 8 * 8;

template <bool Parallel>
void BM_gemm(benchmark::State& state) {
  const auto a = random_values(kM * kK, 1), b = random_values(kK * kN, 2);
  std::vector<double> c(kM * kN);
  for (auto _ : state) {
    if constexpr (Parallel)
      par::gemm(kM, kN, kK, a.data(), kK, b.data(), kN, c.data(), kN, false);
    else
      ref::gemm(kM, kN, kK, a.data(), kK, b.data(), kN, c.data(), kN, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["GFLOP/s"] =
      benchmark::Counter(2.0 * kM * kN * kK * state.iterations() * 1e-9, benchmark::Counter::kIsRate);
}

// conv1 of LeNet: batch 64, 1x28x28, 5x5 kernel.
const kernels::ConvGeometry kConv1{64, 1, 28, 28, 5, 5, 1, 0};

template <bool Parallel>
void BM_im2col(benchmark::State& state) {
  const auto& g = kConv1;
  const auto in = random_values(g.batch * g.channels * g.height * g.width, 3);
  std::vector<double> cols(g.col_rows() * g.col_cols());
  for (auto _ : state) {
    if constexpr (Parallel)
      par::im2col(g, in, cols);
    else
      ref::im2col(g, in, cols);
    benchmark::DoNotOptimize(cols.data());
  }
}

template <bool Parallel>
void BM_col2im(benchmark::State& state) {
  const auto& g = kConv1;
  const auto cols = random_values(g.col_rows() * g.col_cols(), 4);
  std::vector<double> out(g.batch * g.channels * g.height * g.width);
  for (auto _ : state) {
    if constexpr (Parallel)
      par::col2im(g, cols, out);
    else
      ref::col2im(g, cols, out);
    benchmark::DoNotOptimize(out.data());
  }
}

// Full conv1 forward through the gemm path: unfold, then weights x columns.
template <bool Parallel>
void BM_conv_forward(benchmark::State& state) {
  const auto& g = kConv1;
  const std::size_t filters = 20;
  const auto in = random_values(g.batch * g.channels * g.height * g.width, 5);
  const auto w = random_values(filters * g.col_rows(), 6);
  std::vector<double> cols(g.col_rows() * g.col_cols()), out(filters * g.col_cols());
  for (auto _ : state) {
    if constexpr (Parallel) {
      par::im2col(g, in, cols);
      par::gemm(filters, g.col_cols(), g.col_rows(), w.data(), g.col_rows(), cols.data(), g.col_cols(), out.data(),
                g.col_cols(), false);
    } else {
      ref::im2col(g, in, cols);
      ref::gemm(filters, g.col_cols(), g.col_rows(), w.data(), g.col_rows(), cols.data(), g.col_cols(), out.data(),
                g.col_cols(), false);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_maxpool(benchmark::State& state) {
  const kernels::PoolGeometry g{64 * 20, 24, 24, 2, 2};
  const auto in = random_values(g.planes * g.height * g.width, 7);
  std::vector<double> out(g.planes * g.out_h() * g.out_w());
  std::vector<std::uint32_t> argmax(out.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      par::maxpool_forward(g, in, out, argmax);
    else
      ref::maxpool_forward(g, in, out, argmax);
    benchmark::DoNotOptimize(out.data());
  }
}

// Replay of a fully switched record on the feature maps after conv1.
template <bool Parallel>
void BM_shuffle_apply(benchmark::State& state) {
  const Shape4 shape{64, 20, 24, 24};
  Tensor x(shape, random_values(shape.volume(), 8));
  ShuffleConfig config;
  config.epsilon = 1.0;
  config.patch_h = config.patch_w = 2;
  config.scope = ShuffleScope::PerChannelIndependent;
  Rng rng(9);
  const auto record = shuffle_forward(x, config, rng).record;
  for (auto _ : state) {
    Tensor y = Parallel ? shuffle_apply_recorded(x, record) : reference::shuffle_apply_recorded(x, record);
    benchmark::DoNotOptimize(y.raw());
  }
}

template <bool Parallel>
void BM_shuffle_backward(benchmark::State& state) {
  const Shape4 shape{64, 20, 24, 24};
  Tensor g(shape, random_values(shape.volume(), 10));
  ShuffleConfig config;
  config.epsilon = 1.0;
  config.patch_h = config.patch_w = 2;
  config.scope = ShuffleScope::PerChannelIndependent;
  Rng rng(11);
  const auto record = shuffle_forward(g, config, rng).record;
  for (auto _ : state) {
    Tensor y = Parallel ? shuffle_backward(g, record) : reference::shuffle_backward(g, record);
    benchmark::DoNotOptimize(y.raw());
  }
}

}  // namespace

BENCHMARK(BM_gemm<false>)->Name("gemm/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_gemm<true>)->Name("gemm/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_im2col<false>)->Name("im2col/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_im2col<true>)->Name("im2col/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_col2im<false>)->Name("col2im/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_col2im<true>)->Name("col2im/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_conv_forward<false>)->Name("conv_forward/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_conv_forward<true>)->Name("conv_forward/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_maxpool<false>)->Name("maxpool/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_maxpool<true>)->Name("maxpool/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_shuffle_apply<false>)->Name("shuffle_apply/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_shuffle_apply<true>)->Name("shuffle_apply/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_shuffle_backward<false>)->Name("shuffle_backward/reference")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_shuffle_backward<true>)->Name("shuffle_backward/parallel")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
