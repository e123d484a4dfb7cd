// Copyright 2026 The optidct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. Arg 0 is the serial path, 1 the
// parallel one.

#include <random>

#include <benchmark/benchmark.h>

#include "optidct/codec.h"
#include "optidct/learner.h"
#include "optidct/metrics.h"
#include "test_util.h"

namespace optidct {
namespace {

Execution Exec(const benchmark::State& state) {
  return state.range(0) ? Execution::kParallel : Execution::kSerial;
}

BlockMatrix RandomBlocks(Eigen::Index n) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(-128, 127);
  BlockMatrix m(kBlockArea, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

void BM_ForwardDct(benchmark::State& state) {
  const BlockMatrix in = RandomBlocks(16384);
  BlockMatrix out;
  for (auto _ : state) {
    forward_dct_blocks(in, out, Exec(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * in.cols());
}
BENCHMARK(BM_ForwardDct)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Accumulate(benchmark::State& state) {
  const BlockMatrix p = RandomBlocks(16384);
  const BlockMatrix d = RandomBlocks(16384);
  for (auto _ : state) {
    TrainingAccumulator acc(50);
    acc.accumulate_blocks(p, d, Exec(state));
    benchmark::DoNotOptimize(acc.gram().data());
  }
  state.SetItemsProcessed(state.iterations() * p.cols());
}
BENCHMARK(BM_Accumulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  const ImagePlanes a = testing::SyntheticPhoto(512, 512, 1);
  const ImagePlanes b = decode(encode(a, 30), standard_inverse_kernel());
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b, Exec(state)));
}
BENCHMARK(BM_Ssim)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EncodeDecode(benchmark::State& state) {
  const ImagePlanes img = testing::SyntheticPhoto(512, 512, 2);
  for (auto _ : state) {
    const EncodedImage enc = encode(img, 75, Exec(state));
    benchmark::DoNotOptimize(decode(enc, standard_inverse_kernel(), Exec(state)));
  }
}
BENCHMARK(BM_EncodeDecode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace optidct

BENCHMARK_MAIN();
