// benchmarks/bench_main.cc

// Copyright 2026  The doalab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the hot kernels: STFT analysis, image-source RIR
// simulation, signal rendering, CNN forward passes and the SRP-PHAT scan.
// Inputs are seeded so successive runs time the same work.

#include <benchmark/benchmark.h>

#include <vector>

#include "doalab/acoustics.h"
#include "doalab/constants.h"
#include "doalab/datagen.h"
#include "doalab/nn.h"
#include "doalab/rng.h"
#include "doalab/srp_phat.h"
#include "doalab/stft.h"
#include "doalab/types.h"

namespace {

using namespace doalab;

ChannelData RandomChannels(int mics, int samples, uint64_t seed) {
  Rng rng(seed);
  ChannelData x(mics, std::vector<double>(samples));
  for (auto& ch : x)
    for (double& v : ch) v = rng.Gaussian();
  return x;
}

void BM_Stft(benchmark::State& state) {
  const int seconds = static_cast<int>(state.range(0));
  const ChannelData x = RandomChannels(kMicCount, seconds * kSampleRateHz, 11);
  for (auto _ : state) {
    StftFrameSet frames = Stft(x);
    benchmark::DoNotOptimize(frames.data.data());
  }
  state.SetItemsProcessed(state.iterations() * Stft(x).frames);
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SimulateRir(benchmark::State& state) {
  const double rt60 = static_cast<double>(state.range(0)) / 100.0;
  const Room room{"bench", {6.0, 6.0, 2.7}, rt60};
  const ArraySetup array = TestArray(room);
  for (auto _ : state) {
    std::vector<Rir> rirs = RirsFor(room, array, 60.0, 1.5, kSampleRateHz);
    benchmark::DoNotOptimize(rirs[0].taps.data());
  }
}
BENCHMARK(BM_SimulateRir)->Arg(30)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Render(benchmark::State& state) {
  const Room room{"bench", {6.0, 6.0, 2.7}, 0.5};
  const ArraySetup array = TestArray(room);
  const std::vector<Rir> rirs = RirsFor(room, array, 60.0, 1.5, kSampleRateHz);
  Rng rng(23);
  std::vector<double> src(2 * kSampleRateHz);
  for (double& v : src) v = rng.Gaussian();
  for (auto _ : state) {
    ChannelData out = RenderChannels(src, rirs);
    benchmark::DoNotOptimize(out[0].data());
  }
}
BENCHMARK(BM_Render)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  ModelSpec spec;  // production-size network
  Model<float> model(spec);
  model.InitHe(7);
  Rng rng(8);
  MatrixX<float> x(spec.feature_dim(), batch);
  for (int j = 0; j < x.cols(); ++j)
    for (int i = 0; i < x.rows(); ++i) x(i, j) = static_cast<float>(rng.Uniform(-3.14, 3.14));
  for (auto _ : state) {
    MatrixX<float> probs = model.Forward(x);
    benchmark::DoNotOptimize(probs.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SrpResponse(benchmark::State& state) {
  const SteeringTable table = BuildSteeringTable();
  const ChannelData x = RandomChannels(kMicCount, kSampleRateHz, 19);
  const StftFrameSet frames = Stft(x);
  int frame = 0;
  for (auto _ : state) {
    Eigen::VectorXd scores = SrpResponse(frames, frame, table);
    benchmark::DoNotOptimize(scores.data());
    frame = (frame + 1) % frames.frames;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SrpResponse)->Unit(benchmark::kMillisecond);

void BM_RandomizePair(benchmark::State& state) {
  const ChannelData a = RandomChannels(kMicCount, 2 * kSampleRateHz, 29);
  const ChannelData b = RandomChannels(kMicCount, 2 * kSampleRateHz, 31);
  const StftFrameSet fa = Stft(a);
  const StftFrameSet fb = Stft(b);
  uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    StftFrameSet mixed = RandomizePair(fa, fb, rng);
    benchmark::DoNotOptimize(mixed.data.data());
  }
}
BENCHMARK(BM_RandomizePair)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
