/* Copyright 2026 The DLA Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Serial reference vs OpenMP kernels on query-sized workloads. The attack
// loop is sequential by nature (each query depends on the last accept), so
// per-query kernel latency is what bounds end-to-end throughput.

#include <benchmark/benchmark.h>

#include "dla/fixtures.hpp"
#include "dla/metrics.hpp"
#include "dla/perturb.hpp"
#include "dla/rng.hpp"
#include "dla/segmenters.hpp"

namespace {

dla::Image BenchImage(int size) { return dla::MakeFixtureImage(1, size); }

dla::DensePerturbation BenchPerturbation(const dla::Image& image) {
  dla::Rng rng(7);
  dla::LinearNoise noise;
  noise.direction = dla::NoiseDirection::kHorizontal;
  noise.epsilon = 8.0 / 255.0;
  noise.signs.resize(image.height());
  for (auto& sign : noise.signs) sign = rng.Sign();
  return dla::ExpandLinearNoise(noise, image.channels(), image.height(),
                                image.width());
}

void ThresholdSerial(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::serial::ThresholdSegment(image, 19));
  }
}

void ThresholdParallel(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::ThresholdSegment(image, 19));
  }
}

void PaletteSerial(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dla::serial::PaletteSegment(image, dla::DefaultClassPalette()));
  }
}

void PaletteParallel(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dla::PaletteSegment(image, dla::DefaultClassPalette()));
  }
}

void ContextSerial(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::serial::ContextSegment(image, 19, 2));
  }
}

void ContextParallel(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::ContextSegment(image, 19, 2));
  }
}

void ConfusionSerial(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  const dla::LabelMap pred = dla::serial::ThresholdSegment(image, 19);
  const dla::LabelMap ref = dla::serial::ContextSegment(image, 19, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::serial::BuildConfusionMatrix(pred, ref, 19));
  }
}

void ConfusionParallel(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  const dla::LabelMap pred = dla::ThresholdSegment(image, 19);
  const dla::LabelMap ref = dla::ContextSegment(image, 19, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::BuildConfusionMatrix(pred, ref, 19));
  }
}

void ApplySerial(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  const dla::DensePerturbation pert = BenchPerturbation(image);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::serial::ApplyPerturbation(image, pert));
  }
}

void ApplyParallel(benchmark::State& state) {
  const dla::Image image = BenchImage(static_cast<int>(state.range(0)));
  const dla::DensePerturbation pert = BenchPerturbation(image);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dla::ApplyPerturbation(image, pert));
  }
}

}  // namespace

BENCHMARK(ThresholdSerial)->Arg(256)->Arg(1024);
BENCHMARK(ThresholdParallel)->Arg(256)->Arg(1024);
BENCHMARK(PaletteSerial)->Arg(256)->Arg(1024);
BENCHMARK(PaletteParallel)->Arg(256)->Arg(1024);
BENCHMARK(ContextSerial)->Arg(256)->Arg(1024);
BENCHMARK(ContextParallel)->Arg(256)->Arg(1024);
BENCHMARK(ConfusionSerial)->Arg(256)->Arg(1024);
BENCHMARK(ConfusionParallel)->Arg(256)->Arg(1024);
BENCHMARK(ApplySerial)->Arg(256)->Arg(1024);
BENCHMARK(ApplyParallel)->Arg(256)->Arg(1024);
