// Copyright 2026 The ChromaCycle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "chromacycle/colorspace.hpp"

namespace {

using namespace chromacycle;

RgbImage noise_image(int side) {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  RgbImage img(side, side);
  for (auto& v : img.data) v = u(rng);
  return img;
}

void BM_RgbToYuv(benchmark::State& state) {
  const RgbImage img = noise_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rgb_to_yuv(img));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(img.pixel_count()));
}
BENCHMARK(BM_RgbToYuv)->Arg(64)->Arg(256);

void BM_YuvToRgb(benchmark::State& state) {
  const YuvImage yuv = rgb_to_yuv(noise_image(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(yuv_to_rgb(yuv));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(yuv.pixel_count()));
}
BENCHMARK(BM_YuvToRgb)->Arg(64)->Arg(256);

void BM_YuvToRgbPreservingLuma(benchmark::State& state) {
  const YuvImage yuv = rgb_to_yuv(noise_image(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(yuv_to_rgb_preserving_luma(yuv));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(yuv.pixel_count()));
}
BENCHMARK(BM_YuvToRgbPreservingLuma)->Arg(64)->Arg(256);

}  // namespace
