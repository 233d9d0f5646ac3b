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

#include "chromacycle/models.hpp"
#include "chromacycle/nn.hpp"

namespace {

using namespace chromacycle;

Tensor input(int n, int c, int side) {
  Tensor t(n, c, side, side);
  for (auto& v : t.values()) v = 0.5f;
  return t;
}

void BM_GeneratorForward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Generator gen(GeneratorConfig{});
  const ParameterSet params = gen.init_params(0);
  const Tensor x = input(1, 1, side);
  for (auto _ : state) benchmark::DoNotOptimize(gen.forward(params, x, nullptr));
}
BENCHMARK(BM_GeneratorForward)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_GeneratorForwardBackward(benchmark::State& state) {
  const Generator gen(GeneratorConfig{});
  const ParameterSet params = gen.init_params(0);
  const Tensor x = input(1, 1, 64);
  for (auto _ : state) {
    nn::Trace trace;
    const Tensor y = gen.forward(params, x, &trace);
    ParameterSet grads = params.zeros_like();
    benchmark::DoNotOptimize(gen.backward(params, trace, y, grads));
  }
}
BENCHMARK(BM_GeneratorForwardBackward)->Unit(benchmark::kMillisecond);

void BM_DiscriminatorForward(benchmark::State& state) {
  const Discriminator dis(DiscriminatorConfig{});
  const ParameterSet params = dis.init_params(0);
  const Tensor x = input(static_cast<int>(state.range(0)), 3, 64);
  for (auto _ : state) benchmark::DoNotOptimize(dis.forward(params, x, nullptr));
}
BENCHMARK(BM_DiscriminatorForward)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
