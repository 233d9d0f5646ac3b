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

#include "chromacycle/optim.hpp"

#include <algorithm>
#include <cmath>

#include "chromacycle/error.hpp"

namespace chromacycle::nn {
namespace {

Tensor& state_for(std::map<std::string, Tensor>& state, const std::string& name,
                  const Tensor& like) {
  auto it = state.find(name);
  if (it == state.end()) it = state.emplace(name, Tensor(like.shape())).first;
  return it->second;
}

}  // namespace

void Adam::step(ParameterSet& params, const ParameterSet& grads) {
  ++t_;
  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  const double step = opts_.learning_rate / bc1;
  const double sqrt_bc2 = std::sqrt(bc2);
  for (auto& [name, w] : params.tensors) {
    const Tensor& g = grads.at(name);
    if (g.shape() != w.shape()) throw ShapeError("Adam: gradient shape mismatch for " + name);
    Tensor& m = state_for(m_, name, w);
    Tensor& v = state_for(v_, name, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.data()[i];
      const double mi = opts_.beta1 * m.data()[i] + (1.0 - opts_.beta1) * gi;
      const double vi = opts_.beta2 * v.data()[i] + (1.0 - opts_.beta2) * gi * gi;
      m.data()[i] = static_cast<float>(mi);
      v.data()[i] = static_cast<float>(vi);
      w.data()[i] -= static_cast<float>(step * mi / (std::sqrt(vi) / sqrt_bc2 + opts_.eps));
    }
  }
}

void Rmsprop::step(ParameterSet& params, const ParameterSet& grads) {
  for (auto& [name, w] : params.tensors) {
    const Tensor& g = grads.at(name);
    if (g.shape() != w.shape()) throw ShapeError("RMSprop: gradient shape mismatch for " + name);
    Tensor& s = state_for(sq_, name, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.data()[i];
      const double si = opts_.alpha * s.data()[i] + (1.0 - opts_.alpha) * gi * gi;
      s.data()[i] = static_cast<float>(si);
      w.data()[i] -= static_cast<float>(opts_.learning_rate * gi / (std::sqrt(si) + opts_.eps));
    }
  }
}

void clip_weights(ParameterSet& params, float limit) {
  if (!(limit > 0.0f)) throw InvalidArgument("clip limit must be positive");
  for (auto& [name, w] : params.tensors) {
    for (float& v : w.values()) v = std::clamp(v, -limit, limit);
  }
}

}  // namespace chromacycle::nn
