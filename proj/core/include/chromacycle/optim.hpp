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

#pragma once

#include <map>
#include <string>

#include "chromacycle/nn.hpp"

namespace chromacycle::nn {

struct AdamOptions {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct RmspropOptions {
  double learning_rate = 5e-5;
  double alpha = 0.9;
  double eps = 1e-8;
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  /// Applies one update to `params` using gradients with identical layout.
  virtual void step(ParameterSet& params, const ParameterSet& grads) = 0;
};

class Adam final : public Optimizer {
 public:
  explicit Adam(AdamOptions opts) : opts_(opts) {}
  void step(ParameterSet& params, const ParameterSet& grads) override;

 private:
  AdamOptions opts_;
  long long t_ = 0;
  std::map<std::string, Tensor> m_;
  std::map<std::string, Tensor> v_;
};

class Rmsprop final : public Optimizer {
 public:
  explicit Rmsprop(RmspropOptions opts) : opts_(opts) {}
  void step(ParameterSet& params, const ParameterSet& grads) override;

 private:
  RmspropOptions opts_;
  std::map<std::string, Tensor> sq_;
};

/// Clamps every weight and bias into [-limit, limit].
void clip_weights(ParameterSet& params, float limit);

}  // namespace chromacycle::nn
