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

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "chromacycle/tensor.hpp"

// Minimal layer library with explicit backward passes. A forward pass records
// what its backward pass needs into a Trace owned by the caller, so one
// network can be run several times per step (as the cycle losses require)
// and each run differentiated independently.
namespace chromacycle::nn {

/// Named weight tensors of one network plus the fingerprint of the config
/// that produced them.
struct ParameterSet {
  std::map<std::string, Tensor> tensors;
  std::string fingerprint;

  const Tensor& at(const std::string& name) const;
  Tensor& at(const std::string& name);

  /// Same names, shapes and fingerprint, all values zero.
  ParameterSet zeros_like() const;
  std::size_t parameter_count() const;
  bool all_finite() const;
  float max_abs() const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

struct Trace {
  std::vector<Tensor> saved;
  std::vector<Trace> children;
};

enum class Init { normal_002, zeros };

struct ParamDecl {
  std::string name;
  Tensor::Shape shape;
  Init init;
};

class Layer {
 public:
  virtual ~Layer() = default;

  /// `trace` may be null for inference-only passes.
  virtual Tensor forward(const ParameterSet& params, const Tensor& x, Trace* trace) const = 0;

  /// Returns d(loss)/d(input) and adds parameter gradients into `grads`.
  virtual Tensor backward(const ParameterSet& params, const Trace& trace, const Tensor& grad_out,
                          ParameterSet& grads) const = 0;

  virtual void declare(std::vector<ParamDecl>& /*out*/) const {}
};

using LayerPtr = std::unique_ptr<Layer>;

/// Zero-padded cross-correlation. Weight [out, in, k, k], bias [1, out, 1, 1].
class Conv2d final : public Layer {
 public:
  Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad);
  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;
  void declare(std::vector<ParamDecl>& out) const override;

  std::string weight_name() const { return name_ + ".weight"; }
  std::string bias_name() const { return name_ + ".bias"; }

 private:
  std::string name_;
  int in_, out_, k_, stride_, pad_;
};

/// Transposed convolution (gradient of Conv2d w.r.t. its input).
/// Weight [in, out, k, k], bias [1, out, 1, 1]; output size (H-1)s - 2p + k.
class ConvTranspose2d final : public Layer {
 public:
  ConvTranspose2d(std::string name, int in_ch, int out_ch, int kernel, int stride, int pad);
  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;
  void declare(std::vector<ParamDecl>& out) const override;

 private:
  std::string name_;
  int in_, out_, k_, stride_, pad_;
};

/// Per-sample, per-channel normalization without affine parameters.
class InstanceNorm final : public Layer {
 public:
  explicit InstanceNorm(float eps = 1e-5f) : eps_(eps) {}
  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;

 private:
  float eps_;
};

class LeakyReLU final : public Layer {
 public:
  explicit LeakyReLU(float slope) : slope_(slope) {}
  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;

 private:
  float slope_;
};

/// y = scale * tanh(x) + shift.
class ScaledTanh final : public Layer {
 public:
  ScaledTanh(float scale, float shift) : scale_(scale), shift_(shift) {}
  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;

 private:
  float scale_, shift_;
};

class Sequential final : public Layer {
 public:
  Sequential() = default;
  Sequential& add(LayerPtr layer);
  template <typename L, typename... Args>
  Sequential& emplace(Args&&... args) {
    return add(std::make_unique<L>(std::forward<Args>(args)...));
  }

  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;
  void declare(std::vector<ParamDecl>& out) const override;

  std::size_t size() const noexcept { return layers_.size(); }

 private:
  std::vector<LayerPtr> layers_;
};

/// y = x + body(x).
class Residual final : public Layer {
 public:
  explicit Residual(std::unique_ptr<Sequential> body) : body_(std::move(body)) {}
  Tensor forward(const ParameterSet&, const Tensor&, Trace*) const override;
  Tensor backward(const ParameterSet&, const Trace&, const Tensor&, ParameterSet&) const override;
  void declare(std::vector<ParamDecl>& out) const override;

 private:
  std::unique_ptr<Sequential> body_;
};

/// Materializes the declared parameters: N(0, 0.02) weights, zero biases.
ParameterSet initialize(const std::vector<ParamDecl>& decls, std::uint64_t seed,
                        std::string fingerprint);

/// Checks `params` carries exactly the declared names and shapes.
void check_parameters(const std::vector<ParamDecl>& decls, const ParameterSet& params);

}  // namespace chromacycle::nn
