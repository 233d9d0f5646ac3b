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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "chromacycle/colorspace.hpp"
#include "chromacycle/nn.hpp"
#include "chromacycle/tensor.hpp"

namespace chromacycle {

using nn::ParameterSet;

/// I.i.d. standard normal vector fed to the baseline generator.
struct NoiseVector {
  std::vector<float> values;

  int dim() const noexcept { return static_cast<int>(values.size()); }
  static NoiseVector sample(int dim, std::mt19937_64& rng);
  static NoiseVector sample(int dim, std::uint64_t seed);
};

struct GeneratorConfig {
  int in_channels = 1;
  int out_channels = 2;
  int base_width = 16;
  int n_down = 2;
  int n_res = 2;
  bool use_noise = false;
  int noise_dim = 0;

  void validate() const;
  std::string fingerprint() const;
  /// Spatial sizes must be multiples of this.
  int size_multiple() const noexcept { return 1 << n_down; }
  int network_input_channels() const noexcept {
    return in_channels + (use_noise ? noise_dim : 0);
  }

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

enum class DiscriminatorHead { wasserstein_scalar, sigmoid_probability };

struct DiscriminatorConfig {
  int in_channels = 3;
  int base_width = 16;
  int n_layers = 3;
  DiscriminatorHead head = DiscriminatorHead::sigmoid_probability;

  void validate() const;
  std::string fingerprint() const;
  int size_multiple() const noexcept { return 1 << n_layers; }

  friend bool operator==(const DiscriminatorConfig&, const DiscriminatorConfig&) = default;
};

/// Encoder (stride-2 convs) -> residual blocks -> decoder (stride-2
/// transposed convs), instance norm throughout, tanh-bounded output: chroma
/// outputs land in [-0.5, 0.5], luma and RGB outputs in [0, 1]. When noise
/// is enabled the vector is broadcast into constant planes appended to the
/// input, i.e. it enters at the first layer only.
class Generator {
 public:
  explicit Generator(GeneratorConfig config);

  const GeneratorConfig& config() const noexcept { return config_; }
  const std::vector<nn::ParamDecl>& declarations() const noexcept { return decls_; }
  std::string fingerprint() const { return config_.fingerprint(); }

  ParameterSet init_params(std::uint64_t seed) const;
  /// Throws ConfigError when `params` was not made for this configuration.
  void check(const ParameterSet& params) const;

  /// `x` must carry network_input_channels() channels (noise planes included).
  Tensor forward(const ParameterSet& params, const Tensor& x, nn::Trace* trace) const;
  Tensor backward(const ParameterSet& params, const nn::Trace& trace, const Tensor& grad_out,
                  ParameterSet& grads) const;

 private:
  GeneratorConfig config_;
  nn::Sequential net_;
  std::vector<nn::ParamDecl> decls_;
};

struct DiscriminatorTrace {
  nn::Trace net;
  Tensor::Shape map_shape{};
  std::vector<double> scores;
};

/// Stacked stride-2 convolutions ending in a one-channel logit map whose
/// spatial mean is the per-sample score (passed through a sigmoid for the
/// probability head).
class Discriminator {
 public:
  explicit Discriminator(DiscriminatorConfig config);

  const DiscriminatorConfig& config() const noexcept { return config_; }
  const std::vector<nn::ParamDecl>& declarations() const noexcept { return decls_; }
  std::string fingerprint() const { return config_.fingerprint(); }

  ParameterSet init_params(std::uint64_t seed) const;
  void check(const ParameterSet& params) const;

  std::vector<double> forward(const ParameterSet& params, const Tensor& x,
                              DiscriminatorTrace* trace) const;
  /// `grad_scores[i]` is d(loss)/d(score of sample i).
  Tensor backward(const ParameterSet& params, const DiscriminatorTrace& trace,
                  std::span<const double> grad_scores, ParameterSet& grads) const;

 private:
  DiscriminatorConfig config_;
  nn::Sequential net_;
  std::vector<nn::ParamDecl> decls_;
};

ParameterSet init_params(const GeneratorConfig& config, std::uint64_t seed);
ParameterSet init_params(const DiscriminatorConfig& config, std::uint64_t seed);

// Image <-> tensor packing. Batches must share one spatial size.
Tensor to_tensor(std::span<const GrayImage> images);
Tensor to_tensor(std::span<const ChromaImage> images);
Tensor to_tensor(std::span<const YuvImage> images);
Tensor to_tensor(std::span<const RgbImage> images);
/// Gray images replicated into three identical channels.
Tensor to_tensor_replicated(std::span<const GrayImage> images);
/// Noise vectors broadcast to constant h×w planes.
Tensor noise_planes(std::span<const NoiseVector> noise, int h, int w);

// Unpacking clamps to each type's range so outputs always satisfy invariants.
GrayImage gray_from_tensor(const Tensor& t, int n, int channel = 0);
ChromaImage chroma_from_tensor(const Tensor& t, int n, int first_channel = 0);
RgbImage rgb_from_tensor(const Tensor& t, int n);

ChromaImage baseline_generator_forward(const Generator& gen, const ParameterSet& params,
                                       const GrayImage& g, const NoiseVector& z);
ChromaImage gen_g2c_forward(const Generator& gen, const ParameterSet& params, const GrayImage& g);
GrayImage gen_c2g_forward(const Generator& gen, const ParameterSet& params, const ChromaImage& c);
double discriminator_forward(const Discriminator& dis, const ParameterSet& params,
                             const YuvImage& img);

}  // namespace chromacycle
