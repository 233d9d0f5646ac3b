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

#include "chromacycle/models.hpp"

#include <algorithm>
#include <cmath>

#include "chromacycle/error.hpp"

namespace chromacycle {
namespace {

using nn::Conv2d;
using nn::ConvTranspose2d;
using nn::InstanceNorm;
using nn::LeakyReLU;
using nn::ScaledTanh;
using nn::Sequential;

bool valid_channels(int c) { return c >= 1 && c <= 3; }

void check_spatial(int h, int w, int multiple, const char* who) {
  if (h < multiple || w < multiple || h % multiple != 0 || w % multiple != 0) {
    throw ShapeError(std::string(who) + ": spatial size " + std::to_string(h) + "x" +
                     std::to_string(w) + " must be a positive multiple of " +
                     std::to_string(multiple));
  }
}

template <typename Image>
void check_batch(std::span<const Image> images) {
  if (images.empty()) throw InvalidArgument("empty image batch");
  for (const auto& img : images) {
    if (img.height != images[0].height || img.width != images[0].width) {
      throw ShapeError("images in a batch must share one size");
    }
  }
}

void copy_plane(const std::vector<float>& src, float* dst) {
  std::copy(src.begin(), src.end(), dst);
}

std::vector<float> read_plane(const Tensor& t, int n, int c, float lo, float hi) {
  const float* p = t.plane(n, c);
  std::vector<float> out(p, p + t.plane_size());
  for (float& v : out) v = std::clamp(v, lo, hi);
  return out;
}

}  // namespace

NoiseVector NoiseVector::sample(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw InvalidArgument("noise dimension must be >= 1");
  std::normal_distribution<float> normal(0.0f, 1.0f);
  NoiseVector z;
  z.values.resize(static_cast<std::size_t>(dim));
  for (float& v : z.values) v = normal(rng);
  return z;
}

NoiseVector NoiseVector::sample(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample(dim, rng);
}

void GeneratorConfig::validate() const {
  if (!valid_channels(in_channels) || !valid_channels(out_channels)) {
    throw InvalidArgument("generator channels must be in {1, 2, 3}");
  }
  if (base_width < 4) throw InvalidArgument("generator base_width must be >= 4");
  if (n_down < 0 || n_res < 0) throw InvalidArgument("generator depth must be >= 0");
  if (use_noise && noise_dim < 1) throw InvalidArgument("noise_dim must be >= 1 with noise");
  if (!use_noise && noise_dim != 0) throw InvalidArgument("noise_dim set without noise");
}

std::string GeneratorConfig::fingerprint() const {
  return "generator/v1 in=" + std::to_string(in_channels) + " out=" +
         std::to_string(out_channels) + " width=" + std::to_string(base_width) +
         " down=" + std::to_string(n_down) + " res=" + std::to_string(n_res) +
         " noise=" + std::to_string(use_noise ? noise_dim : 0);
}

void DiscriminatorConfig::validate() const {
  if (!valid_channels(in_channels)) {
    throw InvalidArgument("discriminator channels must be in {1, 2, 3}");
  }
  if (base_width < 1) throw InvalidArgument("discriminator base_width must be >= 1");
  if (n_layers < 1) throw InvalidArgument("discriminator n_layers must be >= 1");
}

std::string DiscriminatorConfig::fingerprint() const {
  return "discriminator/v1 in=" + std::to_string(in_channels) + " width=" +
         std::to_string(base_width) + " layers=" + std::to_string(n_layers) + " head=" +
         (head == DiscriminatorHead::wasserstein_scalar ? "wasserstein" : "sigmoid");
}

// ---------------------------------------------------------------------------

Generator::Generator(GeneratorConfig config) : config_(config) {
  config_.validate();
  int ch = config_.base_width;
  net_.emplace<Conv2d>("stem", config_.network_input_channels(), ch, 7, 1, 3)
      .emplace<InstanceNorm>()
      .emplace<LeakyReLU>(0.0f);
  for (int i = 0; i < config_.n_down; ++i) {
    net_.emplace<Conv2d>("down" + std::to_string(i), ch, ch * 2, 3, 2, 1)
        .emplace<InstanceNorm>()
        .emplace<LeakyReLU>(0.0f);
    ch *= 2;
  }
  for (int r = 0; r < config_.n_res; ++r) {
    const std::string p = "res" + std::to_string(r);
    auto body = std::make_unique<Sequential>();
    body->emplace<Conv2d>(p + ".conv0", ch, ch, 3, 1, 1)
        .emplace<InstanceNorm>()
        .emplace<LeakyReLU>(0.0f)
        .emplace<Conv2d>(p + ".conv1", ch, ch, 3, 1, 1)
        .emplace<InstanceNorm>();
    net_.emplace<nn::Residual>(std::move(body));
  }
  for (int i = 0; i < config_.n_down; ++i) {
    net_.emplace<ConvTranspose2d>("up" + std::to_string(i), ch, ch / 2, 4, 2, 1)
        .emplace<InstanceNorm>()
        .emplace<LeakyReLU>(0.0f);
    ch /= 2;
  }
  net_.emplace<Conv2d>("head", ch, config_.out_channels, 7, 1, 3);
  if (config_.out_channels == 2) {
    net_.emplace<ScaledTanh>(0.5f, 0.0f);
  } else {
    net_.emplace<ScaledTanh>(0.5f, 0.5f);
  }
  net_.declare(decls_);
}

ParameterSet Generator::init_params(std::uint64_t seed) const {
  return nn::initialize(decls_, seed, fingerprint());
}

void Generator::check(const ParameterSet& params) const {
  if (params.fingerprint != fingerprint()) {
    throw ConfigError("parameters '" + params.fingerprint + "' do not match generator '" +
                      fingerprint() + "'");
  }
  nn::check_parameters(decls_, params);
}

Tensor Generator::forward(const ParameterSet& params, const Tensor& x, nn::Trace* trace) const {
  check(params);
  if (x.c() != config_.network_input_channels()) {
    throw ShapeError("generator expects " + std::to_string(config_.network_input_channels()) +
                     " input channels, got " + std::to_string(x.c()));
  }
  check_spatial(x.h(), x.w(), config_.size_multiple(), "generator");
  return net_.forward(params, x, trace);
}

Tensor Generator::backward(const ParameterSet& params, const nn::Trace& trace,
                           const Tensor& grad_out, ParameterSet& grads) const {
  return net_.backward(params, trace, grad_out, grads);
}

// ---------------------------------------------------------------------------

Discriminator::Discriminator(DiscriminatorConfig config) : config_(config) {
  config_.validate();
  int ch = config_.base_width;
  net_.emplace<Conv2d>("layer0", config_.in_channels, ch, 4, 2, 1).emplace<LeakyReLU>(0.2f);
  for (int i = 1; i < config_.n_layers; ++i) {
    const int next = std::min(ch * 2, config_.base_width * 8);
    net_.emplace<Conv2d>("layer" + std::to_string(i), ch, next, 4, 2, 1)
        .emplace<InstanceNorm>()
        .emplace<LeakyReLU>(0.2f);
    ch = next;
  }
  net_.emplace<Conv2d>("logit", ch, 1, 3, 1, 1);
  net_.declare(decls_);
}

ParameterSet Discriminator::init_params(std::uint64_t seed) const {
  return nn::initialize(decls_, seed, fingerprint());
}

void Discriminator::check(const ParameterSet& params) const {
  if (params.fingerprint != fingerprint()) {
    throw ConfigError("parameters '" + params.fingerprint + "' do not match discriminator '" +
                      fingerprint() + "'");
  }
  nn::check_parameters(decls_, params);
}

std::vector<double> Discriminator::forward(const ParameterSet& params, const Tensor& x,
                                           DiscriminatorTrace* trace) const {
  check(params);
  if (x.c() != config_.in_channels) {
    throw ShapeError("discriminator expects " + std::to_string(config_.in_channels) +
                     " channels, got " + std::to_string(x.c()));
  }
  check_spatial(x.h(), x.w(), config_.size_multiple(), "discriminator");
  const Tensor map = net_.forward(params, x, trace ? &trace->net : nullptr);
  std::vector<double> scores(static_cast<std::size_t>(map.n()));
  for (int n = 0; n < map.n(); ++n) {
    const float* p = map.plane(n, 0);
    double sum = 0.0;
    for (std::size_t i = 0; i < map.plane_size(); ++i) sum += p[i];
    const double logit = sum / static_cast<double>(map.plane_size());
    scores[static_cast<std::size_t>(n)] =
        config_.head == DiscriminatorHead::sigmoid_probability ? 1.0 / (1.0 + std::exp(-logit))
                                                               : logit;
  }
  if (trace) {
    trace->map_shape = map.shape();
    trace->scores = scores;
  }
  return scores;
}

Tensor Discriminator::backward(const ParameterSet& params, const DiscriminatorTrace& trace,
                               std::span<const double> grad_scores, ParameterSet& grads) const {
  if (grad_scores.size() != trace.scores.size()) {
    throw ShapeError("discriminator backward: one gradient per score required");
  }
  Tensor grad_map(trace.map_shape);
  const double inv_area = 1.0 / static_cast<double>(grad_map.plane_size());
  for (int n = 0; n < grad_map.n(); ++n) {
    const auto i = static_cast<std::size_t>(n);
    double g = grad_scores[i];
    if (config_.head == DiscriminatorHead::sigmoid_probability) {
      const double p = trace.scores[i];
      g *= p * (1.0 - p);
    }
    float* dst = grad_map.plane(n, 0);
    std::fill(dst, dst + grad_map.plane_size(), static_cast<float>(g * inv_area));
  }
  return net_.backward(params, trace.net, grad_map, grads);
}

ParameterSet init_params(const GeneratorConfig& config, std::uint64_t seed) {
  return Generator(config).init_params(seed);
}

ParameterSet init_params(const DiscriminatorConfig& config, std::uint64_t seed) {
  return Discriminator(config).init_params(seed);
}

// ---------------------------------------------------------------------------

Tensor to_tensor(std::span<const GrayImage> images) {
  check_batch(images);
  Tensor t(static_cast<int>(images.size()), 1, images[0].height, images[0].width);
  for (std::size_t n = 0; n < images.size(); ++n) {
    copy_plane(images[n].y, t.plane(static_cast<int>(n), 0));
  }
  return t;
}

Tensor to_tensor(std::span<const ChromaImage> images) {
  check_batch(images);
  Tensor t(static_cast<int>(images.size()), 2, images[0].height, images[0].width);
  for (std::size_t n = 0; n < images.size(); ++n) {
    copy_plane(images[n].u, t.plane(static_cast<int>(n), 0));
    copy_plane(images[n].v, t.plane(static_cast<int>(n), 1));
  }
  return t;
}

Tensor to_tensor(std::span<const YuvImage> images) {
  check_batch(images);
  Tensor t(static_cast<int>(images.size()), 3, images[0].height, images[0].width);
  for (std::size_t n = 0; n < images.size(); ++n) {
    copy_plane(images[n].y, t.plane(static_cast<int>(n), 0));
    copy_plane(images[n].u, t.plane(static_cast<int>(n), 1));
    copy_plane(images[n].v, t.plane(static_cast<int>(n), 2));
  }
  return t;
}

Tensor to_tensor(std::span<const RgbImage> images) {
  check_batch(images);
  Tensor t(static_cast<int>(images.size()), 3, images[0].height, images[0].width);
  for (std::size_t n = 0; n < images.size(); ++n) {
    const RgbImage& img = images[n];
    for (int ch = 0; ch < 3; ++ch) {
      float* dst = t.plane(static_cast<int>(n), ch);
      for (std::size_t i = 0; i < img.pixel_count(); ++i) dst[i] = img.data[i * 3 + ch];
    }
  }
  return t;
}

Tensor to_tensor_replicated(std::span<const GrayImage> images) {
  check_batch(images);
  Tensor t(static_cast<int>(images.size()), 3, images[0].height, images[0].width);
  for (std::size_t n = 0; n < images.size(); ++n) {
    for (int ch = 0; ch < 3; ++ch) copy_plane(images[n].y, t.plane(static_cast<int>(n), ch));
  }
  return t;
}

Tensor noise_planes(std::span<const NoiseVector> noise, int h, int w) {
  if (noise.empty()) throw InvalidArgument("empty noise batch");
  const int dim = noise[0].dim();
  Tensor t(static_cast<int>(noise.size()), dim, h, w);
  for (std::size_t n = 0; n < noise.size(); ++n) {
    if (noise[n].dim() != dim) throw ShapeError("noise vectors must share one dimension");
    for (int c = 0; c < dim; ++c) {
      float* p = t.plane(static_cast<int>(n), c);
      std::fill(p, p + t.plane_size(), noise[n].values[static_cast<std::size_t>(c)]);
    }
  }
  return t;
}

GrayImage gray_from_tensor(const Tensor& t, int n, int channel) {
  GrayImage g;
  g.height = t.h();
  g.width = t.w();
  g.y = read_plane(t, n, channel, 0.0f, 1.0f);
  return g;
}

ChromaImage chroma_from_tensor(const Tensor& t, int n, int first_channel) {
  ChromaImage c;
  c.height = t.h();
  c.width = t.w();
  c.u = read_plane(t, n, first_channel, -0.5f, 0.5f);
  c.v = read_plane(t, n, first_channel + 1, -0.5f, 0.5f);
  return c;
}

RgbImage rgb_from_tensor(const Tensor& t, int n) {
  if (t.c() != 3) throw ShapeError("rgb_from_tensor: expected 3 channels");
  RgbImage img(t.h(), t.w());
  for (int ch = 0; ch < 3; ++ch) {
    const float* p = t.plane(n, ch);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      img.data[i * 3 + ch] = std::clamp(p[i], 0.0f, 1.0f);
    }
  }
  return img;
}

// ---------------------------------------------------------------------------

ChromaImage baseline_generator_forward(const Generator& gen, const ParameterSet& params,
                                       const GrayImage& g, const NoiseVector& z) {
  const auto& cfg = gen.config();
  if (!cfg.use_noise || cfg.in_channels != 1 || cfg.out_channels != 2) {
    throw ConfigError("baseline generator needs a noise-enabled 1->2 configuration");
  }
  if (z.dim() != cfg.noise_dim) {
    throw ShapeError("noise vector has dim " + std::to_string(z.dim()) + ", expected " +
                     std::to_string(cfg.noise_dim));
  }
  validate(g);
  const Tensor x = concat_channels(to_tensor(std::span(&g, 1)),
                                   noise_planes(std::span(&z, 1), g.height, g.width));
  return chroma_from_tensor(gen.forward(params, x, nullptr), 0);
}

ChromaImage gen_g2c_forward(const Generator& gen, const ParameterSet& params, const GrayImage& g) {
  const auto& cfg = gen.config();
  if (cfg.use_noise || cfg.in_channels != 1 || cfg.out_channels != 2) {
    throw ConfigError("gen_g2c needs a noise-free 1->2 configuration");
  }
  validate(g);
  return chroma_from_tensor(gen.forward(params, to_tensor(std::span(&g, 1)), nullptr), 0);
}

GrayImage gen_c2g_forward(const Generator& gen, const ParameterSet& params, const ChromaImage& c) {
  const auto& cfg = gen.config();
  if (cfg.use_noise || cfg.in_channels != 2 || cfg.out_channels != 1) {
    throw ConfigError("gen_c2g needs a noise-free 2->1 configuration");
  }
  validate(c);
  return gray_from_tensor(gen.forward(params, to_tensor(std::span(&c, 1)), nullptr), 0);
}

double discriminator_forward(const Discriminator& dis, const ParameterSet& params,
                             const YuvImage& img) {
  validate(img);
  return dis.forward(params, to_tensor(std::span(&img, 1)), nullptr).at(0);
}

}  // namespace chromacycle
