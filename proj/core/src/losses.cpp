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

#include "chromacycle/losses.hpp"

#include <algorithm>
#include <cmath>

#include "chromacycle/error.hpp"

namespace chromacycle {
namespace {

void require_nonempty(std::span<const double> xs, const char* who) {
  if (xs.empty()) throw InvalidArgument(std::string(who) + ": empty score list");
}

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }
bool inside_clamp(double p) { return p > kProbEps && p < 1.0 - kProbEps; }

double mean_neg_log(std::span<const double> ps) {
  double s = 0.0;
  for (double p : ps) s -= std::log(clamp_prob(p));
  return s / static_cast<double>(ps.size());
}

double mean_neg_log1m(std::span<const double> ps) {
  double s = 0.0;
  for (double p : ps) s -= std::log(1.0 - clamp_prob(p));
  return s / static_cast<double>(ps.size());
}

std::vector<double> floats_to_doubles(const std::vector<float>& xs) {
  return {xs.begin(), xs.end()};
}

}  // namespace

double LossValue::component_sum() const {
  double s = 0.0;
  for (const auto& [name, v] : components) s += v;
  return s;
}

LossValue wgan_loss_g(std::span<const double> d_fake) {
  require_nonempty(d_fake, "wgan_loss_g");
  const double v = -mean(d_fake);
  return {v, {{"fake", v}}};
}

std::vector<double> wgan_loss_g_grad(std::span<const double> d_fake) {
  require_nonempty(d_fake, "wgan_loss_g");
  return std::vector<double>(d_fake.size(), -1.0 / static_cast<double>(d_fake.size()));
}

LossValue wgan_loss_d(std::span<const double> d_real, std::span<const double> d_fake) {
  require_nonempty(d_real, "wgan_loss_d");
  require_nonempty(d_fake, "wgan_loss_d");
  const double real = -mean(d_real);
  const double fake = mean(d_fake);
  return {real + fake, {{"real", real}, {"fake", fake}}};
}

ScoreGradients wgan_loss_d_grad(std::span<const double> d_real, std::span<const double> d_fake) {
  require_nonempty(d_real, "wgan_loss_d");
  require_nonempty(d_fake, "wgan_loss_d");
  return {std::vector<double>(d_real.size(), -1.0 / static_cast<double>(d_real.size())),
          std::vector<double>(d_fake.size(), 1.0 / static_cast<double>(d_fake.size()))};
}

LossValue gan_loss_d(std::span<const double> p_real, std::span<const double> p_fake) {
  require_nonempty(p_real, "gan_loss_d");
  require_nonempty(p_fake, "gan_loss_d");
  const double real = mean_neg_log(p_real);
  const double fake = mean_neg_log1m(p_fake);
  return {real + fake, {{"real", real}, {"fake", fake}}};
}

ScoreGradients gan_loss_d_grad(std::span<const double> p_real, std::span<const double> p_fake) {
  require_nonempty(p_real, "gan_loss_d");
  require_nonempty(p_fake, "gan_loss_d");
  const double nr = static_cast<double>(p_real.size());
  const double nf = static_cast<double>(p_fake.size());
  ScoreGradients g{std::vector<double>(p_real.size()), std::vector<double>(p_fake.size())};
  for (std::size_t i = 0; i < p_real.size(); ++i) {
    g.real[i] = inside_clamp(p_real[i]) ? -1.0 / (nr * p_real[i]) : 0.0;
  }
  for (std::size_t i = 0; i < p_fake.size(); ++i) {
    g.fake[i] = inside_clamp(p_fake[i]) ? 1.0 / (nf * (1.0 - p_fake[i])) : 0.0;
  }
  return g;
}

LossValue gan_loss_g(std::span<const double> p_fake) {
  require_nonempty(p_fake, "gan_loss_g");
  const double v = mean_neg_log(p_fake);
  return {v, {{"fake", v}}};
}

std::vector<double> gan_loss_g_grad(std::span<const double> p_fake) {
  require_nonempty(p_fake, "gan_loss_g");
  const double n = static_cast<double>(p_fake.size());
  std::vector<double> g(p_fake.size());
  for (std::size_t i = 0; i < p_fake.size(); ++i) {
    g[i] = inside_clamp(p_fake[i]) ? -1.0 / (n * p_fake[i]) : 0.0;
  }
  return g;
}

CycleAdversarialLosses cycle_adv_losses(std::span<const double> p_real_c,
                                        std::span<const double> p_fake_c,
                                        std::span<const double> p_real_g,
                                        std::span<const double> p_fake_g) {
  return {gan_loss_d(p_real_c, p_fake_c), gan_loss_d(p_real_g, p_fake_g), gan_loss_g(p_fake_c),
          gan_loss_g(p_fake_g)};
}

double mean_abs_error(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw ShapeError("mean_abs_error: size mismatch");
  if (pred.empty()) throw InvalidArgument("mean_abs_error: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

std::vector<double> mean_abs_error_grad(std::span<const double> pred,
                                        std::span<const double> target) {
  if (pred.size() != target.size()) throw ShapeError("mean_abs_error: size mismatch");
  if (pred.empty()) throw InvalidArgument("mean_abs_error: empty input");
  const double inv = 1.0 / static_cast<double>(pred.size());
  std::vector<double> g(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    g[i] = d > 0.0 ? inv : (d < 0.0 ? -inv : 0.0);
  }
  return g;
}

double mean_abs_error(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) throw ShapeError("mean_abs_error: shape mismatch");
  if (pred.empty()) throw InvalidArgument("mean_abs_error: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    s += std::abs(static_cast<double>(pred.data()[i]) - target.data()[i]);
  }
  return s / static_cast<double>(pred.size());
}

Tensor mean_abs_error_grad(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) throw ShapeError("mean_abs_error: shape mismatch");
  const float inv = 1.0f / static_cast<float>(pred.size());
  Tensor g(pred.shape());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const float d = pred.data()[i] - target.data()[i];
    g.data()[i] = d > 0.0f ? inv : (d < 0.0f ? -inv : 0.0f);
  }
  return g;
}

LossValue cycle_consistency_loss(const GrayImage& real_g, const GrayImage& rec_g,
                                 const ChromaImage& real_c, const ChromaImage& rec_c) {
  if (real_g.height != rec_g.height || real_g.width != rec_g.width) {
    throw ShapeError("cycle_consistency_loss: gray reconstruction has the wrong size");
  }
  if (real_c.height != rec_c.height || real_c.width != rec_c.width) {
    throw ShapeError("cycle_consistency_loss: chroma reconstruction has the wrong size");
  }
  const double cyc_g = mean_abs_error(floats_to_doubles(rec_g.y), floats_to_doubles(real_g.y));
  std::vector<double> rec_uv = floats_to_doubles(rec_c.u);
  rec_uv.insert(rec_uv.end(), rec_c.v.begin(), rec_c.v.end());
  std::vector<double> real_uv = floats_to_doubles(real_c.u);
  real_uv.insert(real_uv.end(), real_c.v.begin(), real_c.v.end());
  const double cyc_c = mean_abs_error(rec_uv, real_uv);
  return {cyc_g + cyc_c, {{"cyc_g", cyc_g}, {"cyc_c", cyc_c}}};
}

LossValue total_cyclegan_generator_loss(const LossValue& adv_g2c, const LossValue& adv_c2g,
                                        const LossValue& cyc, double lambda_cyc) {
  if (!(lambda_cyc >= 0.0)) throw InvalidArgument("lambda_cyc must be >= 0");
  const double weighted = lambda_cyc * cyc.value;
  return {adv_g2c.value + adv_c2g.value + weighted,
          {{"adv_g2c", adv_g2c.value}, {"adv_c2g", adv_c2g.value}, {"cyc_weighted", weighted}}};
}

}  // namespace chromacycle
