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
#include <span>
#include <string>
#include <vector>

#include "chromacycle/colorspace.hpp"
#include "chromacycle/tensor.hpp"

// Adversarial and cycle-consistency objectives. Every loss comes with its
// analytic gradient so the trainer can backpropagate through the networks.
namespace chromacycle {

/// Scalar loss plus named additive terms; value == sum of components.
struct LossValue {
  double value = 0.0;
  std::map<std::string, double> components;

  double component_sum() const;
};

/// Probabilities are clamped to [kProbEps, 1 - kProbEps] before any log.
inline constexpr double kProbEps = 1e-7;

struct ScoreGradients {
  std::vector<double> real;
  std::vector<double> fake;
};

/// WGAN generator loss: mean of -D(fake).
LossValue wgan_loss_g(std::span<const double> d_fake);
std::vector<double> wgan_loss_g_grad(std::span<const double> d_fake);

/// WGAN critic loss: -(mean D(real) - mean D(fake)).
LossValue wgan_loss_d(std::span<const double> d_real, std::span<const double> d_fake);
ScoreGradients wgan_loss_d_grad(std::span<const double> d_real, std::span<const double> d_fake);

/// Discriminator side of the minimax game, negated for minimization:
/// -(mean log p_real + mean log(1 - p_fake)).
LossValue gan_loss_d(std::span<const double> p_real, std::span<const double> p_fake);
ScoreGradients gan_loss_d_grad(std::span<const double> p_real, std::span<const double> p_fake);

/// Non-saturating generator loss: -mean log p_fake.
LossValue gan_loss_g(std::span<const double> p_fake);
std::vector<double> gan_loss_g_grad(std::span<const double> p_fake);

struct CycleAdversarialLosses {
  LossValue dis_c;    // color discriminator
  LossValue dis_g;    // gray discriminator
  LossValue gen_g2c;  // generator judged by dis_c
  LossValue gen_c2g;  // generator judged by dis_g
};

/// gan_loss_d / gan_loss_g applied to both GANs of the cycle.
CycleAdversarialLosses cycle_adv_losses(std::span<const double> p_real_c,
                                        std::span<const double> p_fake_c,
                                        std::span<const double> p_real_g,
                                        std::span<const double> p_fake_g);

/// Mean absolute error and its gradient with respect to `pred`
/// (sign(pred - target) / N, zero where they agree).
double mean_abs_error(std::span<const double> pred, std::span<const double> target);
std::vector<double> mean_abs_error_grad(std::span<const double> pred,
                                        std::span<const double> target);
double mean_abs_error(const Tensor& pred, const Tensor& target);
Tensor mean_abs_error_grad(const Tensor& pred, const Tensor& target);

/// MAE(rec_g, real_g) + MAE(rec_c, real_c), the chroma term averaged over
/// both planes. Components "cyc_g" and "cyc_c". Throws ShapeError on
/// mismatched pairs.
LossValue cycle_consistency_loss(const GrayImage& real_g, const GrayImage& rec_g,
                                 const ChromaImage& real_c, const ChromaImage& rec_c);

/// adv_g2c + adv_c2g + lambda_cyc * cyc. Components "adv_g2c", "adv_c2g",
/// "cyc_weighted". Throws InvalidArgument for negative lambda.
LossValue total_cyclegan_generator_loss(const LossValue& adv_g2c, const LossValue& adv_c2g,
                                        const LossValue& cyc, double lambda_cyc);

}  // namespace chromacycle
