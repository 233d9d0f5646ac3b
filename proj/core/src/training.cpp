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

#include "chromacycle/training.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "chromacycle/error.hpp"
#include "chromacycle/losses.hpp"
#include "chromacycle/optim.hpp"
#include "fnv.hpp"
#include "json.hpp"

namespace chromacycle {
namespace {

using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  detail::Fnv1a h;
  h.update(&seed, sizeof(seed));
  h.update(tag);
  return h.digest();
}

const char* to_string(OptimizerKind k) { return k == OptimizerKind::adam ? "adam" : "rmsprop"; }

std::unique_ptr<nn::Optimizer> make_optimizer(const TrainConfig& c) {
  if (c.optimizer.kind == OptimizerKind::adam) {
    return std::make_unique<nn::Adam>(
        nn::AdamOptions{c.learning_rate, c.optimizer.beta1, c.optimizer.beta2, 1e-8});
  }
  return std::make_unique<nn::Rmsprop>(
      nn::RmspropOptions{c.learning_rate, c.optimizer.alpha, 1e-8});
}

void require_finite(double v, int iteration, const std::string& term) {
  if (!std::isfinite(v)) throw DivergenceError(iteration, term);
}

void require_finite(const ParameterSet& p, int iteration, const std::string& role) {
  if (!p.all_finite()) throw DivergenceError(iteration, role + " weights");
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) throw ShapeError("tensor add: shape mismatch");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Tensor scaled(Tensor t, float s) {
  for (float& v : t.values()) v *= s;
  return t;
}

std::vector<GrayImage> grays_of(const std::vector<SamplePair>& batch) {
  std::vector<GrayImage> out;
  for (const auto& p : batch) out.push_back(p.gray);
  return out;
}

std::vector<YuvImage> colors_of(const std::vector<SamplePair>& batch) {
  std::vector<YuvImage> out;
  for (const auto& p : batch) out.push_back(p.color_yuv);
  return out;
}

std::vector<RgbImage> colors_rgb_of(const std::vector<SamplePair>& batch) {
  std::vector<RgbImage> out;
  for (const auto& p : batch) out.push_back(yuv_to_rgb(p.color_yuv));
  return out;
}

struct Networks {
  std::map<std::string, Generator> gens;
  std::map<std::string, Discriminator> dis;

  explicit Networks(const NetworkSpecs& specs) {
    for (const auto& [role, cfg] : specs.generators) gens.emplace(role, Generator(cfg));
    for (const auto& [role, cfg] : specs.discriminators) dis.emplace(role, Discriminator(cfg));
  }
};

std::string rng_fingerprint(const BatchSampler& sampler, const std::mt19937_64& noise_rng) {
  std::ostringstream os;
  os << noise_rng;
  detail::Fnv1a h;
  h.update(sampler.state_fingerprint());
  h.update(os.str());
  return h.hex();
}

Checkpoint starting_point(const TrainConfig& config, const TrainOptions& options,
                          CheckpointUse use) {
  if (!options.warm_start) return initial_checkpoint(config);
  const Checkpoint& ws = *options.warm_start;
  require_use(ws, use);
  ws.validate();
  if (ws.config.regime != config.regime) {
    throw RegimeMismatch("warm start checkpoint regime differs from the training config");
  }
  Checkpoint ck = ws;
  ck.config = config;
  ck.validate();
  return ck;
}

// ---------------------------------------------------------------------------
// Cycle regimes. Everything that differs between the conditional (Y <-> UV)
// and the unconditional (gray RGB <-> color RGB) variant is in this adapter.

struct CycleDomains {
  bool conditional;

  // Gray-domain generator input and cycle target.
  Tensor gray(const std::vector<SamplePair>& batch) const {
    const auto g = grays_of(batch);
    return conditional ? to_tensor(std::span<const GrayImage>(g))
                       : to_tensor_replicated(std::span<const GrayImage>(g));
  }

  // Color-domain generator input and cycle target.
  Tensor color(const std::vector<SamplePair>& batch) const {
    if (conditional) {
      const auto c = colors_of(batch);
      return slice_channels(to_tensor(std::span<const YuvImage>(c)), 1, 2);
    }
    const auto c = colors_rgb_of(batch);
    return to_tensor(std::span<const RgbImage>(c));
  }

  Tensor real_color_input(const std::vector<SamplePair>& batch) const {
    if (conditional) {
      const auto c = colors_of(batch);
      return to_tensor(std::span<const YuvImage>(c));
    }
    return color(batch);
  }

  // A real grayscale sample carries zero chroma.
  Tensor real_gray_input(const Tensor& gray) const {
    if (!conditional) return gray;
    return concat_channels(gray, Tensor(gray.n(), 2, gray.h(), gray.w()));
  }

  // Fake color judged by dis_c: input luma with generated chroma.
  Tensor fake_color_input(const Tensor& gray, const Tensor& fake_c) const {
    return conditional ? concat_channels(gray, fake_c) : fake_c;
  }

  // Fake gray judged by dis_g: generated luma with the real color sample's chroma.
  Tensor fake_gray_input(const Tensor& fake_g, const Tensor& color) const {
    return conditional ? concat_channels(fake_g, color) : fake_g;
  }

  Tensor grad_fake_c(const Tensor& grad_input) const {
    return conditional ? slice_channels(grad_input, 1, 2) : grad_input;
  }

  Tensor grad_fake_g(const Tensor& grad_input) const {
    return conditional ? slice_channels(grad_input, 0, 1) : grad_input;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

TrainConfig TrainConfig::defaults_for(Regime regime) {
  TrainConfig c;
  c.regime = regime;
  switch (regime) {
    case Regime::wgan:
      c.optimizer.kind = OptimizerKind::rmsprop;
      c.learning_rate = 5e-5;
      c.batch_size = 4;
      break;
    case Regime::gan:
      c.batch_size = 4;
      break;
    case Regime::cyclegan:
    case Regime::cond_cyclegan:
      break;
  }
  return c;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("learning_rate must be > 0");
  }
  if (regime == Regime::wgan && !(clip_value > 0.0)) {
    throw InvalidArgument("clip_value must be > 0 for wgan");
  }
  if (n_critic < 1) throw InvalidArgument("n_critic must be >= 1");
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (checkpoint_every < 0) throw InvalidArgument("checkpoint_every must be >= 0");
  if (!(lambda_cyc >= 0.0)) throw InvalidArgument("lambda_cyc must be >= 0");
  if (image_size < 1) throw InvalidArgument("image_size must be >= 1");
  if (load_size < image_size) throw InvalidArgument("load_size must be >= image_size");
  if (optimizer.kind == OptimizerKind::adam &&
      !(optimizer.beta1 >= 0 && optimizer.beta1 < 1 && optimizer.beta2 >= 0 &&
        optimizer.beta2 < 1)) {
    throw InvalidArgument("adam betas must lie in [0, 1)");
  }
  if (optimizer.kind == OptimizerKind::rmsprop && !(optimizer.alpha >= 0 && optimizer.alpha < 1)) {
    throw InvalidArgument("rmsprop alpha must lie in [0, 1)");
  }
  const int multiple = 1 << std::max(gen_n_down, dis_n_layers);
  if (image_size % multiple != 0) {
    throw InvalidArgument("image_size must be a multiple of " + std::to_string(multiple));
  }
  const NetworkSpecs specs = network_specs(*this);
  for (const auto& [role, g] : specs.generators) g.validate();
  for (const auto& [role, d] : specs.discriminators) d.validate();
}

PreparationSpec TrainConfig::preparation(bool training, std::uint64_t seed) const {
  PreparationSpec spec;
  spec.load_size = load_size;
  spec.crop_size = image_size;
  spec.seed = seed;
  if (load_size == image_size) {
    spec.mode = PrepareMode::resize_only;
  } else {
    spec.mode = training ? PrepareMode::resize_then_random_crop
                         : PrepareMode::resize_then_center_crop;
  }
  return spec;
}

std::string to_json(const TrainConfig& c) {
  json j = {
      {"regime", to_string(c.regime)},
      {"learning_rate", c.learning_rate},
      {"optimizer",
       {{"kind", to_string(c.optimizer.kind)},
        {"beta1", c.optimizer.beta1},
        {"beta2", c.optimizer.beta2},
        {"alpha", c.optimizer.alpha}}},
      {"clip_value", c.clip_value},
      {"n_critic", c.n_critic},
      {"lambda_cyc", c.lambda_cyc},
      {"batch_size", c.batch_size},
      {"iterations", c.iterations},
      {"seed", c.seed},
      {"checkpoint_every", c.checkpoint_every},
      {"image_size", c.image_size},
      {"load_size", c.load_size},
      {"gen_base_width", c.gen_base_width},
      {"gen_n_down", c.gen_n_down},
      {"gen_n_res", c.gen_n_res},
      {"noise_dim", c.noise_dim},
      {"dis_base_width", c.dis_base_width},
      {"dis_n_layers", c.dis_n_layers},
  };
  return j.dump();
}

TrainConfig train_config_from_json(const std::string& text) {
  TrainConfig c;
  try {
    const json j = json::parse(text);
    const auto regime = parse_regime(j.at("regime").get<std::string>());
    if (!regime) throw FormatError("unknown regime in config");
    c.regime = *regime;
    c.learning_rate = j.at("learning_rate").get<double>();
    const auto& o = j.at("optimizer");
    const std::string kind = o.at("kind").get<std::string>();
    if (kind != "adam" && kind != "rmsprop") throw FormatError("unknown optimizer '" + kind + "'");
    c.optimizer.kind = kind == "adam" ? OptimizerKind::adam : OptimizerKind::rmsprop;
    c.optimizer.beta1 = o.at("beta1").get<double>();
    c.optimizer.beta2 = o.at("beta2").get<double>();
    c.optimizer.alpha = o.at("alpha").get<double>();
    c.clip_value = j.at("clip_value").get<double>();
    c.n_critic = j.at("n_critic").get<int>();
    c.lambda_cyc = j.at("lambda_cyc").get<double>();
    c.batch_size = j.at("batch_size").get<int>();
    c.iterations = j.at("iterations").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.checkpoint_every = j.at("checkpoint_every").get<int>();
    c.image_size = j.at("image_size").get<int>();
    c.load_size = j.at("load_size").get<int>();
    c.gen_base_width = j.at("gen_base_width").get<int>();
    c.gen_n_down = j.at("gen_n_down").get<int>();
    c.gen_n_res = j.at("gen_n_res").get<int>();
    c.noise_dim = j.at("noise_dim").get<int>();
    c.dis_base_width = j.at("dis_base_width").get<int>();
    c.dis_n_layers = j.at("dis_n_layers").get<int>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

NetworkSpecs network_specs(const TrainConfig& c) {
  NetworkSpecs specs;
  auto gen = [&](int in, int out, bool noise) {
    GeneratorConfig g;
    g.in_channels = in;
    g.out_channels = out;
    g.base_width = c.gen_base_width;
    g.n_down = c.gen_n_down;
    g.n_res = c.gen_n_res;
    g.use_noise = noise;
    g.noise_dim = noise ? c.noise_dim : 0;
    return g;
  };
  auto dis = [&](DiscriminatorHead head) {
    DiscriminatorConfig d;
    d.in_channels = 3;
    d.base_width = c.dis_base_width;
    d.n_layers = c.dis_n_layers;
    d.head = head;
    return d;
  };
  switch (c.regime) {
    case Regime::wgan:
    case Regime::gan:
      specs.generators.emplace("generator", gen(1, 2, true));
      specs.discriminators.emplace("discriminator",
                                   dis(c.regime == Regime::wgan
                                           ? DiscriminatorHead::wasserstein_scalar
                                           : DiscriminatorHead::sigmoid_probability));
      break;
    case Regime::cond_cyclegan:
      specs.generators.emplace("gen_g2c", gen(1, 2, false));
      specs.generators.emplace("gen_c2g", gen(2, 1, false));
      specs.discriminators.emplace("dis_c", dis(DiscriminatorHead::sigmoid_probability));
      specs.discriminators.emplace("dis_g", dis(DiscriminatorHead::sigmoid_probability));
      break;
    case Regime::cyclegan:
      specs.generators.emplace("gen_g2c", gen(3, 3, false));
      specs.generators.emplace("gen_c2g", gen(3, 3, false));
      specs.discriminators.emplace("dis_c", dis(DiscriminatorHead::sigmoid_probability));
      specs.discriminators.emplace("dis_g", dis(DiscriminatorHead::sigmoid_probability));
      break;
  }
  return specs;
}

Checkpoint initial_checkpoint(const TrainConfig& config) {
  config.validate();
  Checkpoint ck;
  ck.config = config;
  const NetworkSpecs specs = network_specs(config);
  for (const auto& [role, g] : specs.generators) {
    ck.networks.emplace(role, init_params(g, derive_seed(config.seed, "init/" + role)));
  }
  for (const auto& [role, d] : specs.discriminators) {
    ck.networks.emplace(role, init_params(d, derive_seed(config.seed, "init/" + role)));
  }
  return ck;
}

// ---------------------------------------------------------------------------

TrainResult train_baseline(const TrainConfig& config, const DatasetManifest& data,
                           const TrainOptions& options) {
  if (!is_baseline(config.regime)) {
    throw RegimeMismatch(std::string("train_baseline cannot run regime ") +
                         to_string(config.regime));
  }
  config.validate();
  if (data.entries.empty()) throw InvalidArgument("dataset manifest is empty");

  const bool wgan = config.regime == Regime::wgan;
  Checkpoint ck = starting_point(config, options, CheckpointUse::train_baseline);
  const Networks nets(network_specs(config));
  const Generator& gen = nets.gens.at("generator");
  const Discriminator& dis = nets.dis.at("discriminator");
  ParameterSet& gp = ck.networks.at("generator");
  ParameterSet& dp = ck.networks.at("discriminator");

  BatchSampler sampler(data, config.preparation(true), derive_seed(config.seed, "sampler"));
  std::mt19937_64 noise_rng(derive_seed(config.seed, "noise"));
  auto g_opt = make_optimizer(config);
  auto d_opt = make_optimizer(config);
  const auto& hooks = options.hooks;

  // Generator input: luma plus broadcast noise planes.
  auto generator_input = [&](const std::vector<SamplePair>& batch, Tensor& gray) {
    const auto grays = grays_of(batch);
    gray = to_tensor(std::span<const GrayImage>(grays));
    std::vector<NoiseVector> z;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      z.push_back(NoiseVector::sample(config.noise_dim, noise_rng));
    }
    return concat_channels(gray, noise_planes(std::span<const NoiseVector>(z), gray.h(), gray.w()));
  };

  TrainResult result;
  result.log.regime = to_string(config.regime);
  result.log.run_id = std::string(to_string(config.regime)) + "-seed" + std::to_string(config.seed);

  const int first = ck.iteration + 1;
  const int last = ck.iteration + config.iterations;
  for (int it = first; it <= last; ++it) {
    const int critic_steps = wgan ? config.n_critic : 1;
    double loss_d = 0.0;
    for (int step = 0; step < critic_steps; ++step) {
      const auto batch = sampler.next(config.batch_size);
      if (hooks.on_batch) hooks.on_batch(it, batch);
      Tensor gray;
      const Tensor fake_c = gen.forward(gp, generator_input(batch, gray), nullptr);
      const auto colors = colors_of(batch);
      const Tensor real = to_tensor(std::span<const YuvImage>(colors));
      const Tensor fake = concat_channels(gray, fake_c);

      DiscriminatorTrace tr_real;
      DiscriminatorTrace tr_fake;
      const auto s_real = dis.forward(dp, real, &tr_real);
      const auto s_fake = dis.forward(dp, fake, &tr_fake);
      const LossValue loss = wgan ? wgan_loss_d(s_real, s_fake) : gan_loss_d(s_real, s_fake);
      require_finite(loss.value, it, loss_names::kLossD);
      const ScoreGradients sg =
          wgan ? wgan_loss_d_grad(s_real, s_fake) : gan_loss_d_grad(s_real, s_fake);

      ParameterSet grads = dp.zeros_like();
      dis.backward(dp, tr_real, sg.real, grads);
      dis.backward(dp, tr_fake, sg.fake, grads);
      d_opt->step(dp, grads);
      if (wgan) nn::clip_weights(dp, static_cast<float>(config.clip_value));
      require_finite(dp, it, "discriminator");
      loss_d = loss.value;
      if (hooks.after_discriminator_update) {
        hooks.after_discriminator_update({it, step, "discriminator", &ck});
      }
    }

    const auto batch = sampler.next(config.batch_size);
    if (hooks.on_batch) hooks.on_batch(it, batch);
    Tensor gray;
    nn::Trace g_trace;
    const Tensor fake_c = gen.forward(gp, generator_input(batch, gray), &g_trace);
    DiscriminatorTrace d_trace;
    const auto s_fake = dis.forward(dp, concat_channels(gray, fake_c), &d_trace);
    const LossValue loss_g = wgan ? wgan_loss_g(s_fake) : gan_loss_g(s_fake);
    require_finite(loss_g.value, it, loss_names::kLossG);
    const auto dscore = wgan ? wgan_loss_g_grad(s_fake) : gan_loss_g_grad(s_fake);

    ParameterSet d_scratch = dp.zeros_like();
    const Tensor grad_input = dis.backward(dp, d_trace, dscore, d_scratch);
    ParameterSet g_grads = gp.zeros_like();
    gen.backward(gp, g_trace, slice_channels(grad_input, 1, 2), g_grads);
    g_opt->step(gp, g_grads);
    require_finite(gp, it, "generator");
    if (hooks.after_generator_update) hooks.after_generator_update({it, 0, "generator", &ck});

    result.log.append(it, loss_names::kLossD, loss_d);
    result.log.append(it, loss_names::kLossG, loss_g.value);

    ck.iteration = it;
    ck.rng_fingerprint = rng_fingerprint(sampler, noise_rng);
    if (config.checkpoint_every > 0 && it % config.checkpoint_every == 0 && hooks.on_checkpoint) {
      hooks.on_checkpoint(ck);
    }
  }
  result.checkpoint = std::move(ck);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct CycleForward {
  Tensor gray, color;
  Tensor fake_c, rec_g, fake_g, rec_c;
  nn::Trace t_fake_c, t_rec_g, t_fake_g, t_rec_c;
};

CycleForward run_cycle(const Networks& nets, const Checkpoint& ck, const CycleDomains& dom,
                       const std::vector<SamplePair>& batch, bool record) {
  const Generator& g2c = nets.gens.at("gen_g2c");
  const Generator& c2g = nets.gens.at("gen_c2g");
  const ParameterSet& p_g2c = ck.networks.at("gen_g2c");
  const ParameterSet& p_c2g = ck.networks.at("gen_c2g");
  CycleForward f;
  f.gray = dom.gray(batch);
  f.color = dom.color(batch);
  f.fake_c = g2c.forward(p_g2c, f.gray, record ? &f.t_fake_c : nullptr);
  f.rec_g = c2g.forward(p_c2g, f.fake_c, record ? &f.t_rec_g : nullptr);
  f.fake_g = c2g.forward(p_c2g, f.color, record ? &f.t_fake_g : nullptr);
  f.rec_c = g2c.forward(p_g2c, f.fake_g, record ? &f.t_rec_c : nullptr);
  return f;
}

double cycle_value(const CycleForward& f) {
  return mean_abs_error(f.rec_g, f.gray) + mean_abs_error(f.rec_c, f.color);
}

}  // namespace

double cycle_loss_on_batch(const Checkpoint& ck, const std::vector<SamplePair>& batch) {
  require_use(ck, CheckpointUse::evaluate_cycle);
  ck.validate();
  const Networks nets(network_specs(ck.config));
  const CycleDomains dom{ck.config.regime == Regime::cond_cyclegan};
  return cycle_value(run_cycle(nets, ck, dom, batch, false));
}

TrainResult train_cyclegan(const TrainConfig& config, const DatasetManifest& data,
                           const TrainOptions& options) {
  if (!is_cycle(config.regime)) {
    throw RegimeMismatch(std::string("train_cyclegan cannot run regime ") +
                         to_string(config.regime));
  }
  config.validate();
  if (data.entries.empty()) throw InvalidArgument("dataset manifest is empty");

  Checkpoint ck = starting_point(config, options, CheckpointUse::train_cyclegan);
  const Networks nets(network_specs(config));
  const CycleDomains dom{config.regime == Regime::cond_cyclegan};
  const Generator& g2c = nets.gens.at("gen_g2c");
  const Generator& c2g = nets.gens.at("gen_c2g");
  const Discriminator& dis_c = nets.dis.at("dis_c");
  const Discriminator& dis_g = nets.dis.at("dis_g");
  ParameterSet& p_g2c = ck.networks.at("gen_g2c");
  ParameterSet& p_c2g = ck.networks.at("gen_c2g");
  ParameterSet& p_dc = ck.networks.at("dis_c");
  ParameterSet& p_dg = ck.networks.at("dis_g");

  BatchSampler sampler(data, config.preparation(true), derive_seed(config.seed, "sampler"));
  const std::mt19937_64 no_noise;
  auto opt_g2c = make_optimizer(config);
  auto opt_c2g = make_optimizer(config);
  auto opt_dc = make_optimizer(config);
  auto opt_dg = make_optimizer(config);
  const auto& hooks = options.hooks;
  const auto lambda = static_cast<float>(config.lambda_cyc);

  TrainResult result;
  result.log.regime = to_string(config.regime);
  result.log.run_id = std::string(to_string(config.regime)) + "-seed" + std::to_string(config.seed);

  const int first = ck.iteration + 1;
  const int last = ck.iteration + config.iterations;
  for (int it = first; it <= last; ++it) {
    const auto batch = sampler.next(config.batch_size);
    if (hooks.on_batch) hooks.on_batch(it, batch);

    // Generators: adversarial terms from both discriminators plus both cycles.
    CycleForward f = run_cycle(nets, ck, dom, batch, true);
    const Tensor fake_color = dom.fake_color_input(f.gray, f.fake_c);
    const Tensor fake_gray = dom.fake_gray_input(f.fake_g, f.color);
    DiscriminatorTrace tr_fake_c;
    DiscriminatorTrace tr_fake_g;
    const auto p_fake_c = dis_c.forward(p_dc, fake_color, &tr_fake_c);
    const auto p_fake_g = dis_g.forward(p_dg, fake_gray, &tr_fake_g);

    const LossValue adv_g2c = gan_loss_g(p_fake_c);
    const LossValue adv_c2g = gan_loss_g(p_fake_g);
    const LossValue cyc{cycle_value(f), {}};
    const LossValue total = total_cyclegan_generator_loss(adv_g2c, adv_c2g, cyc, config.lambda_cyc);
    require_finite(adv_g2c.value + adv_c2g.value, it, loss_names::kAdvGen);
    require_finite(cyc.value, it, loss_names::kCyc);
    require_finite(total.value, it, loss_names::kTotal);

    {
      ParameterSet scratch_c = p_dc.zeros_like();
      ParameterSet scratch_g = p_dg.zeros_like();
      const Tensor d_fake_c_adv =
          dom.grad_fake_c(dis_c.backward(p_dc, tr_fake_c, gan_loss_g_grad(p_fake_c), scratch_c));
      const Tensor d_fake_g_adv =
          dom.grad_fake_g(dis_g.backward(p_dg, tr_fake_g, gan_loss_g_grad(p_fake_g), scratch_g));

      ParameterSet grads_g2c = p_g2c.zeros_like();
      ParameterSet grads_c2g = p_c2g.zeros_like();
      const Tensor d_fake_c_cyc = c2g.backward(
          p_c2g, f.t_rec_g, scaled(mean_abs_error_grad(f.rec_g, f.gray), lambda), grads_c2g);
      const Tensor d_fake_g_cyc = g2c.backward(
          p_g2c, f.t_rec_c, scaled(mean_abs_error_grad(f.rec_c, f.color), lambda), grads_g2c);
      g2c.backward(p_g2c, f.t_fake_c, add(d_fake_c_adv, d_fake_c_cyc), grads_g2c);
      c2g.backward(p_c2g, f.t_fake_g, add(d_fake_g_adv, d_fake_g_cyc), grads_c2g);

      opt_g2c->step(p_g2c, grads_g2c);
      opt_c2g->step(p_c2g, grads_c2g);
      require_finite(p_g2c, it, "gen_g2c");
      require_finite(p_c2g, it, "gen_c2g");
      if (hooks.after_generator_update) {
        hooks.after_generator_update({it, 0, "gen_g2c", &ck});
        hooks.after_generator_update({it, 0, "gen_c2g", &ck});
      }
    }

    // Discriminators. Their parameters did not change during the generator
    // step, so the fake-sample traces recorded above are still valid.
    const Tensor real_color = dom.real_color_input(batch);
    const Tensor real_gray = dom.real_gray_input(f.gray);
    DiscriminatorTrace tr_real_c;
    DiscriminatorTrace tr_real_g;
    const auto p_real_c = dis_c.forward(p_dc, real_color, &tr_real_c);
    const auto p_real_g = dis_g.forward(p_dg, real_gray, &tr_real_g);
    if (hooks.on_generated) {
      hooks.on_generated({it, &real_color, &fake_color, &real_gray, &fake_gray});
    }
    const CycleAdversarialLosses adv = cycle_adv_losses(p_real_c, p_fake_c, p_real_g, p_fake_g);
    require_finite(adv.dis_c.value, it, loss_names::kAdvDisC);
    require_finite(adv.dis_g.value, it, loss_names::kAdvDisG);

    auto update_dis = [&](const Discriminator& dis, ParameterSet& params, nn::Optimizer& opt,
                          const DiscriminatorTrace& tr_real, const DiscriminatorTrace& tr_fake,
                          const std::vector<double>& p_real, const std::vector<double>& p_fake,
                          const std::string& role) {
      const ScoreGradients sg = gan_loss_d_grad(p_real, p_fake);
      ParameterSet grads = params.zeros_like();
      dis.backward(params, tr_real, sg.real, grads);
      dis.backward(params, tr_fake, sg.fake, grads);
      opt.step(params, grads);
      require_finite(params, it, role);
      if (hooks.after_discriminator_update) hooks.after_discriminator_update({it, 0, role, &ck});
    };
    update_dis(dis_c, p_dc, *opt_dc, tr_real_c, tr_fake_c, p_real_c, p_fake_c, "dis_c");
    update_dis(dis_g, p_dg, *opt_dg, tr_real_g, tr_fake_g, p_real_g, p_fake_g, "dis_g");

    result.log.append(it, loss_names::kAdvDisC, adv.dis_c.value);
    result.log.append(it, loss_names::kAdvDisG, adv.dis_g.value);
    result.log.append(it, loss_names::kAdvGen, adv.gen_g2c.value + adv.gen_c2g.value);
    result.log.append(it, loss_names::kCyc, cyc.value);
    result.log.append(it, loss_names::kTotal, total.value);

    ck.iteration = it;
    ck.rng_fingerprint = rng_fingerprint(sampler, no_noise);
    if (config.checkpoint_every > 0 && it % config.checkpoint_every == 0 && hooks.on_checkpoint) {
      hooks.on_checkpoint(ck);
    }
  }
  result.checkpoint = std::move(ck);
  return result;
}

TrainResult train(const TrainConfig& config, const DatasetManifest& data,
                  const TrainOptions& options) {
  return is_cycle(config.regime) ? train_cyclegan(config, data, options)
                                 : train_baseline(config, data, options);
}

}  // namespace chromacycle
