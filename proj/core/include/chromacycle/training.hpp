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
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chromacycle/dataio.hpp"
#include "chromacycle/models.hpp"
#include "chromacycle/regime.hpp"

namespace chromacycle {

enum class OptimizerKind { adam, rmsprop };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double beta1 = 0.5;    // adam
  double beta2 = 0.999;  // adam
  double alpha = 0.9;    // rmsprop

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// Every training hyperparameter, including the architecture sizes.
/// Defaults are desk scale (64×64, CPU-trainable).
struct TrainConfig {
  Regime regime = Regime::cond_cyclegan;
  double learning_rate = 2e-4;
  OptimizerConfig optimizer;
  double clip_value = 0.01;  // wgan only
  int n_critic = 5;          // wgan only
  double lambda_cyc = 10.0;  // cycle regimes only
  int batch_size = 1;
  int iterations = 500;
  std::uint64_t seed = 0;
  int checkpoint_every = 0;  // 0: final checkpoint only
  int image_size = 64;       // crop size fed to the networks
  int load_size = 64;        // resize target; > image_size enables random crops

  int gen_base_width = 16;
  int gen_n_down = 2;
  int gen_n_res = 2;
  int noise_dim = 16;  // baseline generator only
  int dis_base_width = 16;
  int dis_n_layers = 3;

  /// Regime-appropriate defaults: RMSprop(alpha 0.9, lr 5e-5), batch 4 for
  /// wgan; Adam(0.5, 0.999, lr 2e-4) for the others, batch 4 for gan and 1
  /// for the cycle regimes.
  static TrainConfig defaults_for(Regime regime);

  void validate() const;
  /// Train-time preparation (random crop when load_size > image_size) or
  /// test-time preparation (center crop).
  PreparationSpec preparation(bool training, std::uint64_t seed = 0) const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

std::string to_json(const TrainConfig& config);
/// Throws FormatError on malformed input and InvalidArgument on invalid values.
TrainConfig train_config_from_json(const std::string& text);

/// Network configurations of a regime, keyed by role: "generator" and
/// "discriminator" for the baselines; "gen_g2c", "gen_c2g", "dis_c",
/// "dis_g" for the cycle regimes.
struct NetworkSpecs {
  std::map<std::string, GeneratorConfig> generators;
  std::map<std::string, DiscriminatorConfig> discriminators;
};

NetworkSpecs network_specs(const TrainConfig& config);

/// Trainable state of a run.
struct Checkpoint {
  TrainConfig config;
  int iteration = 0;
  std::string rng_fingerprint;
  std::map<std::string, ParameterSet> networks;

  /// Content hash of config, iteration and every weight.
  std::string id() const;
  /// Network roles and fingerprints must match network_specs(config).
  void validate() const;
  const ParameterSet& network(const std::string& role) const;
};

/// Freshly initialized networks for `config` (iteration 0).
Checkpoint initial_checkpoint(const TrainConfig& config);

/// Binary container: magic line "CHROMACYCLE-CKPT-1", a JSON header with the
/// config and tensor table, raw little-endian float32 payload, and an FNV-1a
/// checksum. Loading is all-or-nothing; throws FormatError on truncation,
/// bad magic or checksum and ConfigError on fingerprint mismatch.
void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

enum class CheckpointUse { colorize, evaluate_cycle, train_baseline, train_cyclegan };

/// Throws RegimeMismatch when the checkpoint's regime cannot serve `use`.
void require_use(const Checkpoint& ck, CheckpointUse use);
Checkpoint load_checkpoint_for(const std::filesystem::path& path, CheckpointUse use);

struct LossRow {
  int iteration = 0;
  std::string name;
  double value = 0.0;

  friend bool operator==(const LossRow&, const LossRow&) = default;
};

struct LossLog {
  std::string regime;
  std::string run_id;
  std::vector<LossRow> rows;

  /// Throws DivergenceError on a non-finite value and InvalidArgument when
  /// the iteration does not increase for that loss name.
  void append(int iteration, const std::string& name, double value);
  std::vector<double> series(const std::string& name) const;
  std::vector<std::string> names() const;
};

/// CSV "iteration,name,value" with values at 17 significant digits.
void write_loss_log(const LossLog& log, const std::filesystem::path& path);
LossLog read_loss_log(const std::filesystem::path& path);

/// Loss names logged by the trainers.
namespace loss_names {
inline constexpr const char* kLossG = "loss_g";
inline constexpr const char* kLossD = "loss_d";
inline constexpr const char* kAdvDisC = "adv_dis_c";
inline constexpr const char* kAdvDisG = "adv_dis_g";
inline constexpr const char* kAdvGen = "adv_gen";
inline constexpr const char* kCyc = "cyc";
inline constexpr const char* kTotal = "total";
}  // namespace loss_names

struct UpdateEvent {
  int iteration = 0;
  int step = 0;        // critic step within the iteration (wgan), otherwise 0
  std::string role;    // network that was updated
  const Checkpoint* state = nullptr;  // all networks right after the update
};

/// Discriminator inputs of one cycle-regime iteration. In cond-cyclegan the
/// color tensors are YUV and the gray tensors (Y, U, V) with U, V taken from
/// the real color sample for fakes and zero for reals; in cyclegan all four
/// are RGB.
struct GeneratedSamples {
  int iteration = 0;
  const Tensor* real_color = nullptr;
  const Tensor* fake_color = nullptr;
  const Tensor* real_gray = nullptr;
  const Tensor* fake_gray = nullptr;
};

struct TrainHooks {
  std::function<void(const UpdateEvent&)> after_discriminator_update;
  std::function<void(const UpdateEvent&)> after_generator_update;
  std::function<void(int iteration, const std::vector<SamplePair>&)> on_batch;
  std::function<void(const Checkpoint&)> on_checkpoint;
  std::function<void(const GeneratedSamples&)> on_generated;  // cycle regimes only
};

struct TrainOptions {
  TrainHooks hooks;
  /// Start from these weights instead of a fresh initialization.
  const Checkpoint* warm_start = nullptr;
};

struct TrainResult {
  Checkpoint checkpoint;
  LossLog log;
};

/// WGAN (n_critic clipped critic steps per generator step) or plain GAN
/// (1:1 alternating steps). Logs loss_g and loss_d every iteration.
TrainResult train_baseline(const TrainConfig& config, const DatasetManifest& data,
                           const TrainOptions& options = {});

/// Both GANs of the cycle trained side by side: generators jointly on the
/// total loss, then both discriminators. Logs adv_dis_c, adv_dis_g,
/// adv_gen, cyc and total every iteration.
TrainResult train_cyclegan(const TrainConfig& config, const DatasetManifest& data,
                           const TrainOptions& options = {});

/// Dispatches on config.regime.
TrainResult train(const TrainConfig& config, const DatasetManifest& data,
                  const TrainOptions& options = {});

/// Cycle-consistency loss of one batch, exactly as the trainer computes it.
double cycle_loss_on_batch(const Checkpoint& ck, const std::vector<SamplePair>& batch);

}  // namespace chromacycle
