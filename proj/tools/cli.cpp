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

#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chromacycle/dataio.hpp"
#include "chromacycle/error.hpp"
#include "chromacycle/inference.hpp"
#include "chromacycle/metrics.hpp"
#include "chromacycle/training.hpp"
#include "json.hpp"

namespace chromacycle::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Errors caused by what the user passed in, as opposed to failures while
// doing the work.
bool is_usage_error(const Error& e) {
  return dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
         dynamic_cast<const FileNotFound*>(&e) || dynamic_cast<const FormatError*>(&e) ||
         dynamic_cast<const RegimeMismatch*>(&e) || dynamic_cast<const InvalidImage*>(&e) ||
         dynamic_cast<const ShapeError*>(&e);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

// ---- synth-data -----------------------------------------------------------

struct SynthArgs {
  std::string out;
  int n = 4;
  int size = 64;
  std::uint64_t seed = 0;
};

int cmd_synth_data(const SynthArgs& a) {
  if (a.n < 1) throw InvalidArgument("--n must be >= 1");
  const DatasetManifest m = generate_synthetic_dataset(a.out, a.n, a.size, a.seed);
  std::cout << "wrote " << m.entries.size() << " images and "
            << (fs::path(a.out) / "manifest.json").string() << "\n";
  return kOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string regime;
  std::string data;
  std::string out;
  int iters = 500;
  std::uint64_t seed = 0;
  double lr = 0.0;
  int batch = 0;
  double lambda_cyc = 0.0;
  double clip = 0.0;
  int n_critic = 0;
  int image_size = 0;
  int checkpoint_every = 0;
  CLI::App* app = nullptr;

  bool given(const char* flag) const { return app->count(flag) > 0; }
};

int cmd_train(const TrainArgs& a) {
  const std::optional<Regime> parsed = parse_regime(a.regime);
  if (!parsed) {
    throw InvalidArgument("unknown regime '" + a.regime +
                          "' (expected wgan, gan, cyclegan or cond-cyclegan)");
  }
  const Regime regime = *parsed;
  if (regime != Regime::wgan && (a.given("--clip") || a.given("--n-critic"))) {
    throw InvalidArgument("--clip and --n-critic apply only to --regime wgan");
  }
  if (is_baseline(regime) && a.given("--lambda-cyc")) {
    throw InvalidArgument("--lambda-cyc applies only to the cycle regimes");
  }
  TrainConfig cfg = TrainConfig::defaults_for(regime);
  cfg.iterations = a.iters;
  cfg.seed = a.seed;
  if (a.given("--lr")) cfg.learning_rate = a.lr;
  if (a.given("--batch")) cfg.batch_size = a.batch;
  if (a.given("--lambda-cyc")) cfg.lambda_cyc = a.lambda_cyc;
  if (a.given("--clip")) cfg.clip_value = a.clip;
  if (a.given("--n-critic")) cfg.n_critic = a.n_critic;
  if (a.given("--image-size")) cfg.image_size = cfg.load_size = a.image_size;
  if (a.given("--checkpoint-every")) cfg.checkpoint_every = a.checkpoint_every;
  cfg.validate();

  const DatasetManifest data = load_manifest(a.data);
  const fs::path out = a.out;
  fs::create_directories(out);

  TrainOptions options;
  options.hooks.on_checkpoint = [&](const Checkpoint& ck) {
    char name[40];
    std::snprintf(name, sizeof(name), "checkpoint_%06d.ckpt", ck.iteration);
    save_checkpoint(ck, out / name);
  };
  TrainResult result;
  try {
    result = train(cfg, data, options);
  } catch (const DivergenceError& e) {
    std::cerr << "error: training diverged at iteration " << e.iteration() << " ("
              << e.term() << " is not finite)\n";
    return kRuntime;
  }

  write_loss_log(result.log, out / "losses.csv");
  save_checkpoint(result.checkpoint, out / "checkpoint.ckpt");
  json run = {{"run_id", result.log.run_id},
              {"regime", result.log.regime},
              {"seed", cfg.seed},
              {"iterations", cfg.iterations},
              {"checkpoint", "checkpoint.ckpt"},
              {"checkpoint_id", result.checkpoint.id()},
              {"config", json::parse(to_json(cfg))}};
  write_text(out / "run.json", run.dump(2) + "\n");

  const auto names = result.log.names();
  std::cout << "trained " << result.log.regime << " for " << cfg.iterations << " iterations\n";
  for (const auto& name : names) {
    std::printf("  final %-10s %.6g\n", name.c_str(), result.log.series(name).back());
  }
  std::cout << "wrote " << (out / "checkpoint.ckpt").string() << "\n";
  return kOk;
}

// ---- colorize -------------------------------------------------------------

struct ColorizeArgs {
  std::string ckpt;
  std::string in;
  std::string out;
  std::uint64_t noise_seed = 0;
  bool native_size = false;
  CLI::App* app = nullptr;
};

int cmd_colorize(const ColorizeArgs& a) {
  const Checkpoint ck = load_checkpoint_for(a.ckpt, CheckpointUse::colorize);
  std::optional<std::uint64_t> noise;
  if (a.app->count("--noise-seed") > 0) {
    if (!is_baseline(ck.config.regime)) {
      throw InvalidArgument(std::string("--noise-seed is not available for ") +
                            to_string(ck.config.regime) + " checkpoints");
    }
    noise = a.noise_seed;
  }
  PreparationSpec spec;
  spec.load_size = spec.crop_size = ck.config.image_size;
  spec.mode = PrepareMode::resize_only;

  if (!fs::exists(a.in)) throw FileNotFound("input not found: " + a.in);
  if (fs::is_directory(a.in)) {
    const ColorizeSummary summary =
        colorize_directory(ck, a.in, a.out, a.native_size ? std::nullopt : std::optional(spec),
                           noise);
    for (const auto& f : summary.failures) {
      std::cerr << "skipped " << f.path << ": " << f.reason << "\n";
    }
    std::cout << "colorized " << summary.count << " image(s), " << summary.failures.size()
              << " skipped, into " << a.out << "\n";
    return kOk;
  }

  RgbImage img = load_image(a.in);
  if (!a.native_size) img = prepare(img, spec);
  const ColorizationResult r = colorize(ck, derive_gray(img), noise);
  fs::path dst = a.out;
  if (fs::is_directory(dst)) dst /= fs::path(a.in).stem().string() + ".png";
  save_image(r.output, dst);
  std::cout << "wrote " << dst.string() << "\n";
  return kOk;
}

// ---- compare-stability ----------------------------------------------------

struct StabilityArgs {
  std::vector<std::string> logs;
  std::string loss = loss_names::kCyc;
  int window = 100;
  std::string out;
};

int cmd_compare_stability(const StabilityArgs& a) {
  std::vector<LossLog> logs;
  std::set<std::string> seen;
  for (const auto& path : a.logs) {
    LossLog log = read_loss_log(path);
    const fs::path run_json = fs::path(path).parent_path() / "run.json";
    log.run_id = path;
    log.regime = "unknown";
    if (fs::exists(run_json)) {
      std::ifstream in(run_json);
      const json run = json::parse(in, nullptr, false);
      if (run.is_discarded() || !run.is_object()) {
        throw FormatError("malformed " + run_json.string());
      }
      log.run_id = run.value("run_id", path);
      log.regime = run.value("regime", std::string("unknown"));
    }
    if (!seen.insert(log.run_id).second) log.run_id = path;
    logs.push_back(std::move(log));
  }
  const StabilityReport report = stability_report(logs, a.loss, a.window);
  const fs::path out = a.out;
  write_text(out, report.to_json() + "\n");
  fs::path csv = out;
  csv.replace_extension(".csv");
  write_text(csv, report.to_csv());

  std::printf("%-28s %-14s %14s %14s\n", "run", "regime", "mean", "variance");
  for (const auto& r : report.runs) {
    std::printf("%-28s %-14s %14.6g %14.6g\n", r.run_id.c_str(), r.regime.c_str(), r.mean,
                r.variance);
  }
  std::printf("\n%-28s %5s %14s %14s\n", "group", "runs", "median mean", "median var");
  for (const auto& g : report.groups) {
    std::printf("%-28s %5d %14.6g %14.6g\n", g.group.c_str(), g.runs, g.median_mean,
                g.median_variance);
  }
  std::printf("\nlower mean: %s\nlower variance: %s\n", report.lower_mean.c_str(),
              report.lower_variance.c_str());
  if (report.conditional_lower_mean) {
    std::printf("conditional lower mean: %s, lower variance: %s\n",
                *report.conditional_lower_mean ? "yes" : "no",
                *report.conditional_lower_variance ? "yes" : "no");
  }
  return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string ckpt;
  std::string data;
  std::string out;
};

int cmd_eval(const EvalArgs& a) {
  const Checkpoint ck = load_checkpoint_for(a.ckpt, CheckpointUse::colorize);
  const DatasetManifest data = load_manifest(a.data);

  std::string split = "test";
  std::vector<ManifestEntry> entries = data.select(Split::test, Domain::color);
  if (entries.empty() && data.select(Split::test).empty()) {
    split = "train";
    entries = data.select(Split::train, Domain::color);
  }
  if (entries.empty()) throw InvalidArgument("manifest has no color images to evaluate");

  const PreparationSpec spec = ck.config.preparation(false);
  const Colorizer colorizer(ck);
  json per_image = json::array();
  double db_sum = 0.0;
  int finite = 0;
  int identical = 0;
  for (const auto& e : entries) {
    const RgbImage truth = prepare(load_image(data.resolve(e)), spec);
    const Psnr p = psnr(colorizer.colorize(derive_gray(truth)).output, truth);
    json row = {{"path", e.path}};
    if (p.identical) {
      ++identical;
      row["psnr_db"] = "identical";
    } else {
      ++finite;
      db_sum += p.db;
      row["psnr_db"] = p.db;
    }
    per_image.push_back(row);
  }

  json report = {{"checkpoint", a.ckpt},
                 {"checkpoint_id", ck.id()},
                 {"regime", to_string(ck.config.regime)},
                 {"split", split},
                 {"images", entries.size()},
                 {"psnr_identical_count", identical},
                 {"per_image", per_image}};
  report["psnr_db_mean"] = finite > 0 ? json(db_sum / finite) : json("identical");
  if (is_cycle(ck.config.regime)) {
    report["cycle_reconstruction_error"] = cycle_reconstruction_error(ck, data);
  }
  write_text(a.out, report.dump(2) + "\n");

  std::cout << "psnr (mean over " << finite << " image(s)): " << report["psnr_db_mean"].dump()
            << " dB\n";
  if (report.contains("cycle_reconstruction_error")) {
    std::cout << "cycle reconstruction error: " << report["cycle_reconstruction_error"].dump()
              << "\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"chromacycle: grayscale image colorization with cycle-consistent GANs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-data", "Write a synthetic comic-like dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--n", synth.n, "Number of images")->capture_default_str();
  synth_cmd->add_option("--size", synth.size, "Image side in pixels")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a colorization model");
  tr.app = train_cmd;
  train_cmd->add_option("--regime", tr.regime, "wgan | gan | cyclegan | cond-cyclegan")->required();
  train_cmd->add_option("--data", tr.data, "Dataset manifest.json")->required();
  train_cmd->add_option("--out", tr.out, "Run directory (checkpoints, losses.csv, run.json)")
      ->required();
  train_cmd->add_option("--iters", tr.iters, "Training iterations")->capture_default_str();
  train_cmd->add_option("--seed", tr.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--lr", tr.lr, "Learning rate (default depends on regime)");
  train_cmd->add_option("--batch", tr.batch, "Batch size (default depends on regime)");
  train_cmd->add_option("--lambda-cyc", tr.lambda_cyc, "Cycle loss weight, cycle regimes only (default 10)");
  train_cmd->add_option("--clip", tr.clip, "Critic weight clip, wgan only (default 0.01)");
  train_cmd->add_option("--n-critic", tr.n_critic, "Critic steps per generator step, wgan only (default 5)");
  train_cmd->add_option("--image-size", tr.image_size, "Training image side (default 64)");
  train_cmd->add_option("--checkpoint-every", tr.checkpoint_every,
                        "Also save checkpoint_<iter>.ckpt every N iterations (default 0: off)");

  ColorizeArgs col;
  auto* colorize_cmd = app.add_subcommand("colorize", "Colorize a grayscale image or directory");
  col.app = colorize_cmd;
  colorize_cmd->add_option("--ckpt", col.ckpt, "Checkpoint file")->required();
  colorize_cmd->add_option("--in", col.in, "Input image or directory")->required();
  colorize_cmd->add_option("--out", col.out, "Output PNG path or directory")->required();
  colorize_cmd->add_option("--noise-seed", col.noise_seed,
                           "Noise seed for diverse outputs (wgan/gan checkpoints only)");
  colorize_cmd->add_flag("--native-size", col.native_size,
                         "Keep the input size instead of resizing to the trained size");

  StabilityArgs st;
  auto* stab_cmd = app.add_subcommand("compare-stability",
                                      "Compare final-window loss statistics across runs");
  stab_cmd->add_option("--logs", st.logs, "losses.csv files (run.json next to each is used)")
      ->required();
  stab_cmd->add_option("--loss", st.loss, "Loss name")->capture_default_str();
  stab_cmd->add_option("--window", st.window, "Final window length (>= 2)")->capture_default_str();
  stab_cmd->add_option("--out", st.out, "Report JSON (a .csv companion is written beside it)")
      ->required();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "PSNR and cycle reconstruction error");
  eval_cmd->add_option("--ckpt", ev.ckpt, "Checkpoint file")->required();
  eval_cmd->add_option("--data", ev.data, "Dataset manifest.json")->required();
  eval_cmd->add_option("--out", ev.out, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*synth_cmd) return cmd_synth_data(synth);
    if (*train_cmd) return cmd_train(tr);
    if (*colorize_cmd) return cmd_colorize(col);
    if (*stab_cmd) return cmd_compare_stability(st);
    if (*eval_cmd) return cmd_eval(ev);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_usage_error(e) ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace chromacycle::cli
