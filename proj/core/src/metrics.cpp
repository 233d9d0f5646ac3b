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

#include "chromacycle/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "chromacycle/error.hpp"
#include "json.hpp"

namespace chromacycle {
namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

template <typename Key>
std::string argmin_or_tie(const std::vector<GroupStability>& groups, Key key) {
  const auto best = std::min_element(
      groups.begin(), groups.end(),
      [&](const GroupStability& a, const GroupStability& b) { return key(a) < key(b); });
  const auto ties = std::count_if(groups.begin(), groups.end(),
                                  [&](const GroupStability& g) { return key(g) == key(*best); });
  return ties > 1 ? "tie" : best->group;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Psnr psnr(const RgbImage& a, const RgbImage& b) {
  if (a.height != b.height || a.width != b.width) throw ShapeError("psnr: image sizes differ");
  validate(a);
  validate(b);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    sq += d * d;
  }
  if (sq == 0.0) return {true, 0.0};
  const double mse = sq / static_cast<double>(a.data.size());
  return {false, 10.0 * std::log10(1.0 / mse)};
}

double cycle_reconstruction_error(const Checkpoint& ck, const DatasetManifest& data) {
  require_use(ck, CheckpointUse::evaluate_cycle);
  std::vector<ManifestEntry> entries = data.select(Split::test, Domain::color);
  if (entries.empty() && data.select(Split::test).empty()) {
    entries = data.select(Split::train, Domain::color);
  }
  if (entries.empty()) throw InvalidArgument("no color images to evaluate");
  const PreparationSpec spec = ck.config.preparation(false);
  double sum = 0.0;
  for (const auto& e : entries) {
    const RgbImage img = prepare(load_image(data.resolve(e)), spec);
    SamplePair pair;
    pair.gray = derive_gray(img);
    pair.color_yuv = rgb_to_yuv(img);
    sum += cycle_loss_on_batch(ck, {pair});
  }
  return sum / static_cast<double>(entries.size());
}

StabilityReport stability_report(std::span<const LossLog> logs, const std::string& loss_name,
                                 int window) {
  if (window < 2) throw InvalidArgument("stability window must be >= 2");
  if (logs.empty()) throw InvalidArgument("stability report needs at least one log");
  StabilityReport report;
  report.loss_name = loss_name;
  report.window = window;
  for (const auto& log : logs) {
    const auto series = log.series(loss_name);
    if (series.size() < static_cast<std::size_t>(window)) {
      throw InvalidArgument("run '" + log.run_id + "' has " + std::to_string(series.size()) +
                            " rows of '" + loss_name + "', fewer than the window of " +
                            std::to_string(window));
    }
    const auto tail = std::span(series).last(static_cast<std::size_t>(window));
    double mean = 0.0;
    for (double v : tail) mean += v;
    mean /= window;
    double ss = 0.0;
    for (double v : tail) ss += (v - mean) * (v - mean);
    report.runs.push_back({log.run_id, log.regime, mean, ss / (window - 1), window});
  }

  std::map<std::string, std::vector<const RunStability*>> by_regime;
  for (const auto& r : report.runs) by_regime[r.regime].push_back(&r);
  std::vector<std::pair<std::string, std::vector<const RunStability*>>> grouping;
  if (by_regime.size() >= 2) {
    grouping.assign(by_regime.begin(), by_regime.end());
  } else {
    for (const auto& r : report.runs) grouping.push_back({r.run_id, {&r}});
  }
  for (const auto& [key, runs] : grouping) {
    std::vector<double> means;
    std::vector<double> vars;
    for (const auto* r : runs) {
      means.push_back(r->mean);
      vars.push_back(r->variance);
    }
    report.groups.push_back({key, median(means), median(vars), static_cast<int>(runs.size())});
  }
  report.lower_mean =
      argmin_or_tie(report.groups, [](const GroupStability& g) { return g.median_mean; });
  report.lower_variance =
      argmin_or_tie(report.groups, [](const GroupStability& g) { return g.median_variance; });

  if (by_regime.size() >= 2) {
    const auto find = [&](const std::string& name) -> const GroupStability* {
      for (const auto& g : report.groups) {
        if (g.group == name) return &g;
      }
      return nullptr;
    };
    const auto* cond = find(to_string(Regime::cond_cyclegan));
    const auto* orig = find(to_string(Regime::cyclegan));
    if (cond && orig) {
      report.conditional_lower_mean = cond->median_mean < orig->median_mean;
      report.conditional_lower_variance = cond->median_variance < orig->median_variance;
    }
  }
  return report;
}

std::string StabilityReport::to_json() const {
  using nlohmann::json;
  json j;
  j["loss_name"] = loss_name;
  j["window"] = window;
  j["runs"] = json::array();
  for (const auto& r : runs) {
    j["runs"].push_back({{"run_id", r.run_id},
                         {"regime", r.regime},
                         {"mean", r.mean},
                         {"variance", r.variance},
                         {"window", r.window}});
  }
  j["groups"] = json::array();
  for (const auto& g : groups) {
    j["groups"].push_back({{"group", g.group},
                           {"median_mean", g.median_mean},
                           {"median_variance", g.median_variance},
                           {"runs", g.runs}});
  }
  j["verdict"] = {{"lower_mean", lower_mean}, {"lower_variance", lower_variance}};
  if (conditional_lower_mean) {
    j["verdict"]["conditional_lower_mean"] = *conditional_lower_mean;
    j["verdict"]["conditional_lower_variance"] = *conditional_lower_variance;
  }
  return j.dump(2);
}

std::string StabilityReport::to_csv() const {
  std::string out = "run_id,regime,mean,variance,window\n";
  for (const auto& r : runs) {
    out += r.run_id + ',' + r.regime + ',' + fmt(r.mean) + ',' + fmt(r.variance) + ',' +
           std::to_string(r.window) + '\n';
  }
  return out;
}

}  // namespace chromacycle
