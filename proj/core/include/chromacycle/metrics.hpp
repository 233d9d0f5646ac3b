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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chromacycle/colorspace.hpp"
#include "chromacycle/dataio.hpp"
#include "chromacycle/training.hpp"

namespace chromacycle {

/// PSNR in dB with peak 1 over all RGB components. Identical images have no
/// finite PSNR and are reported through `identical`.
struct Psnr {
  bool identical = false;
  double db = 0.0;
};

/// Throws ShapeError on mismatched sizes.
Psnr psnr(const RgbImage& a, const RgbImage& b);

/// Mean cycle-consistency loss over the test split (the train split when the
/// manifest has no test entries), one (gray, color) pair per color image,
/// center-crop preparation. Throws RegimeMismatch for baseline checkpoints.
double cycle_reconstruction_error(const Checkpoint& ck, const DatasetManifest& data);

struct RunStability {
  std::string run_id;
  std::string regime;
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n - 1)
  int window = 0;
};

struct GroupStability {
  std::string group;
  double median_mean = 0.0;
  double median_variance = 0.0;
  int runs = 0;
};

/// Final-window statistics of one loss across runs.
///
/// Runs are grouped by regime; when fewer than two regimes are present each
/// run forms its own group. The verdict names the group with the lowest
/// median, or "tie" when the minimum is shared.
struct StabilityReport {
  std::string loss_name;
  int window = 0;
  std::vector<RunStability> runs;
  std::vector<GroupStability> groups;
  std::string lower_mean;
  std::string lower_variance;
  // Set when both "cond-cyclegan" and "cyclegan" runs are present.
  std::optional<bool> conditional_lower_mean;
  std::optional<bool> conditional_lower_variance;

  std::string to_json() const;
  /// "run_id,regime,mean,variance,window" rows for plotting.
  std::string to_csv() const;
};

/// Throws InvalidArgument when window < 2, no logs are given, or a log has
/// fewer than `window` rows of `loss_name`.
StabilityReport stability_report(std::span<const LossLog> logs, const std::string& loss_name,
                                 int window);

}  // namespace chromacycle
