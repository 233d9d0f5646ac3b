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
#include <optional>
#include <string>
#include <vector>

#include "chromacycle/colorspace.hpp"
#include "chromacycle/dataio.hpp"
#include "chromacycle/models.hpp"
#include "chromacycle/training.hpp"

namespace chromacycle {

struct ColorizationResult {
  RgbImage output;
  GrayImage source;
  std::string checkpoint_id;
  Regime regime = Regime::cond_cyclegan;
};

/// Test-time colorizer: only the gray-to-color generator is used.
///
/// cond-cyclegan predicts UV from Y and recombines it with the input Y;
/// wgan/gan do the same with a seeded noise vector; the unconditional
/// cyclegan emits RGB directly and no luma recombination happens. Inputs
/// whose size is not a multiple of the generator's downsampling factor are
/// reflect-padded and cropped back. When recombined chroma falls outside the
/// RGB gamut it is desaturated towards gray rather than clamped per channel,
/// so the output luma equals the input luma.
class Colorizer {
 public:
  explicit Colorizer(Checkpoint checkpoint);

  /// `noise_seed` is accepted only for the wgan/gan regimes (default 0);
  /// passing one for a cycle regime throws InvalidArgument.
  ColorizationResult colorize(const GrayImage& g,
                              std::optional<std::uint64_t> noise_seed = std::nullopt) const;

  const Checkpoint& checkpoint() const noexcept { return ck_; }

 private:
  Checkpoint ck_;
  std::string id_;
  Generator gen_;
};

ColorizationResult colorize(const Checkpoint& ck, const GrayImage& g,
                            std::optional<std::uint64_t> noise_seed = std::nullopt);

struct ColorizeFailure {
  std::string path;
  std::string reason;
};

struct ColorizeSummary {
  int count = 0;
  std::vector<ColorizeFailure> failures;
  std::vector<std::filesystem::path> outputs;
};

/// Colorizes every regular file of in_dir (sorted by name) into
/// out_dir/<stem>.png, each prepared with `spec` first when one is given.
/// Unreadable files are reported in the summary.
/// Throws FileNotFound for a missing in_dir and IoError when out_dir cannot
/// be created or written.
ColorizeSummary colorize_directory(const Checkpoint& ck, const std::filesystem::path& in_dir,
                                   const std::filesystem::path& out_dir,
                                   const std::optional<PreparationSpec>& spec,
                                   std::optional<std::uint64_t> noise_seed = std::nullopt);

}  // namespace chromacycle
