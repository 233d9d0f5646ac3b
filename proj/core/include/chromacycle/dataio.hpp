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
#include <map>
#include <random>
#include <string>
#include <vector>

#include "chromacycle/colorspace.hpp"

namespace chromacycle {

enum class Split { train, test };
enum class Domain { color, gray };

const char* to_string(Split split) noexcept;
const char* to_string(Domain domain) noexcept;

struct ManifestEntry {
  std::string path;  // relative to the manifest root unless absolute
  Split split = Split::train;
  Domain domain = Domain::color;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Declarative listing of dataset images. On disk this is `manifest.json`:
/// { "root": str, "entries": [ { "path": str, "split": "train"|"test",
///   "domain": "color"|"gray" } ] }
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const ManifestEntry& e) const;
  std::vector<ManifestEntry> select(Split split) const;
  std::vector<ManifestEntry> select(Split split, Domain domain) const;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Parses and checks a manifest: every file must exist and no path may be
/// listed in both splits. Throws FileNotFound, FormatError or InvalidArgument.
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Decodes PNG (8-bit gray/RGB/RGBA, 16-bit is reduced) or JPEG. The format is
/// sniffed from the file header. Throws FileNotFound or FormatError.
RgbImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG (components rounded to nearest byte). Throws IoError.
void save_image(const RgbImage& img, const std::filesystem::path& path);

enum class PrepareMode { resize_only, resize_then_random_crop, resize_then_center_crop };

struct PreparationSpec {
  int load_size = 64;
  int crop_size = 64;
  PrepareMode mode = PrepareMode::resize_only;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Bilinear resize (half-pixel centers) to exactly out_h × out_w.
RgbImage resize_bilinear(const RgbImage& img, int out_h, int out_w);

/// Resize to load_size², then crop according to the mode. resize_only yields
/// load_size²; the crop modes yield crop_size².
RgbImage prepare(const RgbImage& img, const PreparationSpec& spec);

/// Luma plane; the chroma of a grayscale sample is taken to be zero.
GrayImage derive_gray(const RgbImage& img);

/// Full YUV image for a grayscale sample (Y plus zero chroma).
YuvImage gray_as_yuv(const GrayImage& g);

struct SamplePair {
  GrayImage gray;
  YuvImage color_yuv;
  std::string gray_source;
  std::string color_source;
};

/// Draws unpaired (gray, color) samples from one split of a manifest.
///
/// The color pool is the split's color entries. The gray pool is the split's
/// gray entries, or the color entries when the split has none; gray samples
/// are always reduced with derive_gray. Both indices are drawn independently
/// and uniformly. Decoded files are cached, so one sampler instance must be
/// driven by one thread.
class BatchSampler {
 public:
  BatchSampler(DatasetManifest manifest, PreparationSpec spec, std::uint64_t seed,
               Split split = Split::train);

  std::vector<SamplePair> next(int batch);

  std::size_t color_pool_size() const noexcept { return color_pool_.size(); }
  std::size_t gray_pool_size() const noexcept { return gray_pool_.size(); }

  /// Hash of the generator state; changes whenever a draw happens.
  std::string state_fingerprint() const;

 private:
  const RgbImage& decoded(const ManifestEntry& entry);
  RgbImage prepared(const ManifestEntry& entry);

  DatasetManifest manifest_;
  PreparationSpec spec_;
  std::mt19937_64 rng_;
  std::vector<ManifestEntry> color_pool_;
  std::vector<ManifestEntry> gray_pool_;
  std::map<std::string, RgbImage> cache_;
};

/// One batch from a freshly seeded sampler over the train split.
std::vector<SamplePair> sample_unpaired_batch(const DatasetManifest& manifest,
                                              const PreparationSpec& spec, int batch,
                                              std::uint64_t rng_seed);

/// Writes n comic-like images (flat-colored shapes with dark outlines on a
/// flat background) plus `manifest.json` into out_dir. All entries are
/// train/color. Deterministic under `seed`.
DatasetManifest generate_synthetic_dataset(const std::filesystem::path& out_dir, int n,
                                           int size, std::uint64_t seed);

}  // namespace chromacycle
