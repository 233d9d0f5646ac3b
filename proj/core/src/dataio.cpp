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

#include "chromacycle/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "chromacycle/error.hpp"
#include "fnv.hpp"

namespace chromacycle {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Split parse_split(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw FormatError("manifest: unknown split '" + s + "'");
}

Domain parse_domain(const std::string& s) {
  if (s == "color") return Domain::color;
  if (s == "gray") return Domain::gray;
  throw FormatError("manifest: unknown domain '" + s + "'");
}

}  // namespace

const char* to_string(Split split) noexcept { return split == Split::train ? "train" : "test"; }
const char* to_string(Domain domain) noexcept {
  return domain == Domain::color ? "color" : "gray";
}

fs::path DatasetManifest::resolve(const ManifestEntry& e) const {
  const fs::path p(e.path);
  return p.is_absolute() ? p : root / p;
}

std::vector<ManifestEntry> DatasetManifest::select(Split split) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [&](const ManifestEntry& e) { return e.split == split; });
  return out;
}

std::vector<ManifestEntry> DatasetManifest::select(Split split, Domain domain) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
               [&](const ManifestEntry& e) { return e.split == split && e.domain == domain; });
  return out;
}

DatasetManifest load_manifest(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw FileNotFound("manifest not found: " + path.string());
  std::ifstream in(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("manifest " + path.string() + ": " + e.what());
  }
  DatasetManifest m;
  try {
    m.root = doc.at("root").get<std::string>();
    for (const auto& item : doc.at("entries")) {
      ManifestEntry e;
      e.path = item.at("path").get<std::string>();
      e.split = parse_split(item.at("split").get<std::string>());
      e.domain = parse_domain(item.at("domain").get<std::string>());
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError("manifest " + path.string() + ": " + e.what());
  }
  // A relative root is taken relative to the manifest's own directory.
  if (m.root.is_relative()) m.root = path.parent_path() / m.root;

  std::set<std::string> train_paths;
  std::set<std::string> test_paths;
  for (const auto& e : m.entries) {
    const fs::path full = m.resolve(e);
    if (!fs::is_regular_file(full, ec)) {
      throw FileNotFound("manifest entry not found: " + full.string());
    }
    (e.split == Split::train ? train_paths : test_paths).insert(full.lexically_normal().string());
  }
  for (const auto& p : train_paths) {
    if (test_paths.count(p) != 0) {
      throw InvalidArgument("manifest lists " + p + " in both train and test splits");
    }
  }
  return m;
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  json doc;
  doc["root"] = manifest.root.string();
  doc["entries"] = json::array();
  for (const auto& e : manifest.entries) {
    doc["entries"].push_back(
        {{"path", e.path}, {"split", to_string(e.split)}, {"domain", to_string(e.domain)}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest " + path.string());
}

void PreparationSpec::validate() const {
  if (load_size < 1 || crop_size < 1) {
    throw InvalidArgument("preparation sizes must be >= 1");
  }
  if (crop_size > load_size) {
    throw InvalidArgument("crop_size must not exceed load_size");
  }
}

RgbImage resize_bilinear(const RgbImage& img, int out_h, int out_w) {
  validate(img);
  if (out_h < 1 || out_w < 1) throw InvalidArgument("resize target must be >= 1");
  if (out_h == img.height && out_w == img.width) return img;
  RgbImage out(out_h, out_w);
  const double sy = static_cast<double>(img.height) / out_h;
  const double sx = static_cast<double>(img.width) / out_w;
  for (int y = 0; y < out_h; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double wx = fx - x0;
      for (int ch = 0; ch < 3; ++ch) {
        const double top = (1 - wx) * img.at(y0, x0, ch) + wx * img.at(y0, x1, ch);
        const double bottom = (1 - wx) * img.at(y1, x0, ch) + wx * img.at(y1, x1, ch);
        out.at(y, x, ch) =
            static_cast<float>(std::clamp((1 - wy) * top + wy * bottom, 0.0, 1.0));
      }
    }
  }
  return out;
}

namespace {

RgbImage crop(const RgbImage& img, int top, int left, int size) {
  RgbImage out(size, size);
  for (int y = 0; y < size; ++y) {
    const float* src = &img.data[(static_cast<std::size_t>(top + y) * img.width + left) * 3];
    std::copy(src, src + static_cast<std::size_t>(size) * 3,
              &out.data[static_cast<std::size_t>(y) * size * 3]);
  }
  return out;
}

}  // namespace

RgbImage prepare(const RgbImage& img, const PreparationSpec& spec) {
  spec.validate();
  RgbImage resized = resize_bilinear(img, spec.load_size, spec.load_size);
  const int range = spec.load_size - spec.crop_size;
  switch (spec.mode) {
    case PrepareMode::resize_only:
      return resized;
    case PrepareMode::resize_then_center_crop:
      return crop(resized, range / 2, range / 2, spec.crop_size);
    case PrepareMode::resize_then_random_crop: {
      if (range == 0) return resized;
      std::mt19937_64 rng(spec.seed);
      std::uniform_int_distribution<int> offset(0, range);
      const int top = offset(rng);
      const int left = offset(rng);
      return crop(resized, top, left, spec.crop_size);
    }
  }
  return resized;
}

GrayImage derive_gray(const RgbImage& img) { return grayscale_of(img); }

YuvImage gray_as_yuv(const GrayImage& g) {
  return combine_luma_chroma(g, ChromaImage(g.height, g.width));
}

BatchSampler::BatchSampler(DatasetManifest manifest, PreparationSpec spec, std::uint64_t seed,
                           Split split)
    : manifest_(std::move(manifest)), spec_(spec), rng_(seed) {
  spec_.validate();
  color_pool_ = manifest_.select(split, Domain::color);
  gray_pool_ = manifest_.select(split, Domain::gray);
  if (color_pool_.empty()) {
    throw InvalidArgument(std::string("manifest has no color entries in the ") +
                          to_string(split) + " split");
  }
  if (gray_pool_.empty()) gray_pool_ = color_pool_;
}

const RgbImage& BatchSampler::decoded(const ManifestEntry& entry) {
  const std::string key = manifest_.resolve(entry).string();
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, load_image(key)).first;
  return it->second;
}

RgbImage BatchSampler::prepared(const ManifestEntry& entry) {
  PreparationSpec per_draw = spec_;
  per_draw.seed = rng_();
  return prepare(decoded(entry), per_draw);
}

std::vector<SamplePair> BatchSampler::next(int batch) {
  if (batch < 1) throw InvalidArgument("batch must be >= 1");
  std::uniform_int_distribution<std::size_t> pick_gray(0, gray_pool_.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_color(0, color_pool_.size() - 1);
  std::vector<SamplePair> out;
  out.reserve(static_cast<std::size_t>(batch));
  for (int i = 0; i < batch; ++i) {
    const ManifestEntry& g = gray_pool_[pick_gray(rng_)];
    const ManifestEntry& c = color_pool_[pick_color(rng_)];
    SamplePair pair;
    pair.gray = derive_gray(prepared(g));
    pair.color_yuv = rgb_to_yuv(prepared(c));
    pair.gray_source = manifest_.resolve(g).string();
    pair.color_source = manifest_.resolve(c).string();
    out.push_back(std::move(pair));
  }
  return out;
}

std::string BatchSampler::state_fingerprint() const {
  std::ostringstream os;
  os << rng_;
  detail::Fnv1a h;
  h.update(os.str());
  return h.hex();
}

std::vector<SamplePair> sample_unpaired_batch(const DatasetManifest& manifest,
                                              const PreparationSpec& spec, int batch,
                                              std::uint64_t rng_seed) {
  if (manifest.entries.empty()) throw InvalidArgument("manifest is empty");
  BatchSampler sampler(manifest, spec, rng_seed);
  return sampler.next(batch);
}

}  // namespace chromacycle
