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

#include "chromacycle/inference.hpp"

#include <algorithm>

#include "chromacycle/error.hpp"

namespace chromacycle {
namespace {

namespace fs = std::filesystem;

int mirror(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i <= n - 1 ? i : period - i;
}

GrayImage reflect_pad(const GrayImage& g, int h, int w) {
  if (h == g.height && w == g.width) return g;
  GrayImage out(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out.at(y, x) = g.at(mirror(y, g.height), mirror(x, g.width));
  }
  return out;
}

int round_up(int v, int m) { return (v + m - 1) / m * m; }

Tensor crop_tensor(const Tensor& t, int h, int w) {
  if (t.h() == h && t.w() == w) return t;
  Tensor out(t.n(), t.c(), h, w);
  for (int n = 0; n < t.n(); ++n) {
    for (int c = 0; c < t.c(); ++c) {
      for (int y = 0; y < h; ++y) {
        std::copy_n(t.plane(n, c) + static_cast<std::size_t>(y) * t.w(), w,
                    out.plane(n, c) + static_cast<std::size_t>(y) * w);
      }
    }
  }
  return out;
}

}  // namespace

Colorizer::Colorizer(Checkpoint checkpoint)
    : ck_(std::move(checkpoint)),
      gen_(network_specs(ck_.config)
               .generators.at(is_cycle(ck_.config.regime) ? "gen_g2c" : "generator")) {
  require_use(ck_, CheckpointUse::colorize);
  ck_.validate();
  id_ = ck_.id();
}

ColorizationResult Colorizer::colorize(const GrayImage& g,
                                       std::optional<std::uint64_t> noise_seed) const {
  validate(g);
  const Regime regime = ck_.config.regime;
  if (noise_seed && is_cycle(regime)) {
    throw InvalidArgument(std::string("regime ") + to_string(regime) +
                          " has no noise input; a noise seed is not accepted");
  }
  const int m = gen_.config().size_multiple();
  const GrayImage padded = reflect_pad(g, round_up(g.height, m), round_up(g.width, m));
  const ParameterSet& params = ck_.network(is_cycle(regime) ? "gen_g2c" : "generator");

  Tensor x;
  if (regime == Regime::cyclegan) {
    x = to_tensor_replicated(std::span(&padded, 1));
  } else if (regime == Regime::cond_cyclegan) {
    x = to_tensor(std::span(&padded, 1));
  } else {
    const NoiseVector z = NoiseVector::sample(gen_.config().noise_dim, noise_seed.value_or(0));
    x = concat_channels(to_tensor(std::span(&padded, 1)),
                        noise_planes(std::span(&z, 1), padded.height, padded.width));
  }
  const Tensor out = crop_tensor(gen_.forward(params, x, nullptr), g.height, g.width);

  ColorizationResult result;
  result.source = g;
  result.checkpoint_id = id_;
  result.regime = regime;
  if (regime == Regime::cyclegan) {
    result.output = rgb_from_tensor(out, 0);
  } else {
    result.output = yuv_to_rgb_preserving_luma(combine_luma_chroma(g, chroma_from_tensor(out, 0)));
  }
  return result;
}

ColorizationResult colorize(const Checkpoint& ck, const GrayImage& g,
                            std::optional<std::uint64_t> noise_seed) {
  return Colorizer(ck).colorize(g, noise_seed);
}

ColorizeSummary colorize_directory(const Checkpoint& ck, const fs::path& in_dir,
                                   const fs::path& out_dir,
                                   const std::optional<PreparationSpec>& spec,
                                   std::optional<std::uint64_t> noise_seed) {
  std::error_code ec;
  if (!fs::is_directory(in_dir, ec)) throw FileNotFound("input directory not found: " + in_dir.string());
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create output directory " + out_dir.string());
  }
  if (spec) spec->validate();
  const Colorizer colorizer(ck);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  ColorizeSummary summary;
  for (const auto& file : files) {
    RgbImage img;
    try {
      img = load_image(file);
    } catch (const Error& e) {
      summary.failures.push_back({file.string(), e.what()});
      continue;
    }
    const GrayImage gray = derive_gray(spec ? prepare(img, *spec) : img);
    const fs::path target = out_dir / (file.stem().string() + ".png");
    save_image(colorizer.colorize(gray, noise_seed).output, target);
    summary.outputs.push_back(target);
    ++summary.count;
  }
  return summary;
}

}  // namespace chromacycle
