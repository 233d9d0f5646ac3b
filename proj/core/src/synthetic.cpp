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

#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "chromacycle/dataio.hpp"
#include "chromacycle/error.hpp"

namespace chromacycle {
namespace {

namespace fs = std::filesystem;

struct Color {
  float r, g, b;
};

// Saturated flat fills in the spirit of comic coloring.
constexpr std::array<Color, 12> kPalette = {{
    {0.92f, 0.22f, 0.20f},
    {0.98f, 0.78f, 0.15f},
    {0.20f, 0.55f, 0.90f},
    {0.25f, 0.75f, 0.35f},
    {0.60f, 0.30f, 0.75f},
    {0.98f, 0.55f, 0.10f},
    {0.95f, 0.80f, 0.65f},
    {0.10f, 0.70f, 0.70f},
    {0.85f, 0.40f, 0.60f},
    {0.55f, 0.35f, 0.20f},
    {0.70f, 0.85f, 0.95f},
    {0.96f, 0.94f, 0.85f},
}};

constexpr Color kInk = {0.08f, 0.08f, 0.10f};

enum class Shape { rect, disc, triangle };

struct Primitive {
  Shape shape;
  double cx, cy, rx, ry;
  Color fill;
};

// Signed "inside" measure: <= 1 inside the primitive, grows outside.
double extent(const Primitive& p, double x, double y) {
  const double dx = (x - p.cx) / p.rx;
  const double dy = (y - p.cy) / p.ry;
  switch (p.shape) {
    case Shape::rect:
      return std::max(std::abs(dx), std::abs(dy));
    case Shape::disc:
      return std::sqrt(dx * dx + dy * dy);
    case Shape::triangle:
      // Apex up: |dx| <= (dy + 1) / 2 for dy in [-1, 1].
      return std::max({std::abs(dy), 2.0 * std::abs(dx) - dy});
  }
  return 2.0;
}

void paint(RgbImage& img, int y, int x, const Color& c) {
  img.at(y, x, 0) = c.r;
  img.at(y, x, 1) = c.g;
  img.at(y, x, 2) = c.b;
}

RgbImage render(int size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, kPalette.size() - 1);
  std::uniform_int_distribution<int> count(2, 4);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t bg_index = pick(rng);
  const Color bg = kPalette[bg_index];
  RgbImage img = RgbImage::filled(size, size, bg.r, bg.g, bg.b);

  const int n = count(rng);
  std::vector<Primitive> shapes;
  for (int i = 0; i < n; ++i) {
    std::size_t fill = pick(rng);
    if (fill == bg_index) fill = (fill + 1 + i) % kPalette.size();
    if (fill == bg_index) fill = (fill + 1) % kPalette.size();
    Primitive p;
    p.shape = static_cast<Shape>(kind(rng));
    p.cx = size * (0.2 + 0.6 * unit(rng));
    p.cy = size * (0.2 + 0.6 * unit(rng));
    p.rx = size * (0.12 + 0.18 * unit(rng));
    p.ry = size * (0.12 + 0.18 * unit(rng));
    p.fill = kPalette[fill];
    shapes.push_back(p);
  }

  // Outline width in "extent" units, roughly one pixel at this scale.
  for (const auto& p : shapes) {
    const double ink = 1.5 / std::min(p.rx, p.ry);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double e = extent(p, x + 0.5, y + 0.5);
        if (e <= 1.0 - ink) {
          paint(img, y, x, p.fill);
        } else if (e <= 1.0) {
          paint(img, y, x, kInk);
        }
      }
    }
  }
  return img;
}

}  // namespace

DatasetManifest generate_synthetic_dataset(const fs::path& out_dir, int n, int size,
                                           std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("synthetic dataset needs n >= 1");
  if (size < 4) throw InvalidArgument("synthetic dataset needs size >= 4");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw IoError("cannot create dataset directory " + out_dir.string());
  }
  std::mt19937_64 rng(seed);
  DatasetManifest manifest;
  manifest.root = out_dir;
  for (int i = 0; i < n; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%04d.png", i);
    save_image(render(size, rng), out_dir / name);
    manifest.entries.push_back({name, Split::train, Domain::color});
  }
  // Stored relative so the dataset directory can be moved as a unit.
  DatasetManifest on_disk = manifest;
  on_disk.root = ".";
  save_manifest(on_disk, out_dir / "manifest.json");
  return manifest;
}

}  // namespace chromacycle
