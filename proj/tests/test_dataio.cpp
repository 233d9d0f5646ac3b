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

#include <gtest/gtest.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chromacycle/colorspace.hpp"
#include "chromacycle/dataio.hpp"
#include "chromacycle/error.hpp"
#include "test_util.hpp"

namespace chromacycle {
namespace {

namespace fs = std::filesystem;
using testing::random_rgb;
using testing::TempDir;

// Minimal PNG encoder (8-bit RGB, filter 0) so decoding is checked against
// bytes this test controls.
void put_u32(std::string& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::string body = std::string(type, 4) + data;
  out += body;
  put_u32(out, static_cast<std::uint32_t>(
                   crc32(0, reinterpret_cast<const Bytef*>(body.data()), body.size())));
}

void write_png_bytes(const fs::path& path, int h, int w, const std::vector<std::uint8_t>& rgb) {
  std::string out = "\x89PNG\r\n\x1a\n";
  std::string ihdr;
  put_u32(ihdr, w);
  put_u32(ihdr, h);
  ihdr += std::string("\x08\x02\x00\x00\x00", 5);
  put_chunk(out, "IHDR", ihdr);
  std::string raw;
  for (int y = 0; y < h; ++y) {
    raw.push_back('\0');
    raw.append(reinterpret_cast<const char*>(rgb.data()) + static_cast<std::size_t>(y) * w * 3,
               static_cast<std::size_t>(w) * 3);
  }
  uLongf len = compressBound(raw.size());
  std::string z(len, '\0');
  compress(reinterpret_cast<Bytef*>(z.data()), &len, reinterpret_cast<const Bytef*>(raw.data()),
           raw.size());
  z.resize(len);
  put_chunk(out, "IDAT", z);
  put_chunk(out, "IEND", "");
  std::ofstream(path, std::ios::binary) << out;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(LoadImage, SingleWhitePixel) {
  TempDir dir;
  write_png_bytes(dir / "w.png", 1, 1, {255, 255, 255});
  const RgbImage img = load_image(dir / "w.png");
  ASSERT_EQ(img.height, 1);
  ASSERT_EQ(img.width, 1);
  EXPECT_EQ(img.data, std::vector<float>(3, 1.0f));
}

TEST(LoadImage, KnownBytesDivideBy255) {
  TempDir dir;
  const std::vector<std::uint8_t> bytes = {0, 1, 2, 50, 100, 150, 200, 250, 255, 7, 77, 177};
  write_png_bytes(dir / "k.png", 2, 2, bytes);
  const RgbImage img = load_image(dir / "k.png");
  ASSERT_EQ(img.data.size(), bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    EXPECT_FLOAT_EQ(img.data[i], bytes[i] / 255.0f);
  }
}

TEST(LoadImage, MissingAndCorruptAreDistinct) {
  TempDir dir;
  EXPECT_THROW(load_image(dir / "nope.png"), FileNotFound);
  std::ofstream(dir / "bad.png", std::ios::binary) << "\x89PNG\r\n\x1a\ngarbage";
  EXPECT_THROW(load_image(dir / "bad.png"), FormatError);
  std::ofstream(dir / "text.png") << "hello";
  EXPECT_THROW(load_image(dir / "text.png"), FormatError);
}

TEST(SaveImage, RoundTripWithinOneStep) {
  TempDir dir;
  const RgbImage img = random_rgb(8, 8, 3);
  save_image(img, dir / "r.png");
  const RgbImage back = load_image(dir / "r.png");
  ASSERT_EQ(back.height, 8);
  ASSERT_EQ(back.width, 8);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    EXPECT_LE(std::abs(img.data[i] - back.data[i]), 1.0f / 255.0f + 1e-7f);
  }
}

TEST(SaveImage, ZeroImage) {
  TempDir dir;
  save_image(RgbImage(3, 5), dir / "z.png");
  EXPECT_EQ(load_image(dir / "z.png").data, std::vector<float>(45, 0.0f));
}

TEST(SaveImage, MissingDirectoryIsIoError) {
  TempDir dir;
  EXPECT_THROW(save_image(RgbImage(2, 2), dir / "no" / "such" / "x.png"), IoError);
}

TEST(Prepare, ResizeOnly) {
  PreparationSpec spec{64, 64, PrepareMode::resize_only, 0};
  const RgbImage out = prepare(random_rgb(512, 512, 1), spec);
  EXPECT_EQ(out.height, 64);
  EXPECT_EQ(out.width, 64);
}

TEST(Prepare, RandomCropIsWindowOfResized) {
  const RgbImage img = random_rgb(300, 300, 2);
  PreparationSpec spec{286, 256, PrepareMode::resize_then_random_crop, 5};
  const RgbImage out = prepare(img, spec);
  ASSERT_EQ(out.height, 256);
  ASSERT_EQ(out.width, 256);
  const RgbImage resized = resize_bilinear(img, 286, 286);
  bool found = false;
  for (int oy = 0; oy <= 30 && !found; ++oy) {
    for (int ox = 0; ox <= 30 && !found; ++ox) {
      bool match = true;
      for (int y = 0; y < 256 && match; ++y) {
        for (int x = 0; x < 256 && match; ++x) {
          for (int c = 0; c < 3; ++c) {
            if (out.at(y, x, c) != resized.at(y + oy, x + ox, c)) {
              match = false;
              break;
            }
          }
        }
      }
      found = match;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Prepare, DegenerateCropEqualsResize) {
  const RgbImage img = random_rgb(40, 30, 3);
  PreparationSpec spec{32, 32, PrepareMode::resize_then_random_crop, 9};
  EXPECT_EQ(prepare(img, spec), resize_bilinear(img, 32, 32));
}

TEST(Prepare, RandomCropAlwaysCropSized) {
  const RgbImage img = random_rgb(50, 70, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PreparationSpec spec{48, 33, PrepareMode::resize_then_random_crop, seed};
    const RgbImage out = prepare(img, spec);
    EXPECT_EQ(out.height, 33);
    EXPECT_EQ(out.width, 33);
  }
}

TEST(Prepare, CenterCropIsDeterministicAndCentered) {
  const RgbImage img = random_rgb(20, 20, 5);
  PreparationSpec spec{20, 10, PrepareMode::resize_then_center_crop, 0};
  const RgbImage out = prepare(img, spec);
  for (int y = 0; y < 10; ++y) {
    for (int x = 0; x < 10; ++x) EXPECT_EQ(out.at(y, x, 1), img.at(y + 5, x + 5, 1));
  }
}

TEST(Prepare, InvalidSpec) {
  PreparationSpec spec{32, 64, PrepareMode::resize_then_random_crop, 0};
  EXPECT_THROW(spec.validate(), InvalidArgument);
  EXPECT_THROW(prepare(RgbImage(4, 4), spec), InvalidArgument);
  EXPECT_THROW((PreparationSpec{0, 0, PrepareMode::resize_only, 0}.validate()), InvalidArgument);
}

TEST(Resize, ConstantImageStaysConstant) {
  const RgbImage out = resize_bilinear(RgbImage::filled(7, 9, 0.2f, 0.4f, 0.6f), 13, 5);
  for (int y = 0; y < 13; ++y) {
    for (int x = 0; x < 5; ++x) {
      EXPECT_NEAR(out.at(y, x, 0), 0.2f, 1e-6);
      EXPECT_NEAR(out.at(y, x, 2), 0.6f, 1e-6);
    }
  }
}

TEST(Resize, HalvingAveragesPairs) {
  // Half-pixel centers: downscale by 2 samples exactly between source pixels.
  RgbImage img(1, 4);
  for (int x = 0; x < 4; ++x) {
    for (int c = 0; c < 3; ++c) img.at(0, x, c) = static_cast<float>(x) / 4.0f;
  }
  const RgbImage out = resize_bilinear(img, 1, 2);
  EXPECT_NEAR(out.at(0, 0, 0), 0.125f, 1e-6);
  EXPECT_NEAR(out.at(0, 1, 0), 0.625f, 1e-6);
}

TEST(DeriveGray, Examples) {
  for (float v : derive_gray(RgbImage::filled(2, 2, 1, 1, 1)).y) EXPECT_NEAR(v, 1.0f, 1e-7);
  for (float v : derive_gray(RgbImage::filled(2, 2, 0, 0, 1)).y) EXPECT_NEAR(v, 0.114f, 1e-7);
}

TEST(DeriveGray, EqualsLumaPlaneExactly) {
  const RgbImage img = random_rgb(9, 4, 6);
  EXPECT_EQ(derive_gray(img).y, rgb_to_yuv(img).y);
}

TEST(DeriveGray, IdempotentThroughRoundTrip) {
  const RgbImage img = random_rgb(9, 4, 7);
  const GrayImage g = derive_gray(img);
  const GrayImage again = derive_gray(yuv_to_rgb(rgb_to_yuv(img)));
  for (std::size_t i = 0; i < g.y.size(); ++i) EXPECT_NEAR(again.y[i], g.y[i], 1e-4);
  const YuvImage as_yuv = gray_as_yuv(g);
  EXPECT_EQ(as_yuv.u, std::vector<float>(g.y.size(), 0.0f));
  EXPECT_EQ(as_yuv.v, std::vector<float>(g.y.size(), 0.0f));
}

// ---- manifests and sampling -----------------------------------------------

DatasetManifest write_dataset(const fs::path& dir, int n, int size = 8) {
  DatasetManifest m;
  m.root = dir;
  for (int i = 0; i < n; ++i) {
    const std::string name = "img" + std::to_string(i) + ".png";
    RgbImage img = RgbImage::filled(size, size, i / static_cast<float>(n), 0.5f, 0.25f);
    save_image(img, dir / name);
    m.entries.push_back({name, Split::train, Domain::color});
  }
  return m;
}

TEST(Manifest, SaveLoadRoundTrip) {
  TempDir dir;
  DatasetManifest m = write_dataset(dir.path(), 3);
  m.entries[2].split = Split::test;
  m.root = ".";
  save_manifest(m, dir / "manifest.json");
  const DatasetManifest back = load_manifest(dir / "manifest.json");
  EXPECT_EQ(back.entries, m.entries);
  EXPECT_TRUE(fs::exists(back.resolve(back.entries[0])));
}

TEST(Manifest, MissingFileRejected) {
  TempDir dir;
  DatasetManifest m = write_dataset(dir.path(), 1);
  m.entries.push_back({"ghost.png", Split::train, Domain::color});
  save_manifest(m, dir / "manifest.json");
  EXPECT_THROW(load_manifest(dir / "manifest.json"), FileNotFound);
}

TEST(Manifest, OverlappingSplitsRejected) {
  TempDir dir;
  DatasetManifest m = write_dataset(dir.path(), 1);
  m.entries.push_back({m.entries[0].path, Split::test, Domain::color});
  save_manifest(m, dir / "manifest.json");
  EXPECT_THROW(load_manifest(dir / "manifest.json"), InvalidArgument);
}

TEST(Manifest, MalformedJson) {
  TempDir dir;
  std::ofstream(dir / "manifest.json") << "{\"root\": 3";
  EXPECT_THROW(load_manifest(dir / "manifest.json"), FormatError);
  std::ofstream(dir / "m2.json") << R"({"root": ".", "entries": [{"path": "a.png", "split": "val", "domain": "color"}]})";
  EXPECT_THROW(load_manifest(dir / "m2.json"), FormatError);
  EXPECT_THROW(load_manifest(dir / "absent.json"), FileNotFound);
}

TEST(Sampler, SingletonManifestPairsWithItself) {
  TempDir dir;
  const DatasetManifest m = write_dataset(dir.path(), 1);
  const auto batch = sample_unpaired_batch(m, {8, 8, PrepareMode::resize_only, 0}, 3, 1);
  ASSERT_EQ(batch.size(), 3u);
  for (const auto& p : batch) {
    EXPECT_EQ(p.gray_source, p.color_source);
    EXPECT_EQ(p.gray.height, 8);
    EXPECT_EQ(p.color_yuv.width, 8);
  }
}

TEST(Sampler, SameSeedSameBatches) {
  TempDir dir;
  const DatasetManifest m = write_dataset(dir.path(), 5);
  const PreparationSpec spec{10, 8, PrepareMode::resize_then_random_crop, 0};
  BatchSampler a(m, spec, 42), b(m, spec, 42);
  for (int i = 0; i < 5; ++i) {
    const auto x = a.next(2), y = b.next(2);
    for (std::size_t k = 0; k < x.size(); ++k) {
      EXPECT_EQ(x[k].gray, y[k].gray);
      EXPECT_EQ(x[k].color_yuv, y[k].color_yuv);
      EXPECT_EQ(x[k].color_source, y[k].color_source);
    }
    EXPECT_EQ(a.state_fingerprint(), b.state_fingerprint());
  }
}

TEST(Sampler, UniformOverSources) {
  TempDir dir;
  const DatasetManifest m = write_dataset(dir.path(), 10, 4);
  BatchSampler s(m, {4, 4, PrepareMode::resize_only, 0}, 3);
  std::map<std::string, int> color, gray;
  constexpr int kDraws = 5000;
  for (const auto& p : s.next(kDraws)) {
    ++color[p.color_source];
    ++gray[p.gray_source];
  }
  // Pearson chi-square, 9 degrees of freedom; 27.88 is the 0.1% critical value.
  auto chi2 = [&](std::map<std::string, int>& counts) {
    const double expected = kDraws / 10.0;
    double acc = 0.0;
    for (const auto& e : m.entries) {
      const double d = counts[m.resolve(e).string()] - expected;
      acc += d * d / expected;
    }
    return acc;
  };
  EXPECT_LT(chi2(color), 27.88);
  EXPECT_LT(chi2(gray), 27.88);
}

TEST(Sampler, GrayEntriesFormTheGrayPool) {
  TempDir dir;
  DatasetManifest m = write_dataset(dir.path(), 4, 4);
  m.entries[3].domain = Domain::gray;
  BatchSampler s(m, {4, 4, PrepareMode::resize_only, 0}, 1);
  EXPECT_EQ(s.color_pool_size(), 3u);
  EXPECT_EQ(s.gray_pool_size(), 1u);
  for (const auto& p : s.next(10)) EXPECT_EQ(p.gray_source, m.resolve(m.entries[3]).string());
}

TEST(Sampler, EmptyColorPoolRejected) {
  DatasetManifest m;
  m.root = ".";
  EXPECT_THROW(BatchSampler(m, {4, 4, PrepareMode::resize_only, 0}, 0), InvalidArgument);
}

// ---- synthetic data -------------------------------------------------------

TEST(Synthetic, DeterministicBytes) {
  TempDir a, b;
  const DatasetManifest ma = generate_synthetic_dataset(a.path(), 4, 64, 11);
  generate_synthetic_dataset(b.path(), 4, 64, 11);
  ASSERT_EQ(ma.entries.size(), 4u);
  for (const auto& e : ma.entries) {
    EXPECT_EQ(read_bytes(a / e.path), read_bytes(b / e.path));
  }
  EXPECT_EQ(read_bytes(a / "manifest.json"), read_bytes(b / "manifest.json"));
  EXPECT_NO_THROW(load_manifest(a / "manifest.json"));
}

TEST(Synthetic, SeedChangesContent) {
  TempDir a, b;
  generate_synthetic_dataset(a.path(), 1, 32, 1);
  generate_synthetic_dataset(b.path(), 1, 32, 2);
  EXPECT_NE(read_bytes(a / "synth_0000.png"), read_bytes(b / "synth_0000.png"));
}

TEST(Synthetic, EveryImageHasSeveralColors) {
  TempDir dir;
  const DatasetManifest m = generate_synthetic_dataset(dir.path(), 6, 32, 3);
  for (const auto& e : m.entries) {
    const RgbImage img = load_image(m.resolve(e));
    std::set<std::vector<float>> colors;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
      colors.insert({img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]});
    }
    EXPECT_GE(colors.size(), 2u) << e.path;
  }
}

TEST(Synthetic, RejectsBadArguments) {
  TempDir dir;
  EXPECT_THROW(generate_synthetic_dataset(dir.path(), 0, 32, 0), InvalidArgument);
}

}  // namespace
}  // namespace chromacycle
