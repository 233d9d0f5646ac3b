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

#include <algorithm>
#include <cmath>
#include <limits>

#include "chromacycle/colorspace.hpp"
#include "chromacycle/error.hpp"
#include "test_util.hpp"

namespace chromacycle {
namespace {

using testing::random_rgb;

// JFIF full-range BT.601 coefficients, written out independently of the
// library's derivation from Kr/Kb.
constexpr double kU[3] = {-0.168736, -0.331264, 0.5};
constexpr double kV[3] = {0.5, -0.418688, -0.081312};

TEST(Colorspace, BlackAndWhiteHaveZeroChroma) {
  const YuvImage black = rgb_to_yuv(RgbImage::filled(2, 3, 0, 0, 0));
  const YuvImage white = rgb_to_yuv(RgbImage::filled(2, 3, 1, 1, 1));
  for (std::size_t i = 0; i < black.pixel_count(); ++i) {
    EXPECT_EQ(black.y[i], 0.0f);
    EXPECT_EQ(black.u[i], 0.0f);
    EXPECT_EQ(black.v[i], 0.0f);
    EXPECT_NEAR(white.y[i], 1.0f, 1e-7);
    EXPECT_NEAR(white.u[i], 0.0f, 1e-7);
    EXPECT_NEAR(white.v[i], 0.0f, 1e-7);
  }
}

TEST(Colorspace, PureRedMatchesMatrix) {
  const YuvImage red = rgb_to_yuv(RgbImage::filled(1, 1, 1, 0, 0));
  EXPECT_NEAR(red.y[0], 0.299, 1e-6);
  EXPECT_NEAR(red.u[0], -0.1687, 1e-4);
  EXPECT_NEAR(red.u[0], kU[0], 1e-6);
  EXPECT_NEAR(red.v[0], 0.5, 1e-6);
}

TEST(Colorspace, RandomPixelsMatchJfifMatrix) {
  const RgbImage img = random_rgb(16, 16, 7);
  const YuvImage yuv = rgb_to_yuv(img);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double r = img.data[3 * i], g = img.data[3 * i + 1], b = img.data[3 * i + 2];
    EXPECT_NEAR(yuv.y[i], 0.299 * r + 0.587 * g + 0.114 * b, 1e-6);
    EXPECT_NEAR(yuv.u[i], kU[0] * r + kU[1] * g + kU[2] * b, 2e-6);
    EXPECT_NEAR(yuv.v[i], kV[0] * r + kV[1] * g + kV[2] * b, 2e-6);
  }
}

TEST(Colorspace, InverseOfZeroAndWhite) {
  YuvImage yuv(1, 2);
  yuv.y = {0.0f, 1.0f};
  const RgbImage rgb = yuv_to_rgb(yuv);
  for (int c = 0; c < 3; ++c) {
    EXPECT_NEAR(rgb.at(0, 0, c), 0.0f, 1e-7);
    EXPECT_NEAR(rgb.at(0, 1, c), 1.0f, 1e-7);
  }
}

TEST(Colorspace, RoundTripRandomPixels) {
  const RgbImage img = random_rgb(1, 1000, 11);
  const RgbImage back = yuv_to_rgb(rgb_to_yuv(img));
  double worst = 0.0;
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    worst = std::max(worst, static_cast<double>(std::abs(img.data[i] - back.data[i])));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Colorspace, InverseClampsOutOfGamut) {
  YuvImage yuv(1, 1);
  yuv.y = {0.9f};
  yuv.u = {0.5f};
  yuv.v = {0.5f};
  const RgbImage rgb = yuv_to_rgb(yuv);
  for (float v : rgb.data) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(Colorspace, SplitCombineIsExact) {
  const YuvImage yuv = rgb_to_yuv(random_rgb(5, 7, 3));
  const auto [g, c] = split_luma_chroma(yuv);
  EXPECT_EQ(g.y, yuv.y);
  EXPECT_EQ(c.u, yuv.u);
  EXPECT_EQ(c.v, yuv.v);
  EXPECT_EQ(combine_luma_chroma(g, c), yuv);
}

TEST(Colorspace, SplitConstantPlanes) {
  YuvImage yuv(3, 3);
  std::fill(yuv.y.begin(), yuv.y.end(), 0.5f);
  std::fill(yuv.u.begin(), yuv.u.end(), 0.1f);
  std::fill(yuv.v.begin(), yuv.v.end(), -0.1f);
  const auto [g, c] = split_luma_chroma(yuv);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(g.y[i], 0.5f);
    EXPECT_EQ(c.u[i], 0.1f);
    EXPECT_EQ(c.v[i], -0.1f);
  }
}

TEST(Colorspace, SplitKeepsEveryCoordinate) {
  YuvImage yuv(2, 2);
  yuv.y = {0.1f, 0.2f, 0.3f, 0.4f};
  yuv.u = {-0.4f, -0.2f, 0.2f, 0.4f};
  yuv.v = {0.05f, -0.05f, 0.15f, -0.15f};
  const auto [g, c] = split_luma_chroma(yuv);
  for (int r = 0; r < 2; ++r) {
    for (int col = 0; col < 2; ++col) {
      const std::size_t i = static_cast<std::size_t>(r) * 2 + col;
      EXPECT_EQ(g.at(r, col), yuv.y[i]);
      EXPECT_EQ(c.u[i], yuv.u[i]);
      EXPECT_EQ(c.v[i], yuv.v[i]);
    }
  }
}

TEST(Colorspace, CombineRejectsShapeMismatch) {
  EXPECT_THROW(combine_luma_chroma(GrayImage(4, 4), ChromaImage(2, 2)), ShapeError);
}

TEST(Colorspace, CombineHybridTakesLumaAndChromaFromEachSide) {
  const YuvImage a = rgb_to_yuv(random_rgb(4, 4, 1));
  const YuvImage b = rgb_to_yuv(random_rgb(4, 4, 2));
  const YuvImage h = combine_luma_chroma(split_luma_chroma(a).first, split_luma_chroma(b).second);
  EXPECT_EQ(h.y, a.y);
  EXPECT_EQ(h.u, b.u);
  EXPECT_EQ(h.v, b.v);
}

TEST(Colorspace, GrayscaleOfPrimaries) {
  EXPECT_EQ(grayscale_of(RgbImage::filled(2, 2, 0, 0, 0)).y, std::vector<float>(4, 0.0f));
  for (float v : grayscale_of(RgbImage::filled(2, 2, 1, 1, 1)).y) EXPECT_NEAR(v, 1.0f, 1e-7);
  for (float v : grayscale_of(RgbImage::filled(2, 2, 0, 1, 0)).y) EXPECT_NEAR(v, 0.587f, 1e-7);
}

TEST(Colorspace, GrayscaleEqualsLumaPlane) {
  const RgbImage img = random_rgb(6, 5, 9);
  EXPECT_EQ(grayscale_of(img).y, rgb_to_yuv(img).y);
}

TEST(Colorspace, RejectsNonFinite) {
  RgbImage img(1, 1);
  img.data[1] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(rgb_to_yuv(img), InvalidImage);
  YuvImage yuv(1, 1);
  yuv.u[0] = std::numeric_limits<float>::infinity();
  EXPECT_THROW(yuv_to_rgb(yuv), InvalidImage);
}

TEST(Colorspace, RejectsOutOfRange) {
  RgbImage img(1, 1);
  img.data[0] = 1.5f;
  EXPECT_THROW(rgb_to_yuv(img), InvalidImage);
}

TEST(ColorspaceProperty, GrayscaleIgnoresChromaPerturbation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> uv(-0.05f, 0.05f);
  // Mid-range luma keeps small chroma offsets in gamut.
  GrayImage g(8, 8);
  std::uniform_real_distribution<float> y(0.3f, 0.7f);
  for (auto& v : g.y) v = y(rng);
  ChromaImage c1(8, 8), c2(8, 8);
  for (std::size_t i = 0; i < 64; ++i) {
    c1.u[i] = uv(rng);
    c1.v[i] = uv(rng);
    c2.u[i] = uv(rng);
    c2.v[i] = uv(rng);
  }
  const GrayImage a = grayscale_of(yuv_to_rgb(combine_luma_chroma(g, c1)));
  const GrayImage b = grayscale_of(yuv_to_rgb(combine_luma_chroma(g, c2)));
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(a.y[i], b.y[i], 1e-4);
}

TEST(ColorspaceProperty, LumaScalesLinearly) {
  const RgbImage img = random_rgb(4, 4, 21);
  const YuvImage base = rgb_to_yuv(img);
  for (float s : {0.25f, 0.5f, 0.9f, 1.0f}) {
    RgbImage scaled = img;
    for (auto& v : scaled.data) v *= s;
    const YuvImage yuv = rgb_to_yuv(scaled);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(yuv.y[i], s * base.y[i], 1e-6);
  }
}

TEST(ColorspaceProperty, LumaPreservingInverseKeepsY) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<float> y(0.0f, 1.0f), uv(-0.5f, 0.5f);
  YuvImage yuv(1, 2000);
  for (std::size_t i = 0; i < yuv.pixel_count(); ++i) {
    yuv.y[i] = y(rng);
    yuv.u[i] = uv(rng);
    yuv.v[i] = uv(rng);
  }
  const RgbImage rgb = yuv_to_rgb_preserving_luma(yuv);
  const GrayImage back = grayscale_of(rgb);
  for (std::size_t i = 0; i < yuv.pixel_count(); ++i) EXPECT_NEAR(back.y[i], yuv.y[i], 1e-5);
  for (float v : rgb.data) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(ColorspaceProperty, LumaPreservingInverseMatchesPlainInverseInGamut) {
  const YuvImage yuv = rgb_to_yuv(random_rgb(8, 8, 4));
  const RgbImage a = yuv_to_rgb(yuv);
  const RgbImage b = yuv_to_rgb_preserving_luma(yuv);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_NEAR(a.data[i], b.data[i], 1e-6);
}

}  // namespace
}  // namespace chromacycle
