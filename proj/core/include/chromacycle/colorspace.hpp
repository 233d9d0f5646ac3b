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

#include <cstddef>
#include <utility>
#include <vector>

// RGB/YUV conversion (BT.601 full range, chroma centered at zero) and the
// luma/chroma channel surgery used throughout the pipeline.
namespace chromacycle {

/// Interleaved H×W×3 image, channel order R, G, B, components in [0, 1].
struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<float> data;

  RgbImage() = default;
  RgbImage(int h, int w, float fill = 0.0f);

  static RgbImage filled(int h, int w, float r, float g, float b);

  float& at(int y, int x, int ch) noexcept {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
  float at(int y, int x, int ch) const noexcept {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height) * width;
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Planar YUV image: y in [0, 1], u and v in [-0.5, 0.5].
struct YuvImage {
  int height = 0;
  int width = 0;
  std::vector<float> y;
  std::vector<float> u;
  std::vector<float> v;

  YuvImage() = default;
  YuvImage(int h, int w);

  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height) * width;
  }

  friend bool operator==(const YuvImage&, const YuvImage&) = default;
};

/// Luma plane only, values in [0, 1].
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<float> y;

  GrayImage() = default;
  GrayImage(int h, int w, float fill = 0.0f);

  float& at(int row, int col) noexcept {
    return y[static_cast<std::size_t>(row) * width + col];
  }
  float at(int row, int col) const noexcept {
    return y[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height) * width;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Chroma planes only, values in [-0.5, 0.5].
struct ChromaImage {
  int height = 0;
  int width = 0;
  std::vector<float> u;
  std::vector<float> v;

  ChromaImage() = default;
  ChromaImage(int h, int w, float fill_u = 0.0f, float fill_v = 0.0f);

  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height) * width;
  }

  friend bool operator==(const ChromaImage&, const ChromaImage&) = default;
};

// Invariant checks. Each throws InvalidImage on non-finite or out-of-range
// components and ShapeError on inconsistent dimensions.
void validate(const RgbImage& img);
void validate(const YuvImage& img);
void validate(const GrayImage& img);
void validate(const ChromaImage& img);

/// BT.601 luma weights. The chroma rows are scaled so U and V span [-0.5, 0.5].
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

YuvImage rgb_to_yuv(const RgbImage& img);

/// Exact inverse of rgb_to_yuv followed by a per-component clamp to [0, 1].
RgbImage yuv_to_rgb(const YuvImage& img);

/// Inverse transform that keeps Y intact for out-of-gamut pixels by pulling
/// chroma towards neutral until the pixel fits, instead of clamping channels.
RgbImage yuv_to_rgb_preserving_luma(const YuvImage& img);

std::pair<GrayImage, ChromaImage> split_luma_chroma(const YuvImage& img);

/// Throws ShapeError when the planes differ in size.
YuvImage combine_luma_chroma(const GrayImage& g, const ChromaImage& c);

GrayImage grayscale_of(const RgbImage& img);

/// Gray image rendered as RGB with R = G = B = Y.
RgbImage gray_to_rgb(const GrayImage& g);

}  // namespace chromacycle
