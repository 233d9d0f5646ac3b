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

#include "chromacycle/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chromacycle/error.hpp"

namespace chromacycle {
namespace {

// U = (B - Y) / (2 (1 - Kb)), V = (R - Y) / (2 (1 - Kr)).
constexpr double kUScale = 2.0 * (1.0 - kLumaB);
constexpr double kVScale = 2.0 * (1.0 - kLumaR);

void check_dims(int h, int w, const char* what) {
  if (h < 1 || w < 1) {
    throw ShapeError(std::string(what) + ": height and width must be >= 1");
  }
}

void check_plane(const std::vector<float>& plane, std::size_t expected, float lo, float hi,
                 const char* what) {
  if (plane.size() != expected) {
    throw ShapeError(std::string(what) + ": plane size does not match dimensions");
  }
  for (float v : plane) {
    if (!std::isfinite(v)) throw InvalidImage(std::string(what) + ": non-finite component");
    if (v < lo || v > hi) throw InvalidImage(std::string(what) + ": component out of range");
  }
}

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }
float clamp_chroma(double v) { return static_cast<float>(std::clamp(v, -0.5, 0.5)); }

struct Rgb {
  double r, g, b;
};

Rgb inverse(double y, double u, double v) {
  const double r = y + kVScale * v;
  const double b = y + kUScale * u;
  const double g = (y - kLumaR * r - kLumaB * b) / kLumaG;
  return {r, g, b};
}

}  // namespace

RgbImage::RgbImage(int h, int w, float fill) : height(h), width(w) {
  check_dims(h, w, "RgbImage");
  data.assign(static_cast<std::size_t>(h) * w * 3, fill);
}

RgbImage RgbImage::filled(int h, int w, float r, float g, float b) {
  RgbImage img(h, w);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    img.data[i * 3 + 0] = r;
    img.data[i * 3 + 1] = g;
    img.data[i * 3 + 2] = b;
  }
  return img;
}

YuvImage::YuvImage(int h, int w) : height(h), width(w) {
  check_dims(h, w, "YuvImage");
  const auto n = static_cast<std::size_t>(h) * w;
  y.assign(n, 0.0f);
  u.assign(n, 0.0f);
  v.assign(n, 0.0f);
}

GrayImage::GrayImage(int h, int w, float fill) : height(h), width(w) {
  check_dims(h, w, "GrayImage");
  y.assign(static_cast<std::size_t>(h) * w, fill);
}

ChromaImage::ChromaImage(int h, int w, float fill_u, float fill_v) : height(h), width(w) {
  check_dims(h, w, "ChromaImage");
  const auto n = static_cast<std::size_t>(h) * w;
  u.assign(n, fill_u);
  v.assign(n, fill_v);
}

void validate(const RgbImage& img) {
  check_dims(img.height, img.width, "RgbImage");
  check_plane(img.data, img.pixel_count() * 3, 0.0f, 1.0f, "RgbImage");
}

void validate(const YuvImage& img) {
  check_dims(img.height, img.width, "YuvImage");
  check_plane(img.y, img.pixel_count(), 0.0f, 1.0f, "YuvImage.y");
  check_plane(img.u, img.pixel_count(), -0.5f, 0.5f, "YuvImage.u");
  check_plane(img.v, img.pixel_count(), -0.5f, 0.5f, "YuvImage.v");
}

void validate(const GrayImage& img) {
  check_dims(img.height, img.width, "GrayImage");
  check_plane(img.y, img.pixel_count(), 0.0f, 1.0f, "GrayImage");
}

void validate(const ChromaImage& img) {
  check_dims(img.height, img.width, "ChromaImage");
  check_plane(img.u, img.pixel_count(), -0.5f, 0.5f, "ChromaImage.u");
  check_plane(img.v, img.pixel_count(), -0.5f, 0.5f, "ChromaImage.v");
}

YuvImage rgb_to_yuv(const RgbImage& img) {
  validate(img);
  YuvImage out(img.height, img.width);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double r = img.data[i * 3 + 0];
    const double g = img.data[i * 3 + 1];
    const double b = img.data[i * 3 + 2];
    const double y = kLumaR * r + kLumaG * g + kLumaB * b;
    out.y[i] = clamp01(y);
    out.u[i] = clamp_chroma((b - y) / kUScale);
    out.v[i] = clamp_chroma((r - y) / kVScale);
  }
  return out;
}

RgbImage yuv_to_rgb(const YuvImage& img) {
  validate(img);
  RgbImage out(img.height, img.width);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const Rgb p = inverse(img.y[i], img.u[i], img.v[i]);
    out.data[i * 3 + 0] = clamp01(p.r);
    out.data[i * 3 + 1] = clamp01(p.g);
    out.data[i * 3 + 2] = clamp01(p.b);
  }
  return out;
}

RgbImage yuv_to_rgb_preserving_luma(const YuvImage& img) {
  validate(img);
  RgbImage out(img.height, img.width);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double y = img.y[i];
    const Rgb p = inverse(y, img.u[i], img.v[i]);
    // Largest t in [0, 1] with y + t * (c - y) inside [0, 1] for every channel.
    // Every channel moves linearly towards y, so luma is unchanged.
    double t = 1.0;
    for (double c : {p.r, p.g, p.b}) {
      const double d = c - y;
      if (c > 1.0 && d > 0.0) t = std::min(t, (1.0 - y) / d);
      if (c < 0.0 && d < 0.0) t = std::min(t, y / -d);
    }
    out.data[i * 3 + 0] = clamp01(y + t * (p.r - y));
    out.data[i * 3 + 1] = clamp01(y + t * (p.g - y));
    out.data[i * 3 + 2] = clamp01(y + t * (p.b - y));
  }
  return out;
}

std::pair<GrayImage, ChromaImage> split_luma_chroma(const YuvImage& img) {
  validate(img);
  GrayImage g;
  g.height = img.height;
  g.width = img.width;
  g.y = img.y;
  ChromaImage c;
  c.height = img.height;
  c.width = img.width;
  c.u = img.u;
  c.v = img.v;
  return {std::move(g), std::move(c)};
}

YuvImage combine_luma_chroma(const GrayImage& g, const ChromaImage& c) {
  if (g.height != c.height || g.width != c.width) {
    throw ShapeError("combine_luma_chroma: gray is " + std::to_string(g.height) + "x" +
                     std::to_string(g.width) + " but chroma is " + std::to_string(c.height) +
                     "x" + std::to_string(c.width));
  }
  validate(g);
  validate(c);
  YuvImage out;
  out.height = g.height;
  out.width = g.width;
  out.y = g.y;
  out.u = c.u;
  out.v = c.v;
  return out;
}

GrayImage grayscale_of(const RgbImage& img) { return split_luma_chroma(rgb_to_yuv(img)).first; }

RgbImage gray_to_rgb(const GrayImage& g) {
  validate(g);
  RgbImage out(g.height, g.width);
  for (std::size_t i = 0; i < g.pixel_count(); ++i) {
    out.data[i * 3 + 0] = g.y[i];
    out.data[i * 3 + 1] = g.y[i];
    out.data[i * 3 + 2] = g.y[i];
  }
  return out;
}

}  // namespace chromacycle
