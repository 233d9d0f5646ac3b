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

#include "chromacycle/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "chromacycle/error.hpp"

namespace chromacycle {

Tensor::Tensor(int n, int c, int h, int w, float fill) : shape_{n, c, h, w} {
  if (n < 0 || c < 0 || h < 0 || w < 0) {
    throw ShapeError("negative tensor dimension");
  }
  data_.assign(static_cast<std::size_t>(n) * c * h * w, fill);
}

void Tensor::fill(float value) noexcept { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

float Tensor::max_abs() const noexcept {
  float m = 0.0f;
  for (float v : data_) m = std::max(m, std::abs(v));
  return m;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w()) {
    throw ShapeError("concat_channels: N/H/W mismatch");
  }
  Tensor out(a.n(), a.c() + b.c(), a.h(), a.w());
  const std::size_t plane = a.plane_size();
  for (int n = 0; n < a.n(); ++n) {
    std::memcpy(out.plane(n, 0), a.plane(n, 0), sizeof(float) * plane * a.c());
    std::memcpy(out.plane(n, a.c()), b.plane(n, 0), sizeof(float) * plane * b.c());
  }
  return out;
}

Tensor slice_channels(const Tensor& t, int first, int count) {
  if (first < 0 || count < 0 || first + count > t.c()) {
    throw ShapeError("slice_channels: range out of bounds");
  }
  Tensor out(t.n(), count, t.h(), t.w());
  for (int n = 0; n < t.n(); ++n) {
    std::memcpy(out.plane(n, 0), t.plane(n, first), sizeof(float) * t.plane_size() * count);
  }
  return out;
}

Tensor slice_batch(const Tensor& t, int first, int count) {
  if (first < 0 || count < 0 || first + count > t.n()) {
    throw ShapeError("slice_batch: range out of bounds");
  }
  Tensor out(count, t.c(), t.h(), t.w());
  if (count > 0) {
    std::memcpy(out.data(), t.plane(first, 0), sizeof(float) * out.size());
  }
  return out;
}

}  // namespace chromacycle
