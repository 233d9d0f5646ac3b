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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace chromacycle {

/// Dense NCHW float tensor. Network weights reuse the same four axes
/// (conv weights are [out, in, kh, kw], biases [1, out, 1, 1]).
class Tensor {
 public:
  using Shape = std::array<int, 4>;

  Tensor() = default;
  Tensor(int n, int c, int h, int w, float fill = 0.0f);
  explicit Tensor(const Shape& shape, float fill = 0.0f)
      : Tensor(shape[0], shape[1], shape[2], shape[3], fill) {}

  int n() const noexcept { return shape_[0]; }
  int c() const noexcept { return shape_[1]; }
  int h() const noexcept { return shape_[2]; }
  int w() const noexcept { return shape_[3]; }
  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float* data() noexcept { return data_.data(); }
  const float* data() const noexcept { return data_.data(); }
  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }

  /// Pointer to the H×W plane of sample n, channel c.
  float* plane(int n, int c) noexcept {
    return data_.data() + (static_cast<std::size_t>(n) * shape_[1] + c) * plane_size();
  }
  const float* plane(int n, int c) const noexcept {
    return data_.data() + (static_cast<std::size_t>(n) * shape_[1] + c) * plane_size();
  }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(shape_[2]) * shape_[3];
  }

  float& at(int n, int c, int y, int x) noexcept {
    return plane(n, c)[static_cast<std::size_t>(y) * shape_[3] + x];
  }
  float at(int n, int c, int y, int x) const noexcept {
    return plane(n, c)[static_cast<std::size_t>(y) * shape_[3] + x];
  }

  void fill(float value) noexcept;
  bool all_finite() const noexcept;
  float max_abs() const noexcept;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_{0, 0, 0, 0};
  std::vector<float> data_;
};

/// Stacks two tensors along the channel axis. Throws ShapeError unless N, H, W agree.
Tensor concat_channels(const Tensor& a, const Tensor& b);

/// Channels [first, first + count) of `t`.
Tensor slice_channels(const Tensor& t, int first, int count);

/// Samples [first, first + count) of `t`.
Tensor slice_batch(const Tensor& t, int first, int count);

}  // namespace chromacycle
