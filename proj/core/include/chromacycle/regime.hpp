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

#include <optional>
#include <string>
#include <string_view>

namespace chromacycle {

/// The four training regimes: WGAN baseline, plain GAN variant, the
/// unconditional CycleGAN, and the conditional (Y <-> UV) CycleGAN.
enum class Regime { wgan, gan, cyclegan, cond_cyclegan };

/// Canonical names: "wgan", "gan", "cyclegan", "cond-cyclegan".
const char* to_string(Regime regime) noexcept;

/// Accepts the canonical names and "cond_cyclegan".
std::optional<Regime> parse_regime(std::string_view name) noexcept;

inline bool is_cycle(Regime r) noexcept {
  return r == Regime::cyclegan || r == Regime::cond_cyclegan;
}
inline bool is_baseline(Regime r) noexcept { return !is_cycle(r); }

}  // namespace chromacycle
