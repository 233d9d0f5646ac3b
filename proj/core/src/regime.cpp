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

#include "chromacycle/regime.hpp"

namespace chromacycle {

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::wgan:
      return "wgan";
    case Regime::gan:
      return "gan";
    case Regime::cyclegan:
      return "cyclegan";
    case Regime::cond_cyclegan:
      return "cond-cyclegan";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(std::string_view name) noexcept {
  if (name == "wgan") return Regime::wgan;
  if (name == "gan") return Regime::gan;
  if (name == "cyclegan") return Regime::cyclegan;
  if (name == "cond-cyclegan" || name == "cond_cyclegan") return Regime::cond_cyclegan;
  return std::nullopt;
}

}  // namespace chromacycle
