// Copyright 2026 The iagf-sim Authors.
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

#include <cmath>
#include <optional>

#include <Eigen/Dense>

namespace iagf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline bool all_finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

// Unit vector along v, or nullopt when ‖v‖ < min_norm.
inline std::optional<Vec2> direction_of(const Vec2& v, double min_norm) {
  const double n = v.norm();
  if (!(n >= min_norm) || n == 0.0) return std::nullopt;
  return Vec2(v / n);
}

// Scales v down so that ‖v‖ ≤ max_norm; direction is preserved.
inline Vec2 clamp_norm(const Vec2& v, double max_norm) {
  const double n = v.norm();
  if (n <= max_norm || n == 0.0) return v;
  return v * (max_norm / n);
}

}  // namespace iagf
