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

#include "iagf/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace iagf::field {

std::string_view to_string(FieldMode mode) {
  return mode == FieldMode::Passive ? "passive" : "active";
}

FieldMode mode_from_string(std::string_view s) {
  if (s == "passive") return FieldMode::Passive;
  if (s == "active") return FieldMode::Active;
  throw std::invalid_argument("unknown field mode '" + std::string(s) + "'");
}

FieldSpec FieldSpec::make(FieldMode mode, double d1, double d2, const Vec2& v_r) {
  if (!std::isfinite(d1) || d1 < 0.0) throw std::invalid_argument("d1 must be non-negative");
  if (!std::isfinite(d2) || d2 < 0.0) throw std::invalid_argument("d2 must be non-negative");
  const double n = v_r.norm();
  if (!std::isfinite(n) || n == 0.0) throw std::invalid_argument("v_r must be a nonzero vector");
  FieldSpec spec;
  spec.mode = mode;
  spec.d1 = d1;
  spec.d2 = std::min(d2, (1.0 - kD2Margin) * d1);
  spec.v_r = v_r / n;
  return spec;
}

double radial_length(const FieldSpec& spec, const Vec2& u) {
  if (!(std::abs(u.norm() - 1.0) <= 1e-6)) {
    throw std::invalid_argument("radial_length expects a unit direction");
  }
  const double along = u.dot(spec.v_r);
  return spec.mode == FieldMode::Passive ? spec.d1 - spec.d2 * along : spec.d1 + spec.d2 * along;
}

Vec2 passive_force(double d_h, const Vec2& v, const GuidanceGains& gains) {
  if (!(d_h >= 0.0)) throw std::invalid_argument("radial length must be non-negative");
  return -(gains.K_d * d_h) * v;
}

Vec2 active_force(double d_h, const Vec2& x_d, const Vec2& x, const GuidanceGains& gains) {
  if (!(d_h >= 0.0)) throw std::invalid_argument("radial length must be non-negative");
  return (gains.K_p * d_h) * (x_d - x);
}

std::vector<Vec2> field_boundary(const FieldSpec& spec, int n) {
  if (n < 8) throw std::invalid_argument("field_boundary needs at least 8 samples");
  std::vector<Vec2> points;
  points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
    const Vec2 u(std::cos(phi), std::sin(phi));
    points.emplace_back(radial_length(spec, u) * u);
  }
  return points;
}

}  // namespace iagf::field
