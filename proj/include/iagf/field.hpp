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

#include <string_view>
#include <vector>

#include "iagf/types.hpp"

namespace iagf::field {

enum class FieldMode { Passive, Active };

std::string_view to_string(FieldMode mode);
/// Accepts "passive" / "active"; throws std::invalid_argument otherwise.
FieldMode mode_from_string(std::string_view s);

/// Margin keeping d2 strictly below d1.
inline constexpr double kD2Margin = 0.02;

/// One anisotropic guidance field. Construct through make() so the
/// invariants hold: 0 ≤ d2 ≤ (1 − kD2Margin)·d1 and ‖v_r‖ = 1.
struct FieldSpec {
  FieldMode mode = FieldMode::Passive;
  double d1 = 0.0;
  double d2 = 0.0;
  Vec2 v_r = Vec2::UnitX();

  /// Clamps d2 into [0, (1 − kD2Margin)·d1] and normalizes v_r. Throws
  /// std::invalid_argument for negative or non-finite d1/d2 or a zero v_r.
  static FieldSpec make(FieldMode mode, double d1, double d2, const Vec2& v_r);
};

struct GuidanceGains {
  double K_p = 80.0;  // N/m per unit radial length
  double K_d = 10.0;  // N·s/m per unit radial length
};

/// d(u) = d1 ∓ d2·uᵀv_r (minus for Passive, plus for Active).
/// Throws std::invalid_argument when |‖u‖ − 1| > 1e−6.
double radial_length(const FieldSpec& spec, const Vec2& u);

/// −K_d·d_h·v; never injects energy (forceᵀv ≤ 0).
Vec2 passive_force(double d_h, const Vec2& v, const GuidanceGains& gains);

/// K_p·d_h·(x_d − x).
Vec2 active_force(double d_h, const Vec2& x_d, const Vec2& x, const GuidanceGains& gains);

/// n ≥ 8 boundary points d(φ_i)·u(φ_i), φ_i = −π + 2πi/n, relative to the
/// field centre.
std::vector<Vec2> field_boundary(const FieldSpec& spec, int n);

}  // namespace iagf::field
