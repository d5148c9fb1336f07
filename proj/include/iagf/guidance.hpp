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

#include <optional>
#include <string>
#include <vector>

#include "iagf/field.hpp"
#include "iagf/impedance.hpp"
#include "iagf/types.hpp"

namespace iagf::guidance {

using field::FieldMode;
using field::FieldSpec;
using field::GuidanceGains;

/// Intent-aware field parameters.
struct IntGFConfig {
  double c_th = 0.4;
  double d1 = 2.0;
  /// Width of a confidence band around c_th inside which the previous mode
  /// is kept. 0 switches exactly at c_th.
  double hysteresis = 0.0;

  void validate() const;
};

/// Singularity-aware field parameters (manipulability thresholds).
struct SinGFConfig {
  double m_th = 0.08;
  double m_crit = 0.03;
  double d1 = 2.0;

  void validate() const;
};

/// A field that contributed to the tick's guidance force.
struct ActiveField {
  std::string label;  // IntGF-D, IntGF-S, SinGF-D, SinGF-S
  FieldSpec spec;
  double d_h = 0.0;  // radial length along the human direction
};

struct GuidanceOutput {
  Vec2 f_c = Vec2::Zero();
  double d_h = 0.0;  // radial length actually applied (fused when both fields act)
  std::vector<ActiveField> active_fields;
};

// Intent-aware field --------------------------------------------------------

/// Piecewise d2 schedule, rising with C on each side of c_th.
double intgf_d2(double confidence, const IntGFConfig& cfg);

/// Passive (IntGF-D) below c_th, Active (IntGF-S) at or above it.
FieldSpec intgf_spec(double confidence, const Vec2& v_rI, const IntGFConfig& cfg);

/// Same as intgf_spec but applies the hysteresis band around c_th relative
/// to the previous tick's mode.
FieldSpec intgf_spec(double confidence, const Vec2& v_rI, const IntGFConfig& cfg,
                     std::optional<FieldMode> previous_mode);

// Singularity-aware field ---------------------------------------------------

/// sign(Δm)·Δx/‖Δx‖, or nullopt when the displacement (< 1e−6 m) or the
/// manipulability change (< 1e−9) is too small to define a direction.
std::optional<Vec2> singf_direction(double m_k, double m_km1, const Vec2& x_k,
                                    const Vec2& x_km1);

double singf_d2(double m, const SinGFConfig& cfg);

/// nullopt when m > m_th or no direction is known; Passive (SinGF-D) for
/// m_crit < m ≤ m_th; Active (SinGF-S) for m ≤ m_crit.
std::optional<FieldSpec> singf_spec(double m, const std::optional<Vec2>& v_rS,
                                    const SinGFConfig& cfg);

/// Keeps the previous sample of (m, x) and the last well-defined v_rS.
class SingularityDirectionTracker {
 public:
  /// Feeds the current sample and returns the direction to use this tick:
  /// the fresh one when defined, otherwise the last known one.
  std::optional<Vec2> update(double m, const Vec2& x);
  const std::optional<Vec2>& direction() const { return direction_; }

 private:
  std::optional<double> m_prev_;
  std::optional<Vec2> x_prev_;
  std::optional<Vec2> direction_;
};

// Hybrid --------------------------------------------------------------------

/// (a^α + b^α)^{1/α}, evaluated in a scaled form that stays finite for large α.
double fuse_homogeneous(double d_hI, double d_hS, double alpha);

/// Combines the intent field and the optional singularity field into one
/// force. Same-mode fields are fused with fuse_homogeneous; with mixed modes
/// only the Active field acts. Zero force when the human direction is
/// undefined. The result is clamped to ‖f_c‖ ≤ force_clamp.
GuidanceOutput compute_guidance(const std::optional<Vec2>& v_h, const FieldSpec& int_spec,
                                const std::optional<FieldSpec>& sing_spec, double alpha,
                                const impedance::RobotState& state, const Vec2& x_d,
                                const GuidanceGains& gains, double force_clamp = 30.0);

}  // namespace iagf::guidance
