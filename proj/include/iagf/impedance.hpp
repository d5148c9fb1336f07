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

#include "iagf/arm.hpp"
#include "iagf/types.hpp"

namespace iagf::impedance {

/// Inertia, stiffness and damping of the Cartesian impedance law.
struct ImpedanceParams {
  Mat2 M = Mat2::Identity() * 2.0;    // kg
  Mat2 K = Mat2::Identity() * 150.0;  // N/m
  Mat2 D = Mat2::Identity() * 25.0;   // N·s/m

  /// Checks symmetry, M ≻ 0, K ⪰ 0, D ⪰ 0 and every eigenvalue ≤ max_eigenvalue.
  /// Throws std::invalid_argument on violation.
  void validate(double max_eigenvalue = 1e6) const;
};

struct RobotState {
  Vec2 x = Vec2::Zero();
  Vec2 v = Vec2::Zero();
  arm::JointConfig q;  // shadow of x, follows through ik_step
  double t = 0.0;
};

struct DesiredCommand {
  Vec2 x_d = Vec2::Zero();
  Vec2 v_d = Vec2::Zero();
};

struct StepOptions {
  double v_max = 0.5;  // m/s
  arm::IkOptions ik;
};

inline constexpr double kMaxDt = 0.02;

/// M⁻¹(K(x_d − x) + D(v_d − v) + f_c). Throws std::invalid_argument for a
/// non-finite f_c.
Vec2 impedance_accel(const RobotState& state, const DesiredCommand& des, const Vec2& f_c,
                     const ImpedanceParams& p);

/// Clamps speed to v_max without changing direction.
Vec2 clamp_velocity(const Vec2& v, double v_max);

/// Semi-implicit Euler step of the impedance law; the shadow configuration
/// follows the new position through one damped-least-squares step on the
/// task-space tracking error.
RobotState step(const RobotState& state, const DesiredCommand& des, const Vec2& f_c,
                const ImpedanceParams& p, double dt, const arm::ArmGeometry& geom,
                const StepOptions& opts = {});

/// ½vᵀMv + ½eᵀKe with e = x_d − x.
double energy(const RobotState& state, const Vec2& x_d, const ImpedanceParams& p);

}  // namespace iagf::impedance
