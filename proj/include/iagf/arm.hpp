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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "iagf/types.hpp"

namespace iagf::arm {

/// Joint angles in radians, stored unwrapped.
using JointConfig = Eigen::VectorXd;
/// Position Jacobian of a planar arm, 2×n (m/rad).
using Jacobian = Eigen::Matrix<double, 2, Eigen::Dynamic>;

/// Link lengths and base position of an n-link planar revolute arm.
class ArmGeometry {
 public:
  /// Throws std::invalid_argument for fewer than two links or a
  /// non-positive / non-finite link length.
  explicit ArmGeometry(std::vector<double> link_lengths, Vec2 base = Vec2::Zero());

  /// Two 0.4 m links rooted at the origin.
  static ArmGeometry default_two_link();

  int n_links() const { return static_cast<int>(link_lengths_.size()); }
  std::span<const double> link_lengths() const { return link_lengths_; }
  const Vec2& base() const { return base_; }
  /// Sum of link lengths.
  double reach() const;

 private:
  std::vector<double> link_lengths_;
  Vec2 base_;
};

struct IkOptions {
  double damping = 0.05;   // DLS λ
  double max_step = 0.02;  // per-call ‖dx‖ cap (m)
};

Vec2 forward_kinematics(const ArmGeometry& geom, const JointConfig& q);

/// Exact analytic Jacobian; column i is ∂p/∂q_i.
Jacobian jacobian(const ArmGeometry& geom, const JointConfig& q);

/// √det(J Jᵀ), evaluated as |det J| for two links and as the product of the
/// singular values otherwise.
double manipulability(const ArmGeometry& geom, const JointConfig& q);

/// One damped-least-squares step: q + Jᵀ(JJᵀ + λ²I)⁻¹ dx.
///
/// The joint increment is bounded by ‖dx‖/(2λ) for every configuration,
/// singular ones included. Throws std::invalid_argument when ‖dx‖ exceeds
/// `opts.max_step`, λ ≤ 0, or q has the wrong size.
JointConfig ik_step(const ArmGeometry& geom, const JointConfig& q, const Vec2& dx,
                    const IkOptions& opts = {});

/// Iterates ik_step from `seed` until FK reaches `target` within `tol`.
/// Used to place the shadow configuration at episode start.
JointConfig solve_ik(const ArmGeometry& geom, const Vec2& target, JointConfig seed,
                     double tol = 1e-10, int max_iterations = 2000, const IkOptions& opts = {});

/// Elbow-bent starting guess (all joints at +π/4 except the first).
JointConfig default_seed(const ArmGeometry& geom);

}  // namespace iagf::arm
