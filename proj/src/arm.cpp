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

#include "iagf/arm.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace iagf::arm {

ArmGeometry::ArmGeometry(std::vector<double> link_lengths, Vec2 base)
    : link_lengths_(std::move(link_lengths)), base_(std::move(base)) {
  if (link_lengths_.size() < 2) {
    throw std::invalid_argument("arm needs at least two links, got " +
                                std::to_string(link_lengths_.size()));
  }
  for (double l : link_lengths_) {
    if (!std::isfinite(l) || l <= 0.0) {
      throw std::invalid_argument("link lengths must be positive and finite");
    }
  }
  if (!all_finite(base_)) throw std::invalid_argument("arm base must be finite");
}

ArmGeometry ArmGeometry::default_two_link() { return ArmGeometry({0.4, 0.4}); }

double ArmGeometry::reach() const {
  return std::accumulate(link_lengths_.begin(), link_lengths_.end(), 0.0);
}

namespace {

void check_size(const ArmGeometry& geom, const JointConfig& q) {
  if (q.size() != geom.n_links()) {
    throw std::invalid_argument("joint vector has " + std::to_string(q.size()) +
                                " entries for a " + std::to_string(geom.n_links()) +
                                "-link arm");
  }
}

}  // namespace

Vec2 forward_kinematics(const ArmGeometry& geom, const JointConfig& q) {
  check_size(geom, q);
  Vec2 p = geom.base();
  double angle = 0.0;
  const auto lengths = geom.link_lengths();
  for (int i = 0; i < geom.n_links(); ++i) {
    angle += q(i);
    p += lengths[i] * Vec2(std::cos(angle), std::sin(angle));
  }
  return p;
}

Jacobian jacobian(const ArmGeometry& geom, const JointConfig& q) {
  check_size(geom, q);
  const int n = geom.n_links();
  const auto lengths = geom.link_lengths();

  // Link i contributes l_i·[-sin θ_i, cos θ_i] to every column j ≤ i, where
  // θ_i is the cumulative angle; accumulate from the tip inwards.
  Jacobian J(2, n);
  std::vector<double> theta(n);
  double angle = 0.0;
  for (int i = 0; i < n; ++i) {
    angle += q(i);
    theta[i] = angle;
  }
  Vec2 tail = Vec2::Zero();
  for (int i = n - 1; i >= 0; --i) {
    tail += lengths[i] * Vec2(-std::sin(theta[i]), std::cos(theta[i]));
    J.col(i) = tail;
  }
  return J;
}

double manipulability(const ArmGeometry& geom, const JointConfig& q) {
  const Jacobian J = jacobian(geom, q);
  if (J.cols() == 2) return std::abs(J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& sv = svd.singularValues();
  return sv(0) * sv(1);
}

JointConfig ik_step(const ArmGeometry& geom, const JointConfig& q, const Vec2& dx,
                    const IkOptions& opts) {
  check_size(geom, q);
  if (!(opts.damping > 0.0)) throw std::invalid_argument("DLS damping must be positive");
  if (!all_finite(dx)) throw std::invalid_argument("ik_step displacement is not finite");
  if (dx.norm() > opts.max_step * (1.0 + 1e-12)) {
    throw std::invalid_argument("ik_step displacement exceeds the per-call cap");
  }
  if (dx.isZero(0.0)) return q;

  const Jacobian J = jacobian(geom, q);
  const Mat2 JJt = J * J.transpose() + opts.damping * opts.damping * Mat2::Identity();
  // JJᵀ + λ²I is symmetric positive definite for λ > 0.
  const Vec2 y = JJt.llt().solve(dx);
  return q + J.transpose() * y;
}

JointConfig default_seed(const ArmGeometry& geom) {
  JointConfig q = JointConfig::Constant(geom.n_links(), std::numbers::pi / 4.0);
  q(0) = 0.0;
  return q;
}

JointConfig solve_ik(const ArmGeometry& geom, const Vec2& target, JointConfig seed, double tol,
                     int max_iterations, const IkOptions& opts) {
  JointConfig q = std::move(seed);
  check_size(geom, q);
  for (int it = 0; it < max_iterations; ++it) {
    const Vec2 err = target - forward_kinematics(geom, q);
    if (err.norm() <= tol) return q;
    q = ik_step(geom, q, clamp_norm(err, opts.max_step), opts);
  }
  const double residual = (target - forward_kinematics(geom, q)).norm();
  if (residual > 1e3 * tol) {
    throw std::runtime_error("solve_ik did not converge (residual " + std::to_string(residual) +
                             " m); target may be out of reach");
  }
  return q;
}

}  // namespace iagf::arm
