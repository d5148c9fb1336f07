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

#include "iagf/impedance.hpp"

#include <stdexcept>
#include <string>

namespace iagf::impedance {

namespace {

void check_matrix(const Mat2& A, const char* name, bool strictly_positive, double max_eig) {
  if (!A.allFinite()) throw std::invalid_argument(std::string(name) + " is not finite");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(std::string(name) + " must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(A);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (strictly_positive ? !(lo > 0.0) : !(lo >= 0.0)) {
    throw std::invalid_argument(std::string(name) +
                                (strictly_positive ? " must be positive definite"
                                                   : " must be positive semidefinite"));
  }
  if (hi > max_eig) {
    throw std::invalid_argument(std::string(name) + " eigenvalue exceeds configured bound");
  }
}

void check_state(const RobotState& s) {
  if (!all_finite(s.x) || !all_finite(s.v) || !s.q.allFinite() || !std::isfinite(s.t)) {
    throw std::invalid_argument("robot state is not finite");
  }
}

}  // namespace

void ImpedanceParams::validate(double max_eigenvalue) const {
  check_matrix(M, "M", true, max_eigenvalue);
  check_matrix(K, "K", false, max_eigenvalue);
  check_matrix(D, "D", false, max_eigenvalue);
}

Vec2 impedance_accel(const RobotState& state, const DesiredCommand& des, const Vec2& f_c,
                     const ImpedanceParams& p) {
  if (!all_finite(f_c)) throw std::invalid_argument("guidance force is not finite");
  const Vec2 wrench = p.K * (des.x_d - state.x) + p.D * (des.v_d - state.v) + f_c;
  return p.M.llt().solve(wrench);
}

Vec2 clamp_velocity(const Vec2& v, double v_max) { return clamp_norm(v, v_max); }

RobotState step(const RobotState& state, const DesiredCommand& des, const Vec2& f_c,
                const ImpedanceParams& p, double dt, const arm::ArmGeometry& geom,
                const StepOptions& opts) {
  if (!(dt > 0.0 && dt <= kMaxDt)) {
    throw std::invalid_argument("dt must lie in (0, " + std::to_string(kMaxDt) + "] s");
  }
  check_state(state);
  if (!all_finite(des.x_d) || !all_finite(des.v_d)) {
    throw std::invalid_argument("desired command is not finite");
  }

  const Vec2 a = impedance_accel(state, des, f_c, p);
  RobotState next;
  next.v = clamp_velocity(state.v + a * dt, opts.v_max);
  next.x = state.x + next.v * dt;
  next.t = state.t + dt;

  const Vec2 tracking = next.x - arm::forward_kinematics(geom, state.q);
  next.q = arm::ik_step(geom, state.q, clamp_norm(tracking, opts.ik.max_step), opts.ik);
  return next;
}

double energy(const RobotState& state, const Vec2& x_d, const ImpedanceParams& p) {
  const Vec2 e = x_d - state.x;
  return 0.5 * state.v.dot(p.M * state.v) + 0.5 * e.dot(p.K * e);
}

}  // namespace iagf::impedance
