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

#include "iagf/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iagf::guidance {

void IntGFConfig::validate() const {
  if (!(c_th > 0.0 && c_th < 1.0)) throw std::invalid_argument("C_th must lie in (0, 1)");
  if (!(d1 >= 0.0) || !std::isfinite(d1)) throw std::invalid_argument("IntGF d1 must be >= 0");
  if (!(hysteresis >= 0.0) || hysteresis >= 2.0 * std::min(c_th, 1.0 - c_th)) {
    throw std::invalid_argument("IntGF hysteresis band must fit inside (0, 1)");
  }
}

void SinGFConfig::validate() const {
  if (!(m_crit > 0.0 && m_th > m_crit) || !std::isfinite(m_th)) {
    throw std::invalid_argument("SinGF thresholds need m_th > m_crit > 0");
  }
  if (!(d1 >= 0.0) || !std::isfinite(d1)) throw std::invalid_argument("SinGF d1 must be >= 0");
}

namespace {

double clamp_d2(double d2, double d1) {
  return std::clamp(d2, 0.0, (1.0 - field::kD2Margin) * d1);
}

double intgf_lower_branch(double c, const IntGFConfig& cfg) { return cfg.d1 / cfg.c_th * c; }

double intgf_upper_branch(double c, const IntGFConfig& cfg) {
  return cfg.d1 * (c - cfg.c_th) / (1.0 - cfg.c_th);
}

std::string intent_label(FieldMode mode) {
  return mode == FieldMode::Passive ? "IntGF-D" : "IntGF-S";
}

std::string singular_label(FieldMode mode) {
  return mode == FieldMode::Passive ? "SinGF-D" : "SinGF-S";
}

Vec2 mode_force(FieldMode mode, double d_h, const impedance::RobotState& state, const Vec2& x_d,
                const GuidanceGains& gains) {
  return mode == FieldMode::Passive ? field::passive_force(d_h, state.v, gains)
                                    : field::active_force(d_h, x_d, state.x, gains);
}

}  // namespace

double intgf_d2(double confidence, const IntGFConfig& cfg) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("confidence must lie in [0, 1]");
  }
  const double d2 = confidence < cfg.c_th ? intgf_lower_branch(confidence, cfg)
                                          : intgf_upper_branch(confidence, cfg);
  return clamp_d2(d2, cfg.d1);
}

FieldSpec intgf_spec(double confidence, const Vec2& v_rI, const IntGFConfig& cfg) {
  const FieldMode mode = confidence < cfg.c_th ? FieldMode::Passive : FieldMode::Active;
  return FieldSpec::make(mode, cfg.d1, intgf_d2(confidence, cfg), v_rI);
}

FieldSpec intgf_spec(double confidence, const Vec2& v_rI, const IntGFConfig& cfg,
                     std::optional<FieldMode> previous_mode) {
  if (cfg.hysteresis <= 0.0 || !previous_mode) return intgf_spec(confidence, v_rI, cfg);
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw std::invalid_argument("confidence must lie in [0, 1]");
  }
  const double half = 0.5 * cfg.hysteresis;
  FieldMode mode = *previous_mode;
  if (mode == FieldMode::Passive && confidence >= cfg.c_th + half) mode = FieldMode::Active;
  if (mode == FieldMode::Active && confidence < cfg.c_th - half) mode = FieldMode::Passive;
  // Inside the band the schedule follows the branch of the mode being held.
  const double d2 = mode == FieldMode::Passive
                        ? intgf_lower_branch(confidence, cfg)
                        : std::max(0.0, intgf_upper_branch(confidence, cfg));
  return FieldSpec::make(mode, cfg.d1, clamp_d2(d2, cfg.d1), v_rI);
}

std::optional<Vec2> singf_direction(double m_k, double m_km1, const Vec2& x_k,
                                    const Vec2& x_km1) {
  const Vec2 dx = x_k - x_km1;
  const double norm = dx.norm();
  const double dm = m_k - m_km1;
  if (!(norm >= 1e-6) || !(std::abs(dm) >= 1e-9)) return std::nullopt;
  return Vec2((dm > 0.0 ? 1.0 : -1.0) * dx / norm);
}

double singf_d2(double m, const SinGFConfig& cfg) {
  if (!(m >= 0.0)) throw std::invalid_argument("manipulability must be non-negative");
  double d2 = 0.0;
  if (m > cfg.m_th) {
    d2 = 0.0;
  } else if (m >= cfg.m_crit) {
    d2 = cfg.d1 * (cfg.m_th - m) / (cfg.m_th - cfg.m_crit);
  } else {
    d2 = cfg.d1 * (cfg.m_crit - m) / cfg.m_crit;
  }
  return clamp_d2(d2, cfg.d1);
}

std::optional<FieldSpec> singf_spec(double m, const std::optional<Vec2>& v_rS,
                                    const SinGFConfig& cfg) {
  if (m > cfg.m_th || !v_rS) return std::nullopt;
  const FieldMode mode = m > cfg.m_crit ? FieldMode::Passive : FieldMode::Active;
  return FieldSpec::make(mode, cfg.d1, singf_d2(m, cfg), *v_rS);
}

std::optional<Vec2> SingularityDirectionTracker::update(double m, const Vec2& x) {
  if (m_prev_ && x_prev_) {
    if (auto fresh = singf_direction(m, *m_prev_, x, *x_prev_)) direction_ = fresh;
  }
  m_prev_ = m;
  x_prev_ = x;
  return direction_;
}

double fuse_homogeneous(double d_hI, double d_hS, double alpha) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("fusion exponent must be >= 1");
  if (!(d_hI >= 0.0) || !(d_hS >= 0.0)) {
    throw std::invalid_argument("radial lengths must be non-negative");
  }
  const double hi = std::max(d_hI, d_hS);
  const double lo = std::min(d_hI, d_hS);
  if (hi == 0.0) return 0.0;
  return hi * std::pow(1.0 + std::pow(lo / hi, alpha), 1.0 / alpha);
}

GuidanceOutput compute_guidance(const std::optional<Vec2>& v_h, const FieldSpec& int_spec,
                                const std::optional<FieldSpec>& sing_spec, double alpha,
                                const impedance::RobotState& state, const Vec2& x_d,
                                const GuidanceGains& gains, double force_clamp) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("fusion exponent must be >= 1");
  GuidanceOutput out;
  if (!v_h) return out;

  const double d_hI = field::radial_length(int_spec, *v_h);
  const ActiveField intent{intent_label(int_spec.mode), int_spec, d_hI};

  FieldMode mode = int_spec.mode;
  if (!sing_spec) {
    out.d_h = d_hI;
    out.active_fields.push_back(intent);
  } else {
    const double d_hS = field::radial_length(*sing_spec, *v_h);
    const ActiveField singular{singular_label(sing_spec->mode), *sing_spec, d_hS};
    if (sing_spec->mode == int_spec.mode) {
      out.d_h = fuse_homogeneous(d_hI, d_hS, alpha);
      out.active_fields = {intent, singular};
    } else if (int_spec.mode == FieldMode::Active) {
      out.d_h = d_hI;
      out.active_fields = {intent};
    } else {
      mode = FieldMode::Active;
      out.d_h = d_hS;
      out.active_fields = {singular};
    }
  }

  out.f_c = mode_force(mode, out.d_h, state, x_d, gains);
  if (!all_finite(out.f_c)) throw std::runtime_error("guidance force is not finite");
  out.f_c = clamp_norm(out.f_c, force_clamp);
  return out;
}

}  // namespace iagf::guidance
