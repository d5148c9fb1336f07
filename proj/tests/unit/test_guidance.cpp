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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "iagf/guidance.hpp"
#include "../support/oracles.hpp"

using namespace iagf;
using namespace iagf::guidance;

namespace {

constexpr double kPi = std::numbers::pi;

impedance::RobotState moving_state(const Vec2& x, const Vec2& v) {
  impedance::RobotState s;
  s.x = x;
  s.v = v;
  s.q = arm::JointConfig::Zero(2);
  return s;
}

SinGFConfig unit_singf() {
  SinGFConfig c;
  c.m_th = 0.3;
  c.m_crit = 0.1;
  c.d1 = 2.0;
  return c;
}

}  // namespace

TEST_SUITE("guidance") {

TEST_CASE("config validation") {
  CHECK_NOTHROW(IntGFConfig{}.validate());
  CHECK_NOTHROW(SinGFConfig{}.validate());
  IntGFConfig i;
  i.c_th = 1.0;
  CHECK_THROWS_AS(i.validate(), std::invalid_argument);
  i.c_th = 0.4;
  i.hysteresis = 0.9;
  CHECK_THROWS_AS(i.validate(), std::invalid_argument);
  SinGFConfig s;
  s.m_crit = 0.09;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.m_crit = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("intgf_d2 examples") {
  IntGFConfig c;  // C_th 0.4, d1 2
  CHECK(intgf_d2(0.0, c) == 0.0);
  CHECK(intgf_d2(0.4, c) == 0.0);
  CHECK(intgf_d2(0.2, c) == doctest::Approx(1.0));
  CHECK(intgf_d2(1.0, c) == doctest::Approx(1.96));
  CHECK(intgf_d2(0.7, c) == doctest::Approx(1.0));
  CHECK_THROWS_AS(intgf_d2(-0.1, c), std::invalid_argument);
  CHECK_THROWS_AS(intgf_d2(1.1, c), std::invalid_argument);
}

TEST_CASE("intgf_d2 matches the piecewise formula and is branch-wise monotone") {
  IntGFConfig c;
  double prev = -1.0;
  bool upper = false;
  for (int i = 0; i <= 1000; ++i) {
    const double C = i / 1000.0;
    const double d2 = intgf_d2(C, c);
    CHECK(std::abs(d2 - oracle::intgf_d2(C, c.c_th, c.d1)) <= 1e-12);
    if (!upper && C >= c.c_th) {
      upper = true;
      prev = -1.0;  // the schedule restarts at the threshold
    }
    CHECK(d2 >= prev);
    prev = d2;
  }
}

TEST_CASE("intgf_spec modes") {
  IntGFConfig c;
  const Vec2 v = oracle::unit(0.3);
  CHECK(intgf_spec(0.1, v, c).mode == FieldMode::Passive);
  CHECK(intgf_spec(0.9, v, c).mode == FieldMode::Active);
  CHECK(intgf_spec(0.4, v, c).mode == FieldMode::Active);
  const auto zero = intgf_spec(0.0, v, c);
  CHECK(zero.mode == FieldMode::Passive);
  CHECK(zero.d2 == 0.0);
  const auto s = intgf_spec(0.9, v, c);
  CHECK(s.d2 == doctest::Approx(intgf_d2(0.9, c)));
  CHECK((s.v_r - v).norm() < 1e-12);
  CHECK(s.d1 == c.d1);
}

TEST_CASE("intgf hysteresis holds the previous mode inside the band") {
  IntGFConfig c;
  c.hysteresis = 0.1;
  const Vec2 v = Vec2::UnitX();
  CHECK(intgf_spec(0.42, v, c, FieldMode::Passive).mode == FieldMode::Passive);
  CHECK(intgf_spec(0.46, v, c, FieldMode::Passive).mode == FieldMode::Active);
  CHECK(intgf_spec(0.38, v, c, FieldMode::Active).mode == FieldMode::Active);
  CHECK(intgf_spec(0.34, v, c, FieldMode::Active).mode == FieldMode::Passive);
  CHECK(intgf_spec(0.38, v, c, FieldMode::Active).d2 == 0.0);
  CHECK(intgf_spec(0.42, v, c, FieldMode::Passive).d2 == doctest::Approx(1.96));
  CHECK(intgf_spec(0.42, v, c, std::nullopt).mode == FieldMode::Active);
  c.hysteresis = 0.0;
  CHECK(intgf_spec(0.42, v, c, FieldMode::Passive).mode == FieldMode::Active);
}

TEST_CASE("singf_direction examples") {
  const auto up = singf_direction(0.2, 0.1, Vec2(1.0, 0.0), Vec2(0.0, 0.0));
  REQUIRE(up);
  CHECK((*up - Vec2(1.0, 0.0)).norm() < 1e-15);
  const auto down = singf_direction(0.1, 0.2, Vec2(0.5, 0.0), Vec2(0.0, 0.0));
  REQUIRE(down);
  CHECK((*down - Vec2(-1.0, 0.0)).norm() < 1e-15);
  CHECK_FALSE(singf_direction(0.2, 0.1, Vec2(0.3, 0.3), Vec2(0.3, 0.3)));
  CHECK_FALSE(singf_direction(0.2, 0.2, Vec2(1.0, 0.0), Vec2(0.0, 0.0)));
  CHECK_FALSE(singf_direction(0.2, 0.1, Vec2(5e-7, 0.0), Vec2(0.0, 0.0)));
}

TEST_CASE("singularity tracker reuses the last defined direction") {
  SingularityDirectionTracker t;
  CHECK_FALSE(t.update(0.1, Vec2(0.0, 0.0)));
  const auto d = t.update(0.12, Vec2(0.0, 0.01));
  REQUIRE(d);
  CHECK((*d - Vec2(0.0, 1.0)).norm() < 1e-12);
  const auto held = t.update(0.12, Vec2(0.0, 0.01));
  REQUIRE(held);
  CHECK((*held - Vec2(0.0, 1.0)).norm() < 1e-12);
  const auto flipped = t.update(0.11, Vec2(0.01, 0.01));
  REQUIRE(flipped);
  CHECK((*flipped - Vec2(-1.0, 0.0)).norm() < 1e-12);
}

TEST_CASE("singf_d2 examples") {
  const auto c = unit_singf();
  CHECK(singf_d2(0.3, c) == 0.0);
  CHECK(singf_d2(0.5, c) == 0.0);
  CHECK(singf_d2(0.2, c) == doctest::Approx(1.0));
  CHECK(singf_d2(0.0, c) == doctest::Approx(1.96));  // d1 before the clamp
  CHECK_THROWS_AS(singf_d2(-0.01, c), std::invalid_argument);
}

TEST_CASE("singf_d2 matches the piecewise formula and is branch-wise monotone") {
  const SinGFConfig c;  // arm-scaled defaults
  for (int i = 0; i <= 1000; ++i) {
    const double m = 0.16 * i / 1000.0;
    CHECK(std::abs(singf_d2(m, c) - oracle::singf_d2(m, c.m_th, c.m_crit, c.d1)) <= 1e-12);
  }
  for (double m = 0.0; m + 1e-4 < c.m_crit; m += 1e-4) CHECK(singf_d2(m + 1e-4, c) <= singf_d2(m, c));
  for (double m = c.m_crit; m + 1e-4 <= c.m_th; m += 1e-4) CHECK(singf_d2(m + 1e-4, c) <= singf_d2(m, c));
  for (double m = c.m_th + 1e-6; m < 0.2; m += 1e-3) CHECK(singf_d2(m, c) == 0.0);
}

TEST_CASE("singf_spec regimes") {
  const auto c = unit_singf();
  const Vec2 v = Vec2::UnitY();
  CHECK_FALSE(singf_spec(0.5, v, c));
  const auto passive = singf_spec(0.2, v, c);
  REQUIRE(passive);
  CHECK(passive->mode == FieldMode::Passive);
  const auto active = singf_spec(0.05, v, c);
  REQUIRE(active);
  CHECK(active->mode == FieldMode::Active);
  CHECK(active->d2 == doctest::Approx(singf_d2(0.05, c)));
  CHECK(singf_spec(0.1, v, c)->mode == FieldMode::Active);
  CHECK_FALSE(singf_spec(0.2, std::nullopt, c));
}

TEST_CASE("moving toward the singularity meets maximum resistance in the damping regime") {
  const auto c = unit_singf();
  const Vec2 v_rS = oracle::unit(0.8);
  const auto spec = singf_spec(0.2, v_rS, c);
  REQUIRE(spec);
  CHECK(field::radial_length(*spec, -v_rS) == doctest::Approx(spec->d1 + spec->d2));
}

TEST_CASE("fusion examples") {
  CHECK(fuse_homogeneous(2.0, 0.0, 4.0) == doctest::Approx(2.0));
  CHECK(fuse_homogeneous(2.0, 2.0, 4.0) == doctest::Approx(2.3784142300054421).epsilon(1e-12));
  CHECK(fuse_homogeneous(2.0, 1.0, 64.0) <= 2.0 * 1.02);
  CHECK(fuse_homogeneous(0.0, 0.0, 4.0) == 0.0);
  CHECK_THROWS_AS(fuse_homogeneous(1.0, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(fuse_homogeneous(-1.0, 1.0, 4.0), std::invalid_argument);
}

TEST_CASE("fusion properties") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.0, 4.0), al(1.0, 64.0), eps(0.0, 0.5);
  for (int i = 0; i < 2000; ++i) {
    const double a = d(rng), b = d(rng), alpha = al(rng);
    const double f = fuse_homogeneous(a, b, alpha);
    CHECK(f >= std::max(a, b));
    CHECK(f == fuse_homogeneous(b, a, alpha));
    CHECK(fuse_homogeneous(a + eps(rng), b, alpha) >= f);
    CHECK(fuse_homogeneous(a, b + eps(rng), alpha) >= f);
    CHECK(std::abs(f - oracle::power_sum(a, b, alpha)) <= 1e-12 * std::max(1.0, f));
    CHECK(fuse_homogeneous(a, b, 64.0) <= 1.02 * std::max(a, b) + 1e-15);
  }
}

TEST_CASE("no human direction gives zero force") {
  const auto s = moving_state(Vec2(0.1, 0.4), Vec2(0.1, 0.0));
  const auto out = compute_guidance(std::nullopt, intgf_spec(0.8, Vec2::UnitX(), IntGFConfig{}),
                                    singf_spec(0.05, Vec2::UnitY(), SinGFConfig{}), 4.0, s,
                                    s.x + Vec2(0.01, 0), GuidanceGains{});
  CHECK(out.f_c.isZero());
  CHECK(out.active_fields.empty());
}

TEST_CASE("single intent field force") {
  const GuidanceGains g;
  const auto s = moving_state(Vec2(0.1, 0.4), Vec2(0.1, 0.0));
  const Vec2 v_h = Vec2::UnitX();
  const auto passive = intgf_spec(0.2, v_h, IntGFConfig{});
  const auto out = compute_guidance(v_h, passive, std::nullopt, 4.0, s, s.x, g);
  CHECK(out.d_h == doctest::Approx(1.0));
  CHECK((out.f_c - field::passive_force(1.0, s.v, g)).norm() < 1e-12);
  REQUIRE(out.active_fields.size() == 1);
  CHECK(out.active_fields[0].label == "IntGF-D");

  const auto active = intgf_spec(0.7, v_h, IntGFConfig{});
  const Vec2 x_d = s.x + Vec2(0.01, 0.0);
  const auto out2 = compute_guidance(v_h, active, std::nullopt, 4.0, s, x_d, g);
  CHECK(out2.d_h == doctest::Approx(3.0));
  CHECK((out2.f_c - field::active_force(3.0, x_d, s.x, g)).norm() < 1e-12);
  CHECK(out2.active_fields[0].label == "IntGF-S");
}

TEST_CASE("stiffness field dominates mixed modes") {
  const GuidanceGains g;
  const auto s = moving_state(Vec2(0.1, 0.4), Vec2(0.05, 0.02));
  const Vec2 v_h = oracle::unit(0.2);
  const Vec2 x_d = s.x + 0.01 * v_h;

  const auto int_d = intgf_spec(0.2, Vec2::UnitX(), IntGFConfig{});
  const auto sing_s = singf_spec(0.02, Vec2::UnitY(), SinGFConfig{});
  const auto out = compute_guidance(v_h, int_d, sing_s, 4.0, s, x_d, g);
  const double d_hS = field::radial_length(*sing_s, v_h);
  CHECK((out.f_c - field::active_force(d_hS, x_d, s.x, g)).norm() < 1e-12);
  REQUIRE(out.active_fields.size() == 1);
  CHECK(out.active_fields[0].label == "SinGF-S");

  const auto int_s = intgf_spec(0.9, Vec2::UnitX(), IntGFConfig{});
  const auto sing_d = singf_spec(0.05, Vec2::UnitY(), SinGFConfig{});
  const auto out2 = compute_guidance(v_h, int_s, sing_d, 4.0, s, x_d, g);
  CHECK((out2.f_c - field::active_force(field::radial_length(int_s, v_h), x_d, s.x, g)).norm() < 1e-12);
  REQUIRE(out2.active_fields.size() == 1);
  CHECK(out2.active_fields[0].label == "IntGF-S");
}

TEST_CASE("heterogeneous fusion never emits damping while a stiffness field is active") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(-kPi, kPi), c(0.0, 1.0), m(0.0, 0.08), v(-0.3, 0.3);
  const GuidanceGains g;
  for (int i = 0; i < 2000; ++i) {
    const auto s = moving_state(Vec2(0.1, 0.4), Vec2(v(rng), v(rng)));
    const Vec2 v_h = oracle::unit(ang(rng));
    const auto int_spec = intgf_spec(c(rng), oracle::unit(ang(rng)), IntGFConfig{});
    const auto sing = singf_spec(m(rng), oracle::unit(ang(rng)), SinGFConfig{});
    REQUIRE(sing);
    if (sing->mode == int_spec.mode) continue;
    const Vec2 x_d = s.x;
    const auto out = compute_guidance(v_h, int_spec, sing, 4.0, s, x_d, g);
    CHECK(out.f_c.isZero());
    for (const auto& f : out.active_fields) CHECK(f.spec.mode == FieldMode::Active);
  }
}

TEST_CASE("homogeneous passive fusion") {
  const GuidanceGains g;
  const auto s = moving_state(Vec2(0.1, 0.4), Vec2(0.05, 0.0));
  const Vec2 v = oracle::unit(0.6);
  const auto int_d = intgf_spec(0.2, v, IntGFConfig{});
  SinGFConfig sc;
  const auto sing_d = singf_spec(0.055, v, sc);
  REQUIRE(sing_d);
  REQUIRE(sing_d->mode == FieldMode::Passive);
  const double alpha = 4.0;
  const auto out = compute_guidance(v, int_d, sing_d, alpha, s, s.x, g);
  const double dI = int_d.d1 - int_d.d2;
  const double dS = sing_d->d1 - sing_d->d2;
  CHECK(out.d_h == doctest::Approx(oracle::power_sum(dI, dS, alpha)).epsilon(1e-12));
  CHECK((out.f_c - field::passive_force(out.d_h, s.v, g)).norm() < 1e-12);
  REQUIRE(out.active_fields.size() == 2);

  // Equal minimum lengths: (d_min^α·2)^{1/α}.
  auto same = *sing_d;
  same.d2 = int_d.d2;
  const auto out2 = compute_guidance(v, int_d, same, alpha, s, s.x, g);
  CHECK(out2.d_h == doctest::Approx(std::pow(2.0 * std::pow(dI, alpha), 1.0 / alpha)).epsilon(1e-12));
}

TEST_CASE("force clamp") {
  GuidanceGains g;
  g.K_p = 1e5;
  const auto s = moving_state(Vec2(0.1, 0.4), Vec2::Zero());
  const auto spec = intgf_spec(0.9, Vec2::UnitX(), IntGFConfig{});
  const auto out = compute_guidance(Vec2::UnitX(), spec, std::nullopt, 4.0, s, s.x + Vec2(0.01, 0), g, 30.0);
  CHECK(out.f_c.norm() == doctest::Approx(30.0));
  CHECK(out.f_c.x() > 0.0);
}

}  // TEST_SUITE
