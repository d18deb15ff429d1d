/*
 * Copyright 2026 The htetro Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "htetro/velocity_layer.h"

#include <random>

#include <gtest/gtest.h>

#include "htetro/steering_layer.h"

namespace htetro {
namespace {

const GeometricParams kParams;
const DriveLimits kLimits;  // 20 rad/s -> 0.6 m/s rim speed

TEST(ModuleSpeedsTest, StraightLine) {
  const Morphology m = BuildMorphology(Shape::kT);
  const IcrTarget t = MakeIcrTarget({0.2, 1}, 0.25, 0.0, 10.0);
  const SteeringTarget d = DesiredSteering(m, t, {});
  for (double v : ModuleSpeeds(d.radius, t)) EXPECT_NEAR(std::abs(v), 0.25, 1e-15);
}

TEST(ModuleSpeedsTest, OSpinMatchesRigidBody) {
  const Morphology m = BuildMorphology(Shape::kO);
  const IcrTarget t = MakeIcrTarget({0.0, 1}, 0.0, 1.0, 10.0);
  const SteeringTarget d = DesiredSteering(m, t, {});
  for (double v : ModuleSpeeds(d.radius, t)) {
    EXPECT_NEAR(std::abs(v), 0.125 * std::sqrt(2.0), 1e-15);
  }
}

TEST(ModuleSpeedsTest, ModuleOnCenterIsStill) {
  const PerModule<double> radii = {0.3, 0.0, -0.2, 0.1};
  const IcrTarget t = MakeIcrTarget({0.0, 1}, 0.1, 0.5, 10.0);
  EXPECT_EQ(ModuleSpeeds(radii, t)[1], 0.0);
}

TEST(RegulateWheelsTest, BelowLimitIsUnchanged) {
  // Raw peak 0.5 * phi_max: v = 0.3 m/s -> 10 rad/s.
  const PerModule<double> v = {0.3, 0.1, -0.2, 0.0};
  const WheelCommand cmd = RegulateWheels(v, {}, kParams, kLimits, 1.5);
  EXPECT_DOUBLE_EQ(cmd.rates.MaxAbs(), 10.0);
  EXPECT_EQ(cmd.speed, v);
  EXPECT_FALSE(cmd.saturated);
  EXPECT_DOUBLE_EQ(cmd.effective_kp, 1.5);
}

TEST(RegulateWheelsTest, TwiceTheLimitIsHalved) {
  const PerModule<double> v = {1.2, -0.6, 0.3, 0.9};
  const WheelCommand cmd = RegulateWheels(v, {}, kParams, kLimits, 1.0);
  EXPECT_TRUE(cmd.saturated);
  EXPECT_DOUBLE_EQ(cmd.speed_scale, 0.5);
  EXPECT_NEAR(cmd.rates.MaxAbs(), 20.0, 1e-12);
  for (int i = 0; i < kNumModules; ++i) EXPECT_DOUBLE_EQ(cmd.speed[i], v[i] / 2);
  EXPECT_DOUBLE_EQ(cmd.effective_kp, 0.5);
}

TEST(RegulateWheelsTest, SpinAtLimitIsUnchanged) {
  const double rate = kLimits.max_wheel_rate * kParams.wheel_radius /
                      kParams.wheel_offset;
  EXPECT_DOUBLE_EQ(SteeringRateCeiling(kParams, kLimits), rate);
  const PerModule<double> b = {rate, -rate, rate, 0.0};
  const WheelCommand cmd = RegulateWheels({}, b, kParams, kLimits, 1.0);
  EXPECT_FALSE(cmd.steering_saturated);
  EXPECT_FALSE(cmd.saturated);
  EXPECT_EQ(cmd.steering_rate, b);
  EXPECT_NEAR(cmd.rates.MaxAbs(), 20.0, 1e-12);
}

TEST(RegulateWheelsTest, SteeringBeyondLimitStopsTranslation) {
  const PerModule<double> v = {0.1, 0.1, 0.1, 0.1};
  const PerModule<double> b = {24.0, 6.0, -12.0, 0.0};
  const WheelCommand cmd = RegulateWheels(v, b, kParams, kLimits, 1.0);
  EXPECT_TRUE(cmd.steering_saturated);
  EXPECT_DOUBLE_EQ(cmd.steering_scale, 0.5);
  EXPECT_DOUBLE_EQ(cmd.steering_rate[2], -6.0);
  for (double s : cmd.speed) EXPECT_EQ(s, 0.0);
  EXPECT_NEAR(cmd.rates.MaxAbs(), 20.0, 1e-12);
}

TEST(RegulateWheelsTest, RandomCommandsRespectLimitAndRatios) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  std::uniform_real_distribution<double> b(-15.0, 15.0);
  for (int k = 0; k < 10000; ++k) {
    PerModule<double> speed, rate;
    for (int i = 0; i < kNumModules; ++i) {
      speed[i] = v(rng);
      rate[i] = b(rng);
    }
    const WheelCommand cmd = RegulateWheels(speed, rate, kParams, kLimits, 1.0);
    ASSERT_LE(cmd.rates.MaxAbs(), kLimits.max_wheel_rate + 1e-12);
    for (int i = 0; i < kNumModules; ++i) {
      for (int j = 0; j < kNumModules; ++j) {
        // v_i / v_j preserved: cross-multiplied to avoid division.
        EXPECT_NEAR(cmd.speed[i] * speed[j], cmd.speed[j] * speed[i], 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace htetro
