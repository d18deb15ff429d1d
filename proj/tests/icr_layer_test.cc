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

#include "htetro/icr_layer.h"

#include <random>

#include <gtest/gtest.h>

namespace htetro {
namespace {

TEST(BodyErrorTest, Examples) {
  const TrackingError a = BodyError({0, 0, 0}, {1, 0, 0});
  EXPECT_DOUBLE_EQ(a.x, 1.0);
  EXPECT_DOUBLE_EQ(a.y, 0.0);
  EXPECT_DOUBLE_EQ(a.theta, 0.0);

  const TrackingError b = BodyError({0, 0, kPi / 2.0}, {1, 0, kPi / 2.0});
  EXPECT_NEAR(b.x, 0.0, 1e-15);
  EXPECT_NEAR(b.y, -1.0, 1e-15);
  EXPECT_DOUBLE_EQ(b.theta, 0.0);

  const TrackingError c = BodyError({0.3, -0.2, 1.0}, {0.3, -0.2, 1.0});
  EXPECT_EQ(c.x, 0.0);
  EXPECT_EQ(c.y, 0.0);
  EXPECT_EQ(c.theta, 0.0);
}

TEST(BodyErrorTest, HeadingErrorIsWrapped) {
  EXPECT_NEAR(BodyError({0, 0, 3.0}, {0, 0, -3.0}).theta, 2 * kPi - 6.0, 1e-15);
}

TEST(DrivingAngleTest, Examples) {
  const DrivingDirection a = DrivingAngle({1, 0, 0});
  EXPECT_DOUBLE_EQ(a.angle, 0.0);
  EXPECT_EQ(a.sign, 1);
  const DrivingDirection b = DrivingAngle({0, 1, 0});
  EXPECT_DOUBLE_EQ(b.angle, kPi / 2.0);
  EXPECT_EQ(b.sign, 1);
  const DrivingDirection c = DrivingAngle({-1, -1, 0});
  EXPECT_NEAR(c.angle, kPi / 4.0, 1e-15);
  EXPECT_EQ(c.sign, -1);
}

TEST(DrivingAngleTest, UnitPointsAlongTheError) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const TrackingError e{u(rng), u(rng), 0.0};
    const DrivingDirection d = DrivingAngle(e);
    EXPECT_LE(std::abs(d.angle), kPi / 2.0);
    const Vector2d err(e.x, e.y);
    EXPECT_NEAR((d.Unit() - err.normalized()).norm(), 0.0, 1e-12);
  }
}

TEST(DrivingAngleTest, NegativeAxisStaysInDomain) {
  const DrivingDirection d = DrivingAngle({-2.0, 0.0, 0.0});
  EXPECT_EQ(d.sign, -1);
  EXPECT_LE(std::abs(d.angle), kPi / 2.0);
  EXPECT_NEAR((d.Unit() - Vector2d(-1, 0)).norm(), 0.0, 1e-15);
}

TEST(DrivingAngleTest, ZeroErrorHoldsPrevious) {
  const DrivingDirection previous{0.4, -1};
  const DrivingDirection d = DrivingAngle({0, 0, 0.2}, previous);
  EXPECT_EQ(d.angle, 0.4);
  EXPECT_EQ(d.sign, -1);
}

TEST(DesiredRadiusTest, Examples) {
  EXPECT_DOUBLE_EQ(DesiredRadius(1.0, 0.0, 10.0), 10.0);
  EXPECT_NEAR(DesiredRadius(1.0, 1e-9, 10.0), 10.0, 1e-12);
  EXPECT_DOUBLE_EQ(DesiredRadius(-1.0, 0.0, 10.0), -10.0);
  EXPECT_DOUBLE_EQ(DesiredRadius(0.0, 1.0, 10.0), 0.0);
  EXPECT_NEAR(DesiredRadius(1.0, 1.0, 10.0), 10.0 * std::tanh(0.1), 1e-15);
  EXPECT_NEAR(DesiredRadius(1.0, 1.0, 10.0), 0.99668, 1e-5);
}

TEST(DesiredRadiusTest, BoundedAndNearRatioWhenUnsaturated) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  std::uniform_real_distribution<double> w(-5.0, 5.0);
  for (int k = 0; k < 10000; ++k) {
    const double speed = v(rng);
    const double rate = w(rng);
    const double r = DesiredRadius(speed, rate, 10.0);
    EXPECT_LE(std::abs(r), 10.0);
    if (rate != 0.0 && std::abs(speed / (rate * 10.0)) < 0.1) {
      EXPECT_LE(std::abs(r - speed / rate), 0.0034 * std::abs(speed / rate));
    }
  }
}

TEST(HeadingRateTest, Proportional) {
  EXPECT_DOUBLE_EQ(HeadingRate(0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(HeadingRate(0.5, 2.0), 1.0);
}

TEST(EquivalentDiffDriveTest, Examples) {
  const EquivalentWheels a = EquivalentDiffDrive(1.0, 0.0, 0.3);
  EXPECT_DOUBLE_EQ(a.left, 1.0);
  EXPECT_DOUBLE_EQ(a.right, 1.0);
  const EquivalentWheels b = EquivalentDiffDrive(0.0, 1.0, 0.125);
  EXPECT_DOUBLE_EQ(b.left, 0.125);
  EXPECT_DOUBLE_EQ(b.right, -0.125);
  const EquivalentWheels c = EquivalentDiffDrive(1.0, 1.0, 0.125);
  EXPECT_DOUBLE_EQ(c.left, 1.125);
  EXPECT_DOUBLE_EQ(c.right, 0.875);
}

TEST(IcrTargetTest, FiniteCenterIsInstantaneouslyStill) {
  const IcrTarget t = MakeIcrTarget({0.3, 1}, 0.2, 0.8, 10.0);
  ASSERT_FALSE(t.translation);
  const Twist body = t.BodyTwist();
  const Vector2d at_icr = PointVelocity(body, t.Point());
  EXPECT_NEAR(at_icr.norm(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(body.omega, 0.8);
  const Vector3d p = t.Homogeneous();
  EXPECT_NEAR(p.norm(), 1.0, 1e-15);
  EXPECT_NEAR((p.head<2>() / p.z() - t.Point()).norm(), 0.0, 1e-14);
}

TEST(IcrTargetTest, TranslationMovesAlongTheDrive) {
  const IcrTarget t = MakeIcrTarget({0.3, -1}, 0.2, 0.0, 10.0);
  ASSERT_TRUE(t.translation);
  EXPECT_DOUBLE_EQ(t.radius, -10.0);
  const Twist body = t.BodyTwist();
  EXPECT_NEAR((Vector2d(body.vx, body.vy) - 0.2 * t.direction.Unit()).norm(),
              0.0, 1e-15);
  EXPECT_EQ(body.omega, 0.0);
  EXPECT_EQ(t.Homogeneous().z(), 0.0);
}

TEST(IcrTargetTest, TranslationBand) {
  // tanh(x) >= 0.99 needs x >= atanh(0.99) ~ 2.647.
  EXPECT_TRUE(MakeIcrTarget({0, 1}, 1.0, 1.0 / 27.0, 10.0).translation);
  EXPECT_FALSE(MakeIcrTarget({0, 1}, 1.0, 1.0 / 26.0, 10.0).translation);
}

TEST(IcrLayerTest, UpdateUsesErrorDirectionAndHeadingGain) {
  IcrLayer layer({{2.0, 0.0, 0.0}, 10.0});
  const IcrTarget t = layer.Update({0.0, 1.0, 0.1}, 0.2, 0.01);
  EXPECT_DOUBLE_EQ(t.direction.angle, kPi / 2.0);
  EXPECT_DOUBLE_EQ(t.heading_rate, 0.2);
  EXPECT_DOUBLE_EQ(t.radius, 10.0 * std::tanh(0.2 / (0.2 * 10.0)));
  // A zero position error keeps the last direction.
  const IcrTarget held = layer.Update({0.0, 0.0, 0.0}, 0.0, 0.01);
  EXPECT_DOUBLE_EQ(held.direction.angle, kPi / 2.0);
}

}  // namespace
}  // namespace htetro
