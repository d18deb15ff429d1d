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

#include "htetro/simulator.h"

#include <gtest/gtest.h>

namespace htetro {
namespace {

WheelRates Wheels(const Morphology& m, const PerModule<double>& speed) {
  WheelRates w;
  for (int i = 0; i < kNumModules; ++i) {
    const WheelPair p = ModuleToWheels(speed[i], 0.0, m.params);
    w.left[i] = p.left;
    w.right[i] = p.right;
  }
  return w;
}

TEST(StepPlantTest, ZeroWheelsHoldPose) {
  const Morphology m = BuildMorphology(Shape::kS);
  PlantState s{{0.3, -0.2, 1.1}, {0.1, 0.2, 0.3, 0.4}};
  const PlantState next = StepPlant(s, {}, m, 0.01);
  EXPECT_EQ(next.pose.x, s.pose.x);
  EXPECT_EQ(next.pose.y, s.pose.y);
  EXPECT_EQ(next.pose.theta, s.pose.theta);
  EXPECT_EQ(next.steering, s.steering);
}

TEST(StepPlantTest, StraightLineAnalytic) {
  const Morphology m = BuildMorphology(Shape::kJ);
  PlantState s;
  s.pose = {0.0, 0.0, 0.7};
  for (int i = 0; i < kNumModules; ++i) s.steering[i] = m.Steering(i, 0.0);
  const WheelRates w = Wheels(m, {0.1, 0.1, 0.1, 0.1});
  for (int k = 0; k < 100; ++k) s = StepPlant(s, w, m, 0.01);
  EXPECT_NEAR(s.pose.x, 0.1 * std::cos(0.7), 1e-9);
  EXPECT_NEAR(s.pose.y, 0.1 * std::sin(0.7), 1e-9);
  EXPECT_NEAR(s.pose.theta, 0.7, 1e-12);
}

TEST(StepPlantTest, SteeringIntegratesAlongside) {
  const Morphology m = BuildMorphology(Shape::kO);
  WheelRates w;
  const WheelPair spin = ModuleToWheels(0.0, 2.0, m.params);
  for (int i = 0; i < kNumModules; ++i) {
    w.left[i] = spin.left;
    w.right[i] = spin.right;
  }
  const PlantState next = StepPlant({}, w, m, 0.05);
  for (double b : next.steering) EXPECT_NEAR(b, 0.1, 1e-15);
}

// Analytic oracle: constant body twist about a fixed center sweeps the
// centroid along a circle.
TEST(StepPlantTest, ConstantCenterArcMatchesCircle) {
  for (Shape shape : kAllShapes) {
    const Morphology m = BuildMorphology(shape);
    const IcrTarget t = MakeIcrTarget({0.3, 1}, 0.2, 0.8, 10.0);
    ASSERT_FALSE(t.translation);
    const SteeringTarget d = DesiredSteering(m, t, {});
    PlantState s;
    s.pose = {1.0, -0.5, 0.4};
    s.steering = d.steering;
    const WheelRates w = Wheels(m, ModuleSpeeds(d.radius, t));
    const double omega = t.heading_rate;
    const Vector2d icr_body = t.Point();
    const double c = std::cos(s.pose.theta), sn = std::sin(s.pose.theta);
    const Vector2d icr_world(s.pose.x + c * icr_body.x() - sn * icr_body.y(),
                             s.pose.y + sn * icr_body.x() + c * icr_body.y());
    const Vector2d arm0 = Vector2d(s.pose.x, s.pose.y) - icr_world;
    const double dt = 0.01;
    const int steps = static_cast<int>(std::ceil(2 * kPi / omega / dt));
    double worst = 0.0;
    for (int k = 1; k <= steps; ++k) {
      s = StepPlant(s, w, m, dt);
      const double a = omega * k * dt;
      const Vector2d want =
          icr_world + Vector2d(std::cos(a) * arm0.x() - std::sin(a) * arm0.y(),
                               std::sin(a) * arm0.x() + std::cos(a) * arm0.y());
      worst = std::max(worst, (Vector2d(s.pose.x, s.pose.y) - want).norm());
      ASSERT_NEAR(WrapAngle(s.pose.theta - 0.4 - a), 0.0, 1e-9);
    }
    EXPECT_LT(worst, 1e-6) << ShapeLetter(shape);
  }
}

TEST(PoseNoiseTest, ZeroSigmaIsIdentity) {
  PoseNoise noise({0.0, 0.0, 3});
  const Pose p{0.1, 0.2, 0.3};
  const Pose o = noise.Observe(p);
  EXPECT_EQ(o.x, p.x);
  EXPECT_EQ(o.y, p.y);
  EXPECT_EQ(o.theta, p.theta);
}

TEST(PoseNoiseTest, SeededAndReproducible) {
  PoseNoise a({0.02, 0.01, 99});
  PoseNoise b({0.02, 0.01, 99});
  PoseNoise c({0.02, 0.01, 100});
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const Pose pa = a.Observe({});
    const Pose pb = b.Observe({});
    const Pose pc = c.Observe({});
    EXPECT_EQ(pa.x, pb.x);
    EXPECT_EQ(pa.theta, pb.theta);
    differs = differs || pa.x != pc.x;
  }
  EXPECT_TRUE(differs);
}

TEST(PoseNoiseTest, EmpiricalSigma) {
  PoseNoise noise({0.02, 0.0, 5});
  double sx = 0.0, sy = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const Pose p = noise.Observe({});
    sx += p.x * p.x;
    sy += p.y * p.y;
  }
  EXPECT_NEAR(std::sqrt(sx / n), 0.02, 0.002);
  EXPECT_NEAR(std::sqrt(sy / n), 0.02, 0.002);
}

TEST(CrossTrackTest, SignedDistance) {
  const Segment seg{{0, 0}, {1, 0, 0}};
  EXPECT_DOUBLE_EQ(CrossTrack(seg, {0.5, 0.2}), 0.2);
  EXPECT_DOUBLE_EQ(CrossTrack(seg, {0.5, -0.3}), -0.3);
  EXPECT_DOUBLE_EQ(CrossTrack(seg, {1.3, 0.4}), 0.5);
}

TEST(RunWaypointsTest, RejectsBadInput) {
  const Morphology m = BuildMorphology(Shape::kO);
  EXPECT_THROW(RunWaypoints(m, {}, {}), std::invalid_argument);
  SimConfig bad;
  bad.dt = 0.0;
  EXPECT_THROW(RunWaypoints(m, ReferenceCourse(), bad), std::invalid_argument);
  Waypoint w;
  w.position_tolerance = 0.0;
  EXPECT_THROW(RunWaypoints(m, {w}, {}), std::invalid_argument);
}

TEST(RunWaypointsTest, WaypointAtStartArrivesImmediately) {
  const TrajectoryLog log =
      RunWaypoints(BuildMorphology(Shape::kT), {Waypoint{}}, {});
  EXPECT_TRUE(log.arrived);
  EXPECT_TRUE(log.rows.empty());
  ASSERT_EQ(log.arrival_times.size(), 1u);
  EXPECT_EQ(log.arrival_times[0], 0.0);
}

TEST(RunWaypointsTest, ReferenceCourseEveryShape) {
  for (Shape s : kAllShapes) {
    const TrajectoryLog log =
        RunWaypoints(BuildMorphology(s), ReferenceCourse(), {});
    ASSERT_TRUE(log.arrived) << ShapeLetter(s);
    EXPECT_EQ(log.arrival_times.size(), 5u);
    const RunSummary sum = Summarize(log);
    EXPECT_LT(sum.max_residual, 1e-6);
    EXPECT_LE(sum.max_wheel_rate, 20.0 + 1e-12);
    // Uniform time base.
    for (std::size_t k = 0; k < log.rows.size(); ++k) {
      ASSERT_DOUBLE_EQ(log.rows[k].t, 0.01 * k);
    }
  }
}

TEST(RunWaypointsTest, CentroidSpeedBoundedByRimSpeed) {
  SimConfig config;
  config.controller.cruise_speed = 2.0;  // ask for more than the wheels give
  const TrajectoryLog log =
      RunWaypoints(BuildMorphology(Shape::kL), ReferenceCourse(), config);
  const double rim = 0.03 * 20.0;
  for (std::size_t k = 1; k < log.rows.size(); ++k) {
    const double dx = log.rows[k].pose.x - log.rows[k - 1].pose.x;
    const double dy = log.rows[k].pose.y - log.rows[k - 1].pose.y;
    ASSERT_LE(std::hypot(dx, dy) / 0.01, rim + 1e-9);
  }
  EXPECT_GT(Summarize(log).saturation_count, 0);
}

TEST(RunWaypointsTest, TimeoutIsFlagged) {
  SimConfig config;
  config.max_time = 1.0;
  const TrajectoryLog log =
      RunWaypoints(BuildMorphology(Shape::kO), ReferenceCourse(), config);
  EXPECT_TRUE(log.timed_out);
  EXPECT_FALSE(log.arrived);
  EXPECT_EQ(log.rows.size(), 100u);
}

TEST(RunWaypointsTest, DeterministicPerSeed) {
  SimConfig config;
  config.noise = {0.02, 0.01, 1234};
  const Morphology m = BuildMorphology(Shape::kZ);
  const TrajectoryLog a = RunWaypoints(m, ReferenceCourse(), config);
  const TrajectoryLog b = RunWaypoints(m, ReferenceCourse(), config);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    ASSERT_EQ(a.rows[k].pose.x, b.rows[k].pose.x);
    ASSERT_EQ(a.rows[k].pose.theta, b.rows[k].pose.theta);
    ASSERT_EQ(a.rows[k].steering, b.rows[k].steering);
  }
}

TEST(RunWaypointsTest, RecoversFromPoseJump) {
  SimConfig config;
  config.disturbances = {{2.0, 0.2, 0.0, 0.0}};
  const TrajectoryLog log =
      RunWaypoints(BuildMorphology(Shape::kS), ReferenceCourse(), config);
  EXPECT_TRUE(log.arrived);
  EXPECT_LT(Summarize(log).max_residual, 1e-6);
  double back = -1.0;
  for (const LogRow& r : log.rows) {
    if (r.t > 2.0 && std::abs(r.cross_track) <= 0.05) {
      back = r.t;
      break;
    }
  }
  ASSERT_GT(back, 2.0);
  EXPECT_LT(back - 2.0, 5.0);
}

TEST(RunWaypointsTest, TurnsToADesiredHeading) {
  std::vector<Waypoint> course = {{0.5, 0.5, 1.2}, {0.0, 1.0, -0.6}};
  for (Shape s : kAllShapes) {
    const TrajectoryLog log = RunWaypoints(BuildMorphology(s), course, {});
    EXPECT_TRUE(log.arrived) << ShapeLetter(s);
    EXPECT_LT(Summarize(log).max_residual, 1e-6) << ShapeLetter(s);
  }
}

}  // namespace
}  // namespace htetro
