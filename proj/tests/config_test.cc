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

#include "htetro/config.h"

#include <gtest/gtest.h>

namespace htetro {
namespace {

bool Mentions(const ConfigError& e, const std::string& text) {
  for (const auto& line : e.diagnostics()) {
    if (line.find(text) != std::string::npos) return true;
  }
  return false;
}

TEST(ConfigTest, MinimalDocumentUsesDefaults) {
  const RunConfig c = ParseRunConfig(R"({"schema_version": 1})");
  EXPECT_EQ(c.shapes, std::vector<Shape>{Shape::kO});
  EXPECT_EQ(c.waypoints.size(), 5u);
  EXPECT_DOUBLE_EQ(c.sim.dt, 0.01);
  EXPECT_DOUBLE_EQ(c.sim.controller.limits.max_wheel_rate, 20.0);
}

TEST(ConfigTest, FullDocument) {
  const RunConfig c = ParseRunConfig(R"({
    "schema_version": 1,
    "shape": "all",
    "geometry": {"wheel_radius_m": 0.04, "wheel_offset_m": 0.06,
                 "module_length_m": 0.3},
    "controller": {"max_radius_m": 8, "max_wheel_rate_rad_s": 15,
                   "max_steering_rate_rad_s": 3,
                   "heading_pid": {"kp": 2, "ki": 0.1, "kd": 0},
                   "steering_pid": {"kp": 12},
                   "cruise_speed_m_s": 0.15, "lookahead_m": 0.1,
                   "transient_law": "tangent_scaling"},
    "sim": {"dt_s": 0.005, "max_time_s": 60, "seed": 7,
            "noise": {"position_sigma_m": 0.02},
            "disturbances": [{"time_s": 3, "dx_m": 0.2}],
            "initial_pose": {"x_m": 0.1, "theta_rad": 0.2}},
    "waypoints": [{"x_m": 0, "y_m": 1, "theta_rad": 0.5}]
  })");
  EXPECT_EQ(c.shapes.size(), 7u);
  EXPECT_DOUBLE_EQ(c.geometry.module_length, 0.3);
  EXPECT_DOUBLE_EQ(c.sim.controller.heading.max_radius, 8);
  EXPECT_DOUBLE_EQ(c.sim.controller.heading.pid.ki, 0.1);
  EXPECT_DOUBLE_EQ(c.sim.controller.steering.pid.kp, 12);
  EXPECT_EQ(c.sim.controller.steering.law, TransientLaw::kTangentScaling);
  EXPECT_EQ(c.sim.noise.seed, 7u);
  ASSERT_EQ(c.sim.disturbances.size(), 1u);
  EXPECT_DOUBLE_EQ(c.sim.disturbances[0].dx, 0.2);
  EXPECT_DOUBLE_EQ(c.sim.initial_pose.theta, 0.2);
  ASSERT_EQ(c.waypoints.size(), 1u);
  EXPECT_DOUBLE_EQ(c.waypoints[0].theta, 0.5);
  EXPECT_DOUBLE_EQ(c.waypoints[0].position_tolerance, 0.05);
}

TEST(ConfigTest, CollectsEveryProblem) {
  try {
    ParseRunConfig(R"({
      "shape": "Q",
      "geometry": {"wheel_radius_m": -1},
      "controller": {"cruise_speed": 0.2, "heading_pid": {"kp": "high"}},
      "sim": {"seed": -4},
      "waypoints": [{"x_m": 0}]
    })");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(Mentions(e, "$.schema_version: missing required key"));
    EXPECT_TRUE(Mentions(e, "$.shape"));
    EXPECT_TRUE(Mentions(e, "$.geometry.wheel_radius_m: must be a positive"));
    EXPECT_TRUE(Mentions(e, "$.controller.cruise_speed: unknown key"));
    EXPECT_TRUE(Mentions(e, "$.controller.heading_pid.kp: expected a number"));
    EXPECT_TRUE(Mentions(e, "$.sim.seed"));
    EXPECT_TRUE(Mentions(e, "$.waypoints[0].y_m: missing required key"));
  }
}

TEST(ConfigTest, RejectsWrongVersionAndBadJson) {
  EXPECT_THROW(ParseRunConfig(R"({"schema_version": 2})"), ConfigError);
  EXPECT_THROW(ParseRunConfig("{not json"), ConfigError);
  EXPECT_THROW(ParseRunConfig("[]"), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"schema_version": 1, "waypoints": []})"),
               ConfigError);
}

TEST(ConfigTest, RejectsInconsistentGeometry) {
  EXPECT_THROW(ParseRunConfig(R"({"schema_version": 1,
      "geometry": {"wheel_offset_m": 0.2}})"),
               ConfigError);
}

TEST(ConfigTest, DumpRoundTrips) {
  RunConfig c;
  c.shapes = {Shape::kJ};
  c.sim.noise = {0.02, 0.01, 42};
  c.sim.disturbances = {{1.5, 0.1, -0.1, 0.2}};
  c.sim.controller.steering.law = TransientLaw::kTangentScaling;
  c.waypoints = {{1, 2, 0.3, 0.04, 0.03}};
  const RunConfig back = ParseRunConfig(DumpRunConfig(c));
  EXPECT_EQ(back.shapes, c.shapes);
  EXPECT_EQ(back.sim.noise.seed, 42u);
  EXPECT_DOUBLE_EQ(back.sim.disturbances[0].dtheta, 0.2);
  EXPECT_EQ(back.sim.controller.steering.law, TransientLaw::kTangentScaling);
  EXPECT_DOUBLE_EQ(back.waypoints[0].heading_tolerance, 0.03);
  EXPECT_EQ(DumpRunConfig(back), DumpRunConfig(c));
}

TEST(ConfigTest, ShapeList) {
  EXPECT_EQ(ParseShapeList("all").size(), 7u);
  EXPECT_EQ(ParseShapeList("s"), std::vector<Shape>{Shape::kS});
  EXPECT_THROW(ParseShapeList("X"), ConfigError);
}

TEST(ConfigTest, WaypointFile) {
  const auto w = ParseWaypoints(R"([{"x_m": 1, "y_m": 2}, {"x_m": 3, "y_m": 4,
      "heading_tolerance_rad": 0.1}])");
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w[1].heading_tolerance, 0.1);
  EXPECT_THROW(ParseWaypoints(R"({"x_m": 1})"), ConfigError);
  EXPECT_THROW(LoadWaypoints("/nonexistent/waypoints.json"), ConfigError);
}

}  // namespace
}  // namespace htetro
