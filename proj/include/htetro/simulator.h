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

// Ideal no-slip plant and the closed waypoint loop around the controller.

#ifndef HTETRO_SIMULATOR_H_
#define HTETRO_SIMULATOR_H_

#include <cstdint>
#include <random>
#include <vector>

#include "htetro/controller.h"

namespace htetro {

struct PlantState {
  Pose pose;
  PerModule<double> steering{};
};

// Advances the pose with fixed-step RK4 on the forward kinematics while the
// steering angles ramp linearly at their commanded rates.
PlantState StepPlant(const PlantState& state, const WheelRates& wheels,
                     const Morphology& morph, double dt);

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double position_tolerance = 0.05;  // m
  double heading_tolerance = 0.05;   // rad

  bool Valid() const {
    return position_tolerance > 0.0 && heading_tolerance > 0.0;
  }
  bool Reached(const Pose& pose) const;
};

// Waypoints of the zig-zag field course, all with zero desired heading.
std::vector<Waypoint> ReferenceCourse();

struct Disturbance {
  double time = 0.0;  // s
  double dx = 0.0;    // m, world frame
  double dy = 0.0;
  double dtheta = 0.0;
};

struct NoiseConfig {
  double position_sigma = 0.0;  // m
  double heading_sigma = 0.0;   // rad
  std::uint64_t seed = 1;
};

// Additive Gaussian noise on the observed pose; deterministic per seed.
class PoseNoise {
 public:
  explicit PoseNoise(const NoiseConfig& config);
  Pose Observe(const Pose& truth);

 private:
  NoiseConfig config_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

struct SimConfig {
  double dt = 0.01;         // s
  double max_time = 120.0;  // s
  NoiseConfig noise;
  std::vector<Disturbance> disturbances;
  ControllerConfig controller;
  Pose initial_pose;
  // Every module starts facing this world heading (rad).
  double initial_heading = 0.0;

  bool Valid() const {
    return dt > 0.0 && max_time > 0.0 && noise.position_sigma >= 0.0 &&
           noise.heading_sigma >= 0.0 && controller.Valid();
  }
};

struct LogRow {
  double t = 0.0;
  Pose pose;
  Pose desired;
  double gamma_d = 0.0;
  double radius_d = 0.0;
  PerModule<double> steering{};
  PerModule<double> steering_d{};
  PerModule<double> speed{};
  WheelRates wheels;
  double residual = 0.0;
  Regime regime = Regime::kParallel;
  bool saturated = false;
  bool moving = false;
  int waypoint = 0;
  Vector2d path_error = Vector2d::Zero();  // true position minus closest
                                           // point of the active segment
  double cross_track = 0.0;  // signed distance of the true pose to the segment
};

struct TrajectoryLog {
  Shape shape = Shape::kI;
  std::vector<LogRow> rows;
  std::vector<double> arrival_times;  // one per reached waypoint
  bool arrived = false;               // every waypoint reached
  bool timed_out = false;
  Pose final_pose;
};

struct RunSummary {
  double rmse_x = 0.0;
  double rmse_y = 0.0;
  double rmse_theta = 0.0;
  double rmse_cross_track = 0.0;
  double max_residual = 0.0;  // over steps with a moving module
  double max_wheel_rate = 0.0;
  int saturation_count = 0;
  std::vector<double> arrival_times;
  bool arrived = false;
};

Segment SegmentTo(const Vector2d& start, const Waypoint& goal);

// Signed distance of `position` to the segment, positive on its left.
double CrossTrack(const Segment& segment, const Vector2d& position);

// Hold-until-arrival waypoint run. Throws std::invalid_argument on an empty
// course or an invalid configuration.
TrajectoryLog RunWaypoints(const Morphology& morph,
                           const std::vector<Waypoint>& waypoints,
                           const SimConfig& config);

RunSummary Summarize(const TrajectoryLog& log);

}  // namespace htetro

#endif  // HTETRO_SIMULATOR_H_
