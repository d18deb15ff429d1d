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

#include <cmath>
#include <stdexcept>

namespace htetro {
namespace {

Vector3d PoseRate(const Morphology& morph, const ModuleVelocities& mv,
                  double theta) {
  return ForwardKinematics(morph, mv, theta).AsVector();
}

// Closest point of the segment to `position`.
Vector2d Closest(const Segment& segment, const Vector2d& position) {
  const Vector2d goal(segment.goal.x, segment.goal.y);
  const Vector2d span = goal - segment.start;
  const double length2 = span.squaredNorm();
  if (length2 == 0.0) return goal;
  const double t =
      std::clamp((position - segment.start).dot(span) / length2, 0.0, 1.0);
  return segment.start + t * span;
}

}  // namespace

PlantState StepPlant(const PlantState& state, const WheelRates& wheels,
                     const Morphology& morph, double dt) {
  ModuleVelocities mv;
  for (int i = 0; i < kNumModules; ++i) {
    const ModuleMotion m =
        WheelsToModule(wheels.left[i], wheels.right[i], morph.params);
    mv.speed[i] = m.speed;
    mv.steering_rate[i] = m.steering_rate;
  }
  auto at = [&](double tau) {
    ModuleVelocities out = mv;
    for (int i = 0; i < kNumModules; ++i) {
      out.steering[i] = state.steering[i] + mv.steering_rate[i] * tau;
    }
    return out;
  };
  const Vector3d x0(state.pose.x, state.pose.y, state.pose.theta);
  const ModuleVelocities mid = at(0.5 * dt);
  const Vector3d k1 = PoseRate(morph, at(0.0), x0.z());
  const Vector3d k2 = PoseRate(morph, mid, x0.z() + 0.5 * dt * k1.z());
  const Vector3d k3 = PoseRate(morph, mid, x0.z() + 0.5 * dt * k2.z());
  const Vector3d k4 = PoseRate(morph, at(dt), x0.z() + dt * k3.z());
  const Vector3d x1 = x0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  PlantState next;
  next.pose = {x1.x(), x1.y(), WrapAngle(x1.z())};
  for (int i = 0; i < kNumModules; ++i) {
    next.steering[i] = WrapAngle(state.steering[i] + mv.steering_rate[i] * dt);
  }
  return next;
}

bool Waypoint::Reached(const Pose& pose) const {
  return std::hypot(pose.x - x, pose.y - y) <= position_tolerance &&
         std::abs(WrapAngle(pose.theta - theta)) <= heading_tolerance;
}

std::vector<Waypoint> ReferenceCourse() {
  return {{0.0, 1.2}, {0.5, 1.2}, {0.8, 2.5}, {0.3, 2.5}, {0.0, 5.0}};
}

PoseNoise::PoseNoise(const NoiseConfig& config)
    : config_(config), rng_(config.seed) {}

Pose PoseNoise::Observe(const Pose& truth) {
  if (config_.position_sigma == 0.0 && config_.heading_sigma == 0.0) {
    return truth;
  }
  Pose out = truth;
  out.x += config_.position_sigma * unit_(rng_);
  out.y += config_.position_sigma * unit_(rng_);
  out.theta = WrapAngle(out.theta + config_.heading_sigma * unit_(rng_));
  return out;
}

Segment SegmentTo(const Vector2d& start, const Waypoint& goal) {
  return {start, {goal.x, goal.y, goal.theta}};
}

double CrossTrack(const Segment& segment, const Vector2d& position) {
  const Vector2d offset = position - Closest(segment, position);
  const Vector2d span =
      Vector2d(segment.goal.x, segment.goal.y) - segment.start;
  const double distance = offset.norm();
  if (span.squaredNorm() == 0.0) return distance;
  return Cross(span, offset) >= 0.0 ? distance : -distance;
}

TrajectoryLog RunWaypoints(const Morphology& morph,
                           const std::vector<Waypoint>& waypoints,
                           const SimConfig& config) {
  if (waypoints.empty()) {
    throw std::invalid_argument("waypoint list is empty");
  }
  if (!config.Valid()) {
    throw std::invalid_argument("invalid simulation configuration");
  }
  for (const Waypoint& w : waypoints) {
    if (!w.Valid()) throw std::invalid_argument("invalid waypoint tolerance");
  }

  TrajectoryLog log;
  log.shape = morph.shape;
  PathTrackingController controller(morph, config.controller);
  PoseNoise noise(config.noise);
  PlantState state;
  state.pose = config.initial_pose;
  for (int i = 0; i < kNumModules; ++i) {
    state.steering[i] =
        morph.Steering(i, config.initial_heading - config.initial_pose.theta);
  }

  std::vector<Disturbance> pending = config.disturbances;
  std::sort(pending.begin(), pending.end(),
            [](const Disturbance& a, const Disturbance& b) {
              return a.time < b.time;
            });
  std::size_t next_disturbance = 0;

  std::size_t target = 0;
  Segment segment =
      SegmentTo({state.pose.x, state.pose.y}, waypoints[target]);
  const auto steps =
      static_cast<std::int64_t>(std::ceil(config.max_time / config.dt - 1e-9));
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const Pose observed = noise.Observe(state.pose);
    while (target < waypoints.size() && waypoints[target].Reached(observed)) {
      log.arrival_times.push_back(t);
      segment.start = {waypoints[target].x, waypoints[target].y};
      if (++target < waypoints.size()) {
        segment = SegmentTo(segment.start, waypoints[target]);
      }
    }
    if (target == waypoints.size()) {
      log.arrived = true;
      break;
    }
    if (k >= steps) {
      log.timed_out = true;
      break;
    }

    const ControlOutput out =
        controller.Step(observed, state.steering, segment, config.dt);
    LogRow row;
    row.t = t;
    row.pose = state.pose;
    row.desired = out.desired;
    row.gamma_d = out.icr.direction.angle;
    row.radius_d = out.icr.radius;
    row.steering = state.steering;
    row.steering_d = out.plan.desired;
    row.speed = out.wheels.speed;
    row.wheels = out.wheels.rates;
    row.residual = out.residual;
    row.regime = out.plan.regime;
    row.saturated = out.wheels.saturated || out.wheels.steering_saturated;
    row.moving = out.moving;
    row.waypoint = static_cast<int>(target);
    const Vector2d position(state.pose.x, state.pose.y);
    row.path_error = position - Closest(segment, position);
    row.cross_track = CrossTrack(segment, position);
    log.rows.push_back(row);

    state = StepPlant(state, out.wheels.rates, morph, config.dt);
    const double t_next = static_cast<double>(k + 1) * config.dt;
    while (next_disturbance < pending.size() &&
           pending[next_disturbance].time <= t_next) {
      const Disturbance& d = pending[next_disturbance++];
      state.pose.x += d.dx;
      state.pose.y += d.dy;
      state.pose.theta = WrapAngle(state.pose.theta + d.dtheta);
    }
  }
  log.final_pose = state.pose;
  return log;
}

RunSummary Summarize(const TrajectoryLog& log) {
  RunSummary s;
  s.arrival_times = log.arrival_times;
  s.arrived = log.arrived;
  if (log.rows.empty()) return s;
  double sx = 0.0, sy = 0.0, st = 0.0, sc = 0.0;
  for (const LogRow& row : log.rows) {
    sx += row.path_error.x() * row.path_error.x();
    sy += row.path_error.y() * row.path_error.y();
    sc += row.cross_track * row.cross_track;
    st += std::pow(WrapAngle(row.pose.theta - row.desired.theta), 2);
    if (row.moving) s.max_residual = std::max(s.max_residual, row.residual);
    s.max_wheel_rate = std::max(s.max_wheel_rate, row.wheels.MaxAbs());
    if (row.saturated) ++s.saturation_count;
  }
  const double n = static_cast<double>(log.rows.size());
  s.rmse_x = std::sqrt(sx / n);
  s.rmse_y = std::sqrt(sy / n);
  s.rmse_theta = std::sqrt(st / n);
  s.rmse_cross_track = std::sqrt(sc / n);
  return s;
}

}  // namespace htetro
