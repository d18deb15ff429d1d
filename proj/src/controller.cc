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

#include "htetro/controller.h"

namespace htetro {
namespace {

// Scale of the twist along `direction` closest to `desired` in the
// least-squares sense over the four module velocity vectors. The metric
// diag(4, 4, sum |r_i|^2) is sum_i J_i^T J_i for a centered body.
double ProjectTwist(const Vector3d& direction, const Vector3d& desired,
                    double polar_moment) {
  const Vector3d weights(kNumModules, kNumModules, polar_moment);
  const double denom = direction.cwiseProduct(weights).dot(direction);
  if (denom == 0.0) return 0.0;
  return direction.cwiseProduct(weights).dot(desired) / denom;
}

}  // namespace

PerModule<double> CoordinatedSpeeds(const Morphology& morph,
                                    const Vector3d& icr,
                                    const PerModule<double>& steering,
                                    const Twist& desired) {
  const Vector3d direction(icr.y(), -icr.x(), icr.z());
  const double scale =
      ProjectTwist(direction, desired.AsVector(), morph.PolarMoment());
  const Twist twist{scale * direction.x(), scale * direction.y(),
                    scale * direction.z(), Frame::kBody};
  PerModule<double> speeds{};
  for (int i = 0; i < kNumModules; ++i) {
    const Vector2d heading = UnitVector(morph.Heading(i, steering[i]));
    speeds[i] = PointVelocity(twist, morph.centers[i]).dot(heading);
  }
  return speeds;
}

bool MotionAllowed(const Morphology& morph, const PerModule<double>& measured,
                   const PerModule<double>& commanded) {
  return CheckConcurrency(morph, measured).residual <= kMotionResidual &&
         CheckConcurrency(morph, commanded).residual <= kMotionResidual;
}

bool ControllerConfig::Valid() const {
  return heading.Valid() && steering.Valid() && limits.Valid() &&
         cruise_speed > 0.0 && approach_gain > 0.0 && lookahead >= 0.0;
}

Pose CarrotOnSegment(const Segment& segment, const Vector2d& position,
                     double lookahead) {
  const Vector2d goal(segment.goal.x, segment.goal.y);
  const Vector2d span = goal - segment.start;
  const double length = span.norm();
  if (length < 1e-12) return segment.goal;
  const Vector2d u = span / length;
  const double along =
      std::clamp((position - segment.start).dot(u), 0.0, length);
  const Vector2d carrot =
      segment.start + std::min(along + lookahead, length) * u;
  return {carrot.x(), carrot.y(), segment.goal.theta};
}

PathTrackingController::PathTrackingController(const Morphology& morph,
                                               ControllerConfig config)
    : morph_(morph),
      config_(config),
      icr_layer_(config.heading),
      steering_(morph, config.steering) {
  steering_.set_max_rate(std::min(
      config.steering.max_rate, SteeringRateCeiling(morph.params, config.limits)));
}

void PathTrackingController::Reset() {
  icr_layer_.Reset();
  steering_.Reset();
}

ControlOutput PathTrackingController::Step(const Pose& observed,
                                           const PerModule<double>& measured,
                                           const Segment& segment, double dt) {
  ControlOutput out;
  const Vector2d position(observed.x, observed.y);
  out.desired = CarrotOnSegment(segment, position, config_.lookahead);
  out.error = BodyError(observed, out.desired);
  const double distance =
      (Vector2d(segment.goal.x, segment.goal.y) - position).norm();
  const double speed =
      std::min(config_.cruise_speed, config_.approach_gain * distance);
  out.icr = icr_layer_.Update(out.error, speed, dt);
  const Twist desired_twist = out.icr.BodyTwist();

  PerModule<double> speeds{};
  if (config_.mode == SteeringMode::kCoordinated) {
    out.plan = steering_.Step(measured, out.icr, dt);
    if (MotionAllowed(morph_, measured, out.plan.steering_next)) {
      speeds = CoordinatedSpeeds(morph_, out.plan.icr_next,
                                 out.plan.steering_next, desired_twist);
    }
  } else {
    // Every module chases its own target; speeds from the pseudo-inverse.
    const SteeringTarget goal = DesiredSteering(morph_, out.icr, measured);
    const double max_step = steering_.gains().max_rate * dt;
    out.plan.regime = ClassifyRegime(morph_, measured, out.icr);
    for (int i = 0; i < kNumModules; ++i) {
      const double error = WrapHalfTurn(goal.steering[i] - measured[i]);
      double step = Clamp(config_.steering.pid.kp * error * dt, max_step);
      if (std::abs(step) >= std::abs(error)) step = error;
      out.plan.error[i] = error;
      out.plan.desired[i] = goal.steering[i];
      out.plan.rate[i] = step / dt;
      out.plan.steering_next[i] = WrapAngle(measured[i] + step);
    }
    out.plan.icr_next = CheckConcurrency(morph_, out.plan.steering_next).icr;
    speeds = PseudoInverseSpeeds(morph_, out.plan.steering_next, desired_twist);
  }

  out.wheels = RegulateWheels(speeds, out.plan.rate, morph_.params,
                              config_.limits, config_.heading.pid.kp);
  ModuleVelocities applied;
  applied.speed = out.wheels.speed;
  applied.steering = out.plan.steering_next;
  out.body_twist = ToBody(ForwardKinematics(morph_, applied, 0.0), 0.0);
  out.residual = CheckConcurrency(morph_, out.plan.steering_next).residual;
  for (double v : out.wheels.speed) out.moving = out.moving || v != 0.0;
  return out;
}

}  // namespace htetro
