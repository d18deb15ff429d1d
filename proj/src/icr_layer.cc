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

#include <limits>

namespace htetro {

TrackingError BodyError(const Pose& current, const Pose& desired) {
  const double dx = desired.x - current.x;
  const double dy = desired.y - current.y;
  const double c = std::cos(current.theta);
  const double s = std::sin(current.theta);
  return {c * dx + s * dy, -s * dx + c * dy,
          WrapAngle(desired.theta - current.theta)};
}

DrivingDirection DrivingAngle(const TrackingError& error,
                              const DrivingDirection& previous) {
  if (error.x == 0.0 && error.y == 0.0) return previous;
  DrivingDirection out;
  out.sign = error.x >= 0.0 ? 1 : -1;
  const double full = std::atan2(error.y, error.x);
  out.angle = out.sign > 0 ? full : WrapAngle(full + kPi);
  // atan2(+-0, negative) lands on the excluded endpoint after the flip.
  if (out.angle > kPi / 2.0) out.angle -= kPi;
  if (out.angle < -kPi / 2.0) out.angle += kPi;
  return out;
}

double DesiredRadius(double signed_speed, double heading_rate,
                     double max_radius) {
  if (heading_rate == 0.0) {
    return signed_speed >= 0.0 ? max_radius : -max_radius;
  }
  return max_radius * std::tanh(signed_speed / (heading_rate * max_radius));
}

Vector3d IcrTarget::Homogeneous() const {
  const Vector2d lateral = Perp(UnitVector(direction.angle));
  if (translation) return {lateral.x(), lateral.y(), 0.0};
  const Vector3d p(radius * lateral.x(), radius * lateral.y(), 1.0);
  return p.normalized();
}

Twist IcrTarget::BodyTwist() const {
  const Vector2d forward = UnitVector(direction.angle);
  if (translation) {
    const double v = direction.sign * speed;
    return {v * forward.x(), v * forward.y(), 0.0, Frame::kBody};
  }
  // Centroid speed theta_dot * R_d; tends to s * |v| as theta_dot -> 0.
  const double v = heading_rate * radius;
  return {v * forward.x(), v * forward.y(), heading_rate, Frame::kBody};
}

IcrTarget MakeIcrTarget(const DrivingDirection& direction, double speed,
                        double heading_rate, double max_radius) {
  IcrTarget target;
  target.direction = direction;
  target.speed = speed;
  target.heading_rate = heading_rate;
  target.max_radius = max_radius;
  target.radius =
      DesiredRadius(direction.sign * speed, heading_rate, max_radius);
  target.translation = std::abs(target.radius) >= kTranslationBand * max_radius;
  return target;
}

IcrTarget IcrLayer::Update(const TrackingError& error, double speed,
                           double dt) {
  direction_ = DrivingAngle(error, direction_);
  const double heading_rate = pid_.Update(
      error.theta, dt, std::numeric_limits<double>::infinity());
  return MakeIcrTarget(direction_, speed, heading_rate, gains_.max_radius);
}

void IcrLayer::Reset() {
  pid_.Reset();
  direction_ = {};
}

}  // namespace htetro
