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

// First control layer: pose error to the desired instantaneous center of
// rotation, expressed in body-frame polar form (driving angle, radius).

#ifndef HTETRO_ICR_LAYER_H_
#define HTETRO_ICR_LAYER_H_

#include "htetro/kinematics.h"

namespace htetro {

struct TrackingError {
  double x = 0.0;      // X_e, body frame (m)
  double y = 0.0;      // Y_e, body frame (m)
  double theta = 0.0;  // theta_d - theta, wrapped (rad)
};

// World position error rotated into the body frame of `current`.
TrackingError BodyError(const Pose& current, const Pose& desired);

struct DrivingDirection {
  double angle = 0.0;  // gamma_d in [-pi/2, pi/2]
  int sign = 1;        // +1 when X_e >= 0

  Vector2d Unit() const { return sign * UnitVector(angle); }
};

// Folds the direction of the position error into the half-circle domain.
// A zero position error returns `previous` unchanged.
DrivingDirection DrivingAngle(const TrackingError& error,
                              const DrivingDirection& previous = {});

// R_d = R_max tanh(v / (theta_dot R_max)); the theta_dot -> 0 limit is
// +-R_max with the sign of `signed_speed`.
double DesiredRadius(double signed_speed, double heading_rate,
                     double max_radius);

// Proportional heading law theta_dot_d = k_p theta_e.
inline double HeadingRate(double theta_error, double kp) {
  return kp * theta_error;
}

struct EquivalentWheels {
  double left = 0.0;
  double right = 0.0;
};

// Wheel speeds of the two-wheel abstraction with half track `track`.
inline EquivalentWheels EquivalentDiffDrive(double signed_speed,
                                            double heading_rate,
                                            double track) {
  return {signed_speed + track * heading_rate,
          signed_speed - track * heading_rate};
}

struct HeadingGains {
  PidGains pid{1.0, 0.0, 0.0};
  double max_radius = 10.0;  // R_max (m)

  bool Valid() const { return pid.kp > 0.0 && max_radius > 0.0; }
};

// Fraction of R_max above which the target is treated as pure translation.
inline constexpr double kTranslationBand = 0.99;

struct IcrTarget {
  DrivingDirection direction;
  double radius = 0.0;        // R_d; positive puts the ICR on the +y side
  double speed = 0.0;         // |v_d| (m/s)
  double heading_rate = 0.0;  // theta_dot_d (rad/s)
  double max_radius = 10.0;
  bool translation = true;    // ICR at infinity

  // ICR position; only meaningful when !translation.
  Vector2d Point() const {
    return radius * Perp(UnitVector(direction.angle));
  }
  // Unit-norm homogeneous ICR (x, y, w); w = 0 for translation.
  Vector3d Homogeneous() const;
  // Body twist whose instantaneous center is this target.
  Twist BodyTwist() const;
};

// Assembles a target from the commanded speed and heading rate.
IcrTarget MakeIcrTarget(const DrivingDirection& direction, double speed,
                        double heading_rate, double max_radius);

// Stateful wrapper: holds the last driving direction across zero-error steps
// and runs the heading PID.
class IcrLayer {
 public:
  explicit IcrLayer(HeadingGains gains = {}) : gains_(gains), pid_(gains.pid) {}

  // `speed` is the desired centroid speed along the error direction.
  IcrTarget Update(const TrackingError& error, double speed, double dt);

  const HeadingGains& gains() const { return gains_; }
  void Reset();

 private:
  HeadingGains gains_;
  Pid pid_;
  DrivingDirection direction_;
};

}  // namespace htetro

#endif  // HTETRO_ICR_LAYER_H_
