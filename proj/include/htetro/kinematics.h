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

#ifndef HTETRO_KINEMATICS_H_
#define HTETRO_KINEMATICS_H_

#include <Eigen/Dense>

#include "htetro/geometry.h"

namespace htetro {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // wrapped to (-pi, pi]
};

enum class Frame { kWorld, kBody };

struct Twist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  Frame frame = Frame::kBody;

  Vector3d AsVector() const { return {vx, vy, omega}; }
};

Twist ToWorld(const Twist& body, double theta);
Twist ToBody(const Twist& world, double theta);

struct ModuleVelocities {
  PerModule<double> speed{};          // v_i (m/s), signed along the heading
  PerModule<double> steering{};       // beta_i (rad)
  PerModule<double> steering_rate{};  // beta_dot_i (rad/s)
};

struct WheelRates {
  PerModule<double> left{};   // phi_dot_iL (rad/s)
  PerModule<double> right{};  // phi_dot_iR (rad/s)

  double MaxAbs() const;
};

// Rigid-body velocity of the point `p` of the body for a body twist.
inline Vector2d PointVelocity(const Twist& body, const Vector2d& p) {
  return {body.vx - body.omega * p.y(), body.vy + body.omega * p.x()};
}

// 3x4 map from module speeds to the body twist at fixed steering. The first
// two rows average the module velocity vectors; the third is the least-squares
// yaw rate sum_i (r_i^perp . h_i) v_i / sum_j |r_j|^2.
Eigen::Matrix<double, 3, kNumModules> ModuleMap(
    const Morphology& morph, const PerModule<double>& steering);

// World-frame twist of the centroid for the given module speeds and steering.
Twist ForwardKinematics(const Morphology& morph, const ModuleVelocities& mv,
                        double theta);

// Exact rigid-body inverse: module i moves with the body velocity field at its
// steering axis. Modules with zero velocity keep their hinted steering angle.
ModuleVelocities InverseKinematics(const Morphology& morph, const Twist& body,
                                   const PerModule<double>& steering_hint = {});

// Minimum-norm module speeds v = pinv(G(beta)) * twist at the given steering.
// Does not enforce the no-skid constraint; used as the unregulated baseline.
PerModule<double> PseudoInverseSpeeds(const Morphology& morph,
                                      const PerModule<double>& steering,
                                      const Twist& body);

struct WheelPair {
  double left = 0.0;
  double right = 0.0;
};

struct ModuleMotion {
  double speed = 0.0;
  double steering_rate = 0.0;
};

// Differential drive about the steering axis, left wheel at +d.
inline WheelPair ModuleToWheels(double speed, double steering_rate,
                                const GeometricParams& params) {
  const double spin = params.wheel_offset * steering_rate;
  return {(speed + spin) / params.wheel_radius,
          (speed - spin) / params.wheel_radius};
}

inline ModuleMotion WheelsToModule(double left, double right,
                                   const GeometricParams& params) {
  return {params.wheel_radius * (left + right) / 2.0,
          params.wheel_radius * (left - right) / (2.0 * params.wheel_offset)};
}

}  // namespace htetro

#endif  // HTETRO_KINEMATICS_H_
