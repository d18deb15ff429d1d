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

#include "htetro/kinematics.h"

namespace htetro {

Twist ToWorld(const Twist& body, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * body.vx - s * body.vy, s * body.vx + c * body.vy, body.omega,
          Frame::kWorld};
}

Twist ToBody(const Twist& world, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * world.vx + s * world.vy, -s * world.vx + c * world.vy,
          world.omega, Frame::kBody};
}

double WheelRates::MaxAbs() const {
  double m = 0.0;
  for (int i = 0; i < kNumModules; ++i) {
    m = std::max({m, std::abs(left[i]), std::abs(right[i])});
  }
  return m;
}

Eigen::Matrix<double, 3, kNumModules> ModuleMap(
    const Morphology& morph, const PerModule<double>& steering) {
  Eigen::Matrix<double, 3, kNumModules> g;
  const double moment = morph.PolarMoment();
  for (int i = 0; i < kNumModules; ++i) {
    const Vector2d h = UnitVector(morph.Heading(i, steering[i]));
    g(0, i) = h.x() / kNumModules;
    g(1, i) = h.y() / kNumModules;
    g(2, i) = Perp(morph.centers[i]).dot(h) / moment;
  }
  return g;
}

Twist ForwardKinematics(const Morphology& morph, const ModuleVelocities& mv,
                        double theta) {
  const Eigen::Vector4d v(mv.speed[0], mv.speed[1], mv.speed[2], mv.speed[3]);
  const Vector3d body = ModuleMap(morph, mv.steering) * v;
  return ToWorld({body.x(), body.y(), body.z(), Frame::kBody}, theta);
}

ModuleVelocities InverseKinematics(const Morphology& morph, const Twist& body,
                                   const PerModule<double>& steering_hint) {
  ModuleVelocities mv;
  for (int i = 0; i < kNumModules; ++i) {
    const Vector2d u = PointVelocity(body, morph.centers[i]);
    const double speed = u.norm();
    if (speed == 0.0) {
      mv.steering[i] = steering_hint[i];
      mv.speed[i] = 0.0;
      continue;
    }
    mv.steering[i] = morph.Steering(i, std::atan2(u.y(), u.x()));
    mv.speed[i] = speed;
  }
  return mv;
}

PerModule<double> PseudoInverseSpeeds(const Morphology& morph,
                                      const PerModule<double>& steering,
                                      const Twist& body) {
  const Eigen::Matrix<double, 3, kNumModules> g = ModuleMap(morph, steering);
  const Eigen::Matrix<double, kNumModules, 3> pinv =
      g.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::Vector4d v = pinv * body.AsVector();
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace htetro
