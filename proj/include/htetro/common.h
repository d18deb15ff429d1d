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

#ifndef HTETRO_COMMON_H_
#define HTETRO_COMMON_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace htetro {

inline constexpr int kNumModules = 4;
inline constexpr double kPi = std::numbers::pi;

template <typename T>
using PerModule = std::array<T, kNumModules>;

using Vector2d = Eigen::Vector2d;
using Vector3d = Eigen::Vector3d;

// Wraps an angle to (-pi, pi].
inline double WrapAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

// Wraps an angle to (-pi/2, pi/2]; used wherever a direction and its
// opposite are equivalent (axis lines, steerable wheels with sign flip).
inline double WrapHalfTurn(double angle) {
  double wrapped = std::remainder(angle, kPi);
  if (wrapped <= -kPi / 2.0) wrapped += kPi;
  return wrapped;
}

inline double Cross(const Vector2d& a, const Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Signed angle that rotates `from` onto `to`, in (-pi, pi].
inline double SignedAngle(const Vector2d& from, const Vector2d& to) {
  return std::atan2(Cross(from, to), from.dot(to));
}

inline Vector2d UnitVector(double angle) {
  return {std::cos(angle), std::sin(angle)};
}

// Counter-clockwise quarter turn.
inline Vector2d Perp(const Vector2d& v) { return {-v.y(), v.x()}; }

inline double Clamp(double value, double limit) {
  return std::clamp(value, -limit, limit);
}

// Proportional-integral-derivative law with output clamp and
// conditional-integration anti-windup.
struct PidGains {
  double kp = 1.0;
  double ki = 0.0;
  double kd = 0.0;
};

class Pid {
 public:
  Pid() = default;
  explicit Pid(PidGains gains) : gains_(gains) {}

  double Update(double error, double dt, double output_limit) {
    const double derivative =
        has_previous_ && dt > 0.0 ? (error - previous_error_) / dt : 0.0;
    const double candidate_integral = integral_ + error * dt;
    const double unclamped = gains_.kp * error +
                             gains_.ki * candidate_integral +
                             gains_.kd * derivative;
    const double output = Clamp(unclamped, output_limit);
    // Only integrate while the output is not pinned against the clamp.
    if (output == unclamped) integral_ = candidate_integral;
    previous_error_ = error;
    has_previous_ = true;
    return output;
  }

  void Reset() {
    integral_ = 0.0;
    previous_error_ = 0.0;
    has_previous_ = false;
  }

  const PidGains& gains() const { return gains_; }

 private:
  PidGains gains_;
  double integral_ = 0.0;
  double previous_error_ = 0.0;
  bool has_previous_ = false;
};

}  // namespace htetro

#endif  // HTETRO_COMMON_H_
