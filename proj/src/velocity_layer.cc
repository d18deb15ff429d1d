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

#include "htetro/velocity_layer.h"

namespace htetro {

PerModule<double> ModuleSpeeds(const PerModule<double>& radii,
                               const IcrTarget& target) {
  PerModule<double> v{};
  for (int i = 0; i < kNumModules; ++i) {
    if (target.translation) {
      v[i] = radii[i] / target.radius * target.direction.sign * target.speed;
    } else {
      v[i] = radii[i] * target.heading_rate;
    }
  }
  return v;
}

WheelCommand RegulateWheels(const PerModule<double>& speed,
                            const PerModule<double>& steering_rate,
                            const GeometricParams& params,
                            const DriveLimits& limits, double nominal_kp) {
  WheelCommand cmd;
  cmd.speed = speed;
  cmd.steering_rate = steering_rate;
  const double rim_limit = limits.max_wheel_rate * params.wheel_radius;
  const double d = params.wheel_offset;

  double raw = 0.0;
  double spin = 0.0;
  for (int i = 0; i < kNumModules; ++i) {
    raw = std::max(raw, std::abs(speed[i]) + d * std::abs(steering_rate[i]));
    spin = std::max(spin, d * std::abs(steering_rate[i]));
  }

  if (raw > rim_limit) {
    if (spin > rim_limit) {
      cmd.steering_saturated = true;
      cmd.steering_scale = rim_limit / spin;
      for (auto& rate : cmd.steering_rate) rate *= cmd.steering_scale;
    }
    // A module whose spin alone uses the whole rim budget leaves none for
    // translation.
    double scale = cmd.steering_saturated ? 0.0 : 1.0;
    for (int i = 0; i < kNumModules; ++i) {
      if (speed[i] == 0.0) continue;
      const double budget =
          std::max(0.0, rim_limit - d * std::abs(cmd.steering_rate[i]));
      scale = std::min(scale, budget / std::abs(speed[i]));
    }
    cmd.saturated = scale < 1.0;
    cmd.speed_scale = scale;
    for (auto& v : cmd.speed) v *= scale;
  }

  for (int i = 0; i < kNumModules; ++i) {
    const WheelPair w = ModuleToWheels(cmd.speed[i], cmd.steering_rate[i], params);
    cmd.rates.left[i] = w.left;
    cmd.rates.right[i] = w.right;
  }
  cmd.effective_kp = nominal_kp * cmd.speed_scale;
  return cmd;
}

}  // namespace htetro
