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

#ifndef HTETRO_VELOCITY_LAYER_H_
#define HTETRO_VELOCITY_LAYER_H_

#include "htetro/icr_layer.h"

namespace htetro {

struct DriveLimits {
  double max_wheel_rate = 20.0;  // rad/s

  bool Valid() const { return max_wheel_rate > 0.0; }
};

// Largest steering rate a module can reach with both wheels at the limit.
inline double SteeringRateCeiling(const GeometricParams& params,
                                  const DriveLimits& limits) {
  return limits.max_wheel_rate * params.wheel_radius / params.wheel_offset;
}

// Module speeds for a settled steering set: r_i * theta_dot_d around a finite
// center, (r_i / R_d) * s|v_d| for translation.
PerModule<double> ModuleSpeeds(const PerModule<double>& radii,
                               const IcrTarget& target);

struct WheelCommand {
  WheelRates rates;
  PerModule<double> speed{};          // after regulation
  PerModule<double> steering_rate{};  // after regulation
  double speed_scale = 1.0;     // uniform factor on every v_i
  double steering_scale = 1.0;  // uniform factor on every beta_dot_i
  double effective_kp = 0.0;    // nominal heading gain times speed_scale
  bool saturated = false;           // translation was scaled down
  bool steering_saturated = false;  // steering alone exceeded the limit
};

// Differential-drive wheel rates with the drive limit enforced. Translation
// is scaled uniformly first, which leaves every v_i / v_j ratio and so the
// commanded center unchanged; steering rates are only touched when they
// alone exceed the limit.
WheelCommand RegulateWheels(const PerModule<double>& speed,
                            const PerModule<double>& steering_rate,
                            const GeometricParams& params,
                            const DriveLimits& limits, double nominal_kp);

}  // namespace htetro

#endif  // HTETRO_VELOCITY_LAYER_H_
