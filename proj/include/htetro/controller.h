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

// Full path-tracking controller: ICR targeting, coordinated steering and
// drive-limit regulation, stepped once per control period.

#ifndef HTETRO_CONTROLLER_H_
#define HTETRO_CONTROLLER_H_

#include "htetro/steering_layer.h"
#include "htetro/velocity_layer.h"

namespace htetro {

enum class SteeringMode {
  kCoordinated,       // all three layers
  kRawPseudoInverse,  // independent per-module steering, pinv speeds
};

struct ControllerConfig {
  HeadingGains heading;
  SteeringGains steering;
  DriveLimits limits;
  double cruise_speed = 0.2;   // m/s
  double approach_gain = 1.0;  // 1/s, speed = min(cruise, gain * distance)
  double lookahead = 0.15;     // m, carrot distance along the segment
  SteeringMode mode = SteeringMode::kCoordinated;

  bool Valid() const;
};

// Straight segment toward a goal pose; the controller tracks a carrot that
// slides along it.
struct Segment {
  Vector2d start;
  Pose goal;
};

struct ControlOutput {
  Pose desired;
  TrackingError error;
  IcrTarget icr;
  SteeringPlan plan;
  Twist body_twist;   // commanded after regulation
  WheelCommand wheels;
  double residual = 0.0;  // concurrency of the steering at the end of the step
  bool moving = false;    // any module speed nonzero
};

// Concurrency residual above which the coordinated controller keeps every
// module speed at zero; wheels only roll while the axes share a center.
inline constexpr double kMotionResidual = 1e-9;

// True when both the measured and the commanded steering sets are concurrent.
bool MotionAllowed(const Morphology& morph, const PerModule<double>& measured,
                   const PerModule<double>& commanded);

// Module speeds for the rigid motion about `icr` (homogeneous, body frame)
// closest to `desired`, projected on each module heading.
PerModule<double> CoordinatedSpeeds(const Morphology& morph,
                                    const Vector3d& icr,
                                    const PerModule<double>& steering,
                                    const Twist& desired);

Pose CarrotOnSegment(const Segment& segment, const Vector2d& position,
                     double lookahead);

class PathTrackingController {
 public:
  PathTrackingController(const Morphology& morph, ControllerConfig config);

  ControlOutput Step(const Pose& observed, const PerModule<double>& measured,
                     const Segment& segment, double dt);

  const ControllerConfig& config() const { return config_; }
  const Morphology& morphology() const { return morph_; }
  void Reset();

 private:
  Morphology morph_;
  ControllerConfig config_;
  IcrLayer icr_layer_;
  SteeringController steering_;
};

}  // namespace htetro

#endif  // HTETRO_CONTROLLER_H_
