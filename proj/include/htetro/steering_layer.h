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

// Second control layer: desired steering per module and the transient that
// moves the four wheel axes from their current intersection to the target
// one without ever leaving the concurrent (no-skid) set.
//
// The instantaneous center is handled as a homogeneous point p = (x, y, w):
// w = 0 encodes the parallel (pure translation) case, so both regimes share
// one representation. The transient walks p along the projective segment
// from the current to the target center; every intermediate p is a valid
// common intersection, so the commanded axes are concurrent at every step by
// construction.

#ifndef HTETRO_STEERING_LAYER_H_
#define HTETRO_STEERING_LAYER_H_

#include <Eigen/Dense>

#include "htetro/icr_layer.h"

namespace htetro {

enum class Regime { kParallel, kConcurrent };
const char* RegimeName(Regime regime);

struct ConcurrencyCheck {
  Eigen::Matrix<double, kNumModules, 3> lines;  // rows (n_x, n_y, -c)
  double residual = 0.0;  // smallest singular value of `lines`
  double direction_residual = 0.0;  // second singular value of the normals
  Vector3d icr;           // unit least-squares intersection (x, y, w)
  bool parallel = false;  // all normals collinear

  // Finite intersection, if the axes are not parallel.
  std::optional<Vector2d> Point() const;
};

inline constexpr double kParallelTolerance = 1e-9;

ConcurrencyCheck CheckConcurrency(const Morphology& morph,
                                  const PerModule<double>& steering);

// Direction from a module center toward the homogeneous center `icr`; zero
// when the center sits on the steering axis.
inline Vector2d AxisDirection(const Vector3d& icr, const Vector2d& center) {
  return {icr.x() - icr.z() * center.x(), icr.y() - icr.z() * center.y()};
}

struct SteeringTarget {
  PerModule<double> steering{};  // beta_{i,d}, nearest branch to the current
  PerModule<double> radius{};    // signed r_i with v_i = r_i * theta_dot_d
  PerModule<int> velocity_sign{};  // -1 where the flipped branch was chosen
  PerModule<bool> held{};        // module on the instantaneous center
};

// Steering that puts every wheel axis through the target center. Each module
// picks the representative (beta or beta + pi with negated speed) closest to
// `current`.
SteeringTarget DesiredSteering(const Morphology& morph,
                               const IcrTarget& target,
                               const PerModule<double>& current);

// Signed individual radii for a desired steering set.
PerModule<double> IndividualRadii(const Morphology& morph,
                                  const IcrTarget& target,
                                  const PerModule<double>& desired);

// Parallel iff the target is a translation and the current axes are parallel.
Regime ClassifyRegime(const Morphology& morph,
                      const PerModule<double>& current,
                      const IcrTarget& target);

// Shared steering rate for the parallel regime.
inline double ParallelRate(double heading_error, Pid& pid, double dt,
                           double max_rate) {
  return pid.Update(heading_error, dt, max_rate);
}

enum class TransientLaw {
  kIcrPath,         // walk the center along the projective segment
  kTangentScaling,  // follower tan(h) = lambda * tan(anchor), reference-led
};

struct SteeringGains {
  PidGains pid{10.0, 0.0, 0.0};
  double max_rate = 2.0 * kPi;       // rad/s
  double arrival_tolerance = 1e-4;   // rad
  TransientLaw law = TransientLaw::kIcrPath;

  bool Valid() const {
    return pid.kp > 0.0 && max_rate > 0.0 && arrival_tolerance > 0.0;
  }
};

struct SteeringPlan {
  Regime regime = Regime::kConcurrent;
  int reference = 0;      // module with the largest remaining error
  double lambda = 1.0;    // tan(h_m + step) / tan(h_m) of the reference
  double progress = 0.0;  // fraction of the remaining transient taken
  bool arrived = false;   // all modules at their targets after this step
  PerModule<double> rate{};           // beta_dot_i (rad/s)
  PerModule<double> steering_next{};  // beta_i + beta_dot_i * dt
  PerModule<double> desired{};        // transient end point beta_{i,d}
  PerModule<double> error{};          // remaining error before this step
  Vector3d icr_next = Vector3d::UnitX();  // center after the step
};

class SteeringController {
 public:
  SteeringController(const Morphology& morph, SteeringGains gains);

  SteeringPlan Step(const PerModule<double>& measured,
                    const IcrTarget& target, double dt);

  // Overrides the rate limit (the velocity layer may tighten it).
  void set_max_rate(double max_rate) { gains_.max_rate = max_rate; }
  const SteeringGains& gains() const { return gains_; }
  void Reset();

 private:
  Vector3d CurrentIcr(const PerModule<double>& measured) const;
  SteeringPlan StepParallel(const PerModule<double>& measured,
                            const IcrTarget& target, double dt);
  SteeringPlan StepIcrPath(const PerModule<double>& measured,
                           const IcrTarget& target, double dt);
  SteeringPlan StepTangentScaling(const PerModule<double>& measured,
                                  const IcrTarget& target, double dt);

  Morphology morph_;
  SteeringGains gains_;
  Pid pid_;
  std::optional<Vector3d> icr_;
  std::optional<Regime> last_regime_;
  int last_reference_ = -1;

  // Tangent-scaling transient bookkeeping.
  bool transient_active_ = false;
  PerModule<double> anchor_initial_{};
  PerModule<double> anchor_desired_{};
  double initial_max_error_ = 0.0;
};

}  // namespace htetro

#endif  // HTETRO_STEERING_LAYER_H_
