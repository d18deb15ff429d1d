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

#include "htetro/batch.h"

#include <cmath>
#include <limits>

namespace htetro {
namespace {

double TwistError(const Morphology& morph, const Twist& body) {
  const ModuleVelocities mv = InverseKinematics(morph, body);
  const Twist back = ToBody(ForwardKinematics(morph, mv, 0.0), 0.0);
  return (back.AsVector() - body.AsVector()).cwiseAbs().maxCoeff();
}

double RelationResidualFor(const Morphology& morph,
                           const ShapeRelation& relation,
                           const IcrTarget& target) {
  const SteeringTarget desired = DesiredSteering(morph, target, {});
  PerModule<double> headings{};
  for (int i = 0; i < kNumModules; ++i) {
    headings[i] = morph.Heading(i, desired.steering[i]);
  }
  double worst = 0.0;
  for (const auto& c : relation.basis) {
    worst = std::max(worst, RelationResidual(c, headings));
  }
  return worst;
}

}  // namespace

std::vector<Twist> RandomTwists(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> linear(-1.0, 1.0);
  std::uniform_real_distribution<double> angular(-3.0, 3.0);
  std::vector<Twist> twists(count);
  for (Twist& t : twists) {
    t.vx = linear(rng);
    t.vy = linear(rng);
    t.omega = angular(rng);
  }
  return twists;
}

double RoundTripError(const Morphology& morph, const std::vector<Twist>& twists,
                      Execution execution) {
  const auto n = static_cast<std::int64_t>(twists.size());
  double worst = 0.0;
  if (execution == Execution::kSerial) {
    for (std::int64_t k = 0; k < n; ++k) {
      worst = std::max(worst, TwistError(morph, twists[k]));
    }
    return worst;
  }
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    worst = std::max(worst, TwistError(morph, twists[k]));
  }
  return worst;
}

IcrTarget RandomIcrTarget(std::mt19937_64& rng, double max_radius) {
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  std::uniform_real_distribution<double> speed(0.0, 0.3);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DrivingDirection dir;
  dir.angle = angle(rng);
  dir.sign = unit(rng) < 0.5 ? 1 : -1;
  const double v = speed(rng);
  const double w = unit(rng) < 0.2 ? 0.0 : rate(rng);
  return MakeIcrTarget(dir, v, w, max_radius);
}

std::vector<TransientSample> RandomTransients(int count, std::uint64_t seed,
                                              double max_radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> hint(-kPi, kPi);
  std::vector<TransientSample> samples(count);
  for (TransientSample& s : samples) {
    s.start = RandomIcrTarget(rng, max_radius);
    s.target = RandomIcrTarget(rng, max_radius);
    for (double& h : s.branch_hint) h = hint(rng);
  }
  return samples;
}

TransientResult RunTransient(const Morphology& morph,
                             const TransientSample& sample,
                             const ControllerConfig& config, double dt,
                             int max_steps, double perturbation) {
  SteeringController steering(morph, config.steering);
  steering.set_max_rate(std::min(config.steering.max_rate,
                                 SteeringRateCeiling(morph.params,
                                                     config.limits)));
  PerModule<double> measured =
      DesiredSteering(morph, sample.start, sample.branch_hint).steering;
  const Twist desired_twist = sample.target.BodyTwist();

  TransientResult result;
  std::vector<PerModule<double>> history{measured};
  for (int k = 0; k < max_steps; ++k) {
    const SteeringPlan plan = steering.Step(measured, sample.target, dt);
    PerModule<double> speeds{};
    if (MotionAllowed(morph, measured, plan.steering_next)) {
      speeds = CoordinatedSpeeds(morph, plan.icr_next, plan.steering_next,
                                 desired_twist);
    }
    const WheelCommand cmd = RegulateWheels(speeds, plan.rate, morph.params,
                                            config.limits,
                                            config.heading.pid.kp);
    bool moving = false;
    for (double v : cmd.speed) moving = moving || v != 0.0;
    for (int i = 0; i < kNumModules; ++i) {
      measured[i] = WrapAngle(measured[i] + cmd.steering_rate[i] * dt);
    }
    if (moving) {
      PerModule<double> physical = measured;
      physical[0] = WrapAngle(physical[0] + perturbation);
      result.max_residual =
          std::max({result.max_residual,
                    CheckConcurrency(morph, plan.steering_next).residual,
                    CheckConcurrency(morph, physical).residual});
    }
    history.push_back(measured);
    ++result.steps;
    if (plan.arrived && !cmd.steering_saturated) {
      result.arrived = true;
      break;
    }
  }

  const SteeringTarget goal =
      DesiredSteering(morph, sample.target, measured);
  PerModule<int> settled{};
  for (int i = 0; i < kNumModules; ++i) {
    result.final_error = std::max(
        result.final_error,
        std::abs(WrapHalfTurn(goal.steering[i] - measured[i])));
    // First step after which the module never leaves its final angle.
    for (int k = static_cast<int>(history.size()) - 1; k >= 0; --k) {
      if (std::abs(WrapAngle(history[k][i] - measured[i])) > 1e-9) {
        settled[i] = k + 1;
        break;
      }
    }
  }
  int reference = 0;
  for (int s : settled) reference = std::max(reference, s);
  result.simultaneous = true;
  for (int s : settled) {
    if (s != 0 && s != reference) result.simultaneous = false;
  }
  result.arrived =
      result.arrived && result.final_error <= config.steering.arrival_tolerance;
  return result;
}

std::vector<TransientResult> AuditTransients(
    const Morphology& morph, const std::vector<TransientSample>& samples,
    const ControllerConfig& config, double dt, int max_steps,
    Execution execution, double perturbation) {
  const auto n = static_cast<std::int64_t>(samples.size());
  std::vector<TransientResult> results(samples.size());
  if (execution == Execution::kSerial) {
    for (std::int64_t k = 0; k < n; ++k) {
      results[k] = RunTransient(morph, samples[k], config, dt, max_steps,
                                perturbation);
    }
    return results;
  }
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t k = 0; k < n; ++k) {
    results[k] = RunTransient(morph, samples[k], config, dt, max_steps,
                              perturbation);
  }
  return results;
}

double RelationAudit(const Morphology& morph, const ShapeRelation& relation,
                     const std::vector<IcrTarget>& targets,
                     Execution execution) {
  if (!relation.Exists()) return std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::int64_t>(targets.size());
  double worst = 0.0;
  if (execution == Execution::kSerial) {
    for (std::int64_t k = 0; k < n; ++k) {
      worst = std::max(worst, RelationResidualFor(morph, relation, targets[k]));
    }
    return worst;
  }
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t k = 0; k < n; ++k) {
    worst = std::max(worst, RelationResidualFor(morph, relation, targets[k]));
  }
  return worst;
}

std::vector<TrajectoryLog> RunShapes(const std::vector<Shape>& shapes,
                                     const std::vector<Waypoint>& waypoints,
                                     const SimConfig& config,
                                     const GeometricParams& params,
                                     Execution execution) {
  const auto n = static_cast<std::int64_t>(shapes.size());
  std::vector<TrajectoryLog> logs(shapes.size());
  if (execution == Execution::kSerial) {
    for (std::int64_t k = 0; k < n; ++k) {
      logs[k] = RunWaypoints(BuildMorphology(shapes[k], params), waypoints,
                             config);
    }
    return logs;
  }
  // Exceptions must not escape an OpenMP region; the inputs are validated
  // here so the workers cannot throw.
  bool valid = !waypoints.empty() && config.Valid() && params.Valid();
  for (const Waypoint& w : waypoints) valid = valid && w.Valid();
  if (!valid) {
    return RunShapes(shapes, waypoints, config, params, Execution::kSerial);
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < n; ++k) {
    logs[k] = RunWaypoints(BuildMorphology(shapes[k], params), waypoints,
                           config);
  }
  return logs;
}

}  // namespace htetro
