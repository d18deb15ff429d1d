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

// Batch audits and multi-shape runs. Each kernel has a serial reference and
// an OpenMP version; both return identical results for identical inputs
// because every sample is independent and seeded up front.

#ifndef HTETRO_BATCH_H_
#define HTETRO_BATCH_H_

#include <cstdint>
#include <vector>

#include "htetro/shape_relation.h"
#include "htetro/simulator.h"

namespace htetro {

enum class Execution { kSerial, kParallel };

std::vector<Twist> RandomTwists(int count, std::uint64_t seed);

// Largest |twist - FK(IK(twist))| over all twists.
double RoundTripError(const Morphology& morph, const std::vector<Twist>& twists,
                      Execution execution);

// Random ICR target with speed in [0, 0.3] m/s and heading rate in
// [-3, 3] rad/s; about one in five is a pure translation.
IcrTarget RandomIcrTarget(std::mt19937_64& rng, double max_radius);

struct TransientSample {
  IcrTarget start;
  IcrTarget target;
  PerModule<double> branch_hint{};  // picks the initial beta / beta + pi
};

std::vector<TransientSample> RandomTransients(int count, std::uint64_t seed,
                                              double max_radius);

struct TransientResult {
  double max_residual = 0.0;  // over steps with any module moving
  double final_error = 0.0;   // largest |beta_i - beta_{i,d}| at the end
  int steps = 0;
  bool arrived = false;
  bool simultaneous = false;  // every moving module settled on the same step
};

// Drives the steering from the start center to the target center with the
// coordinated law and the drive-limit regulation, up to `max_steps`.
// `perturbation` is a fixed encoder offset on module 0: its physical angle
// differs from the measured one by this amount and the controller cannot see
// it. It exists to exercise the failure reporting of the audit.
TransientResult RunTransient(const Morphology& morph,
                             const TransientSample& sample,
                             const ControllerConfig& config, double dt,
                             int max_steps, double perturbation = 0.0);

std::vector<TransientResult> AuditTransients(
    const Morphology& morph, const std::vector<TransientSample>& samples,
    const ControllerConfig& config, double dt, int max_steps,
    Execution execution, double perturbation = 0.0);

// Largest normalized residual of `relation` over desired steering sets of the
// given targets; +inf when the shape has no relation.
double RelationAudit(const Morphology& morph, const ShapeRelation& relation,
                     const std::vector<IcrTarget>& targets,
                     Execution execution);

std::vector<TrajectoryLog> RunShapes(const std::vector<Shape>& shapes,
                                     const std::vector<Waypoint>& waypoints,
                                     const SimConfig& config,
                                     const GeometricParams& params,
                                     Execution execution);

}  // namespace htetro

#endif  // HTETRO_BATCH_H_
