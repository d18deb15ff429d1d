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

#include "htetro/steering_layer.h"

#include <limits>

namespace htetro {
namespace {

// Measured axes within this distance of the remembered center keep it.
constexpr double kIcrConsistency = 1e-9;
constexpr double kTinyDirection = 1e-12;
constexpr int kBisectionSteps = 60;
// Tangent magnitudes outside [1e-3, 1e3] use the proportional fallback.
constexpr double kTanFloor = 1e-3;
constexpr double kTanCeiling = 1e3;

// Wheel heading for an axis direction: the axis rotated a quarter turn
// clockwise, i.e. the velocity direction for a counter-clockwise rotation.
double HeadingOf(const Vector2d& axis) { return std::atan2(-axis.x(), axis.y()); }

PerModule<double> Headings(const Morphology& morph,
                           const PerModule<double>& steering) {
  PerModule<double> h;
  for (int i = 0; i < kNumModules; ++i) h[i] = morph.Heading(i, steering[i]);
  return h;
}

int ArgMaxAbs(const PerModule<double>& values) {
  int best = 0;
  for (int i = 1; i < kNumModules; ++i) {
    if (std::abs(values[i]) > std::abs(values[best])) best = i;
  }
  return best;
}

double MaxAbs(const PerModule<double>& values) {
  return std::abs(values[ArgMaxAbs(values)]);
}

double TangentRatio(double from, double step) {
  if (step == 0.0) return 1.0;
  const double t0 = std::tan(from);
  if (std::abs(t0) < kTinyDirection) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::tan(from + step) / t0;
}

// Heading change of every module while the center moves from p0 to p1.
// A module whose measured heading is off the start center's axis by delta
// sheds that offset linearly, so h_i(1) always lands on the target axis.
class IcrPath {
 public:
  IcrPath(const Morphology& morph, const PerModule<double>& start,
          const Vector3d& p0, const Vector3d& p1)
      : start_(start), p0_(p0), p1_(p1) {
    for (int i = 0; i < kNumModules; ++i) {
      from_[i] = AxisDirection(p0, morph.centers[i]);
      to_[i] = AxisDirection(p1, morph.centers[i]);
      double path_heading = start[i];
      if (from_[i].norm() > kTinyDirection) {
        path_heading = HeadingOf(from_[i]);
      } else if (to_[i].norm() > kTinyDirection) {
        path_heading = HeadingOf(to_[i]);
      }
      offset_[i] = WrapHalfTurn(start[i] - path_heading);
    }
  }

  double Change(int i, double s) const {
    double sweep = 0.0;
    if (from_[i].norm() > kTinyDirection) {
      sweep = SignedAngle(from_[i], (1.0 - s) * from_[i] + s * to_[i]);
    }
    return sweep - s * offset_[i];
  }

  PerModule<double> Totals() const {
    PerModule<double> t;
    for (int i = 0; i < kNumModules; ++i) t[i] = Change(i, 1.0);
    return t;
  }

  Vector3d Point(double s) const {
    return ((1.0 - s) * p0_ + s * p1_).normalized();
  }

  double start(int i) const { return start_[i]; }

 private:
  PerModule<double> start_;
  Vector3d p0_;
  Vector3d p1_;
  PerModule<Vector2d> from_;
  PerModule<Vector2d> to_;
  PerModule<double> offset_{};
};

}  // namespace

const char* RegimeName(Regime regime) {
  return regime == Regime::kParallel ? "parallel" : "concurrent";
}

std::optional<Vector2d> ConcurrencyCheck::Point() const {
  if (parallel || std::abs(icr.z()) < kTinyDirection) return std::nullopt;
  return Vector2d(icr.x() / icr.z(), icr.y() / icr.z());
}

ConcurrencyCheck CheckConcurrency(const Morphology& morph,
                                  const PerModule<double>& steering) {
  ConcurrencyCheck check;
  for (int i = 0; i < kNumModules; ++i) {
    check.lines.row(i) =
        MakeWheelAxisLine(morph, i, steering[i]).Homogeneous().transpose();
  }
  const Eigen::JacobiSVD<Eigen::Matrix<double, kNumModules, 3>> svd(
      check.lines, Eigen::ComputeFullV);
  check.residual = svd.singularValues()(2);
  check.icr = svd.matrixV().col(2);

  const Eigen::Matrix<double, kNumModules, 2> normals =
      check.lines.leftCols<2>();
  const Eigen::JacobiSVD<Eigen::Matrix<double, kNumModules, 2>> normal_svd(
      normals, Eigen::ComputeFullV);
  check.direction_residual = normal_svd.singularValues()(1);
  check.parallel = check.direction_residual < kParallelTolerance;
  if (check.parallel) {
    // Common axis direction is the null vector of the normals.
    const Vector2d axis = normal_svd.matrixV().col(1);
    check.icr = Vector3d(axis.x(), axis.y(), 0.0);
  }
  return check;
}

SteeringTarget DesiredSteering(const Morphology& morph,
                               const IcrTarget& target,
                               const PerModule<double>& current) {
  SteeringTarget out;
  const Twist twist = target.BodyTwist();
  const Vector2d drive = target.direction.Unit();
  const double scale = morph.params.module_length;
  for (int i = 0; i < kNumModules; ++i) {
    Vector2d velocity_dir;
    if (target.translation) {
      velocity_dir = drive;
    } else {
      const Vector2d offset = morph.centers[i] - target.Point();
      if (offset.norm() <= kTinyDirection * scale || twist.omega == 0.0) {
        out.steering[i] = current[i];
        out.radius[i] = 0.0;
        out.velocity_sign[i] = 1;
        out.held[i] = true;
        continue;
      }
      velocity_dir = PointVelocity(twist, morph.centers[i]);
    }
    const double raw = morph.Steering(
        i, std::atan2(velocity_dir.y(), velocity_dir.x()));
    const double error = WrapHalfTurn(raw - current[i]);
    out.steering[i] = WrapAngle(current[i] + error);
    out.velocity_sign[i] =
        std::abs(WrapAngle(out.steering[i] - raw)) < kPi / 2.0 ? 1 : -1;
  }
  out.radius = IndividualRadii(morph, target, out.steering);
  return out;
}

PerModule<double> IndividualRadii(const Morphology& morph,
                                  const IcrTarget& target,
                                  const PerModule<double>& desired) {
  PerModule<double> radius{};
  for (int i = 0; i < kNumModules; ++i) {
    const Vector2d heading = UnitVector(morph.Heading(i, desired[i]));
    if (target.translation) {
      // Headings are parallel to the drive direction, so this is +-R_d.
      const bool aligned = target.direction.Unit().dot(heading) >= 0.0;
      radius[i] = aligned ? target.radius : -target.radius;
      continue;
    }
    // v_i = theta_dot * (z x (c_i - ICR)) . h_i
    radius[i] = Perp(morph.centers[i] - target.Point()).dot(heading);
  }
  return radius;
}

Regime ClassifyRegime(const Morphology& morph,
                      const PerModule<double>& current,
                      const IcrTarget& target) {
  if (!target.translation) return Regime::kConcurrent;
  return CheckConcurrency(morph, current).parallel ? Regime::kParallel
                                                   : Regime::kConcurrent;
}

SteeringController::SteeringController(const Morphology& morph,
                                       SteeringGains gains)
    : morph_(morph), gains_(gains), pid_(gains.pid) {}

void SteeringController::Reset() {
  pid_.Reset();
  icr_.reset();
  last_regime_.reset();
  last_reference_ = -1;
  transient_active_ = false;
}

Vector3d SteeringController::CurrentIcr(
    const PerModule<double>& measured) const {
  const ConcurrencyCheck check = CheckConcurrency(morph_, measured);
  if (icr_) {
    const double miss = (check.lines * *icr_).cwiseAbs().maxCoeff();
    if (miss <= kIcrConsistency) return *icr_;
  }
  return check.icr;
}

SteeringPlan SteeringController::Step(const PerModule<double>& measured,
                                      const IcrTarget& target, double dt) {
  const Regime regime = ClassifyRegime(morph_, measured, target);
  if (last_regime_ && *last_regime_ != regime) pid_.Reset();
  last_regime_ = regime;
  if (regime == Regime::kParallel) return StepParallel(measured, target, dt);
  if (gains_.law == TransientLaw::kTangentScaling) {
    return StepTangentScaling(measured, target, dt);
  }
  return StepIcrPath(measured, target, dt);
}

SteeringPlan SteeringController::StepParallel(
    const PerModule<double>& measured, const IcrTarget& target, double dt) {
  SteeringPlan plan;
  plan.regime = Regime::kParallel;
  const PerModule<double> h = Headings(morph_, measured);
  const Vector2d drive = target.direction.Unit();
  const double goal = std::atan2(drive.y(), drive.x());
  for (int i = 0; i < kNumModules; ++i) plan.error[i] = WrapHalfTurn(goal - h[i]);
  plan.reference = ArgMaxAbs(plan.error);
  if (plan.reference != last_reference_) pid_.Reset();
  last_reference_ = plan.reference;

  const double error = plan.error[plan.reference];
  const double step =
      ParallelRate(error, pid_, dt, gains_.max_rate) * dt;
  const bool snap = std::abs(error) <= gains_.arrival_tolerance ||
                    std::abs(step) >= std::abs(error);
  for (int i = 0; i < kNumModules; ++i) {
    const double delta = snap ? plan.error[i] : step;
    plan.rate[i] = delta / dt;
    plan.steering_next[i] = WrapAngle(measured[i] + delta);
    plan.desired[i] = WrapAngle(measured[i] + plan.error[i]);
  }
  const double new_heading = h[0] + (snap ? plan.error[0] : step);
  const Vector2d axis = Perp(UnitVector(new_heading));
  plan.icr_next = Vector3d(axis.x(), axis.y(), 0.0);
  plan.lambda = TangentRatio(h[plan.reference],
                             snap ? plan.error[plan.reference] : step);
  plan.progress = snap ? 1.0 : step / error;
  plan.arrived = snap;
  icr_ = plan.icr_next;
  return plan;
}

SteeringPlan SteeringController::StepIcrPath(const PerModule<double>& measured,
                                             const IcrTarget& target,
                                             double dt) {
  SteeringPlan plan;
  plan.regime = Regime::kConcurrent;
  const PerModule<double> h = Headings(morph_, measured);
  const Vector3d p0 = CurrentIcr(measured);
  const Vector3d p1 = target.Homogeneous();

  // The two projective segments between p0 and p1; take the one with the
  // smaller worst-case steering travel.
  const IcrPath direct(morph_, h, p0, p1);
  const IcrPath flipped(morph_, h, p0, -p1);
  const bool use_direct = MaxAbs(direct.Totals()) <= MaxAbs(flipped.Totals());
  const IcrPath& path = use_direct ? direct : flipped;

  plan.error = path.Totals();
  plan.reference = ArgMaxAbs(plan.error);
  if (plan.reference != last_reference_) pid_.Reset();
  last_reference_ = plan.reference;
  const int m = plan.reference;
  const double error = plan.error[m];

  double s = 1.0;
  if (std::abs(error) > gains_.arrival_tolerance) {
    const double step = pid_.Update(error, dt, gains_.max_rate) * dt;
    if (std::abs(step) < std::abs(error)) {
      // Reference heading change is monotone enough along the path for a
      // bracketing search: g(0) = -step, g(1) = error - step.
      double lo = 0.0;
      double hi = 1.0;
      for (int k = 0; k < kBisectionSteps; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double g = path.Change(m, mid) - step;
        if ((g < 0.0) == (step > 0.0)) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      s = lo;
    }
  }

  // Followers may sweep faster than the reference mid-path; shrink the step
  // until every module respects the rate limit.
  const double max_step = gains_.max_rate * dt * (1.0 + 1e-12);
  auto within_limit = [&](double t) {
    for (int i = 0; i < kNumModules; ++i) {
      if (std::abs(path.Change(i, t)) > max_step) return false;
    }
    return true;
  };
  if (!within_limit(s)) {
    double lo = 0.0;
    double hi = s;
    for (int k = 0; k < kBisectionSteps; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (within_limit(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    s = lo;
  }

  for (int i = 0; i < kNumModules; ++i) {
    const double delta = path.Change(i, s);
    plan.rate[i] = delta / dt;
    plan.steering_next[i] = WrapAngle(measured[i] + delta);
    plan.desired[i] = WrapAngle(measured[i] + plan.error[i]);
  }
  plan.progress = s;
  plan.arrived = s == 1.0;
  plan.icr_next = path.Point(s);
  plan.lambda = TangentRatio(h[m], path.Change(m, s));
  icr_ = plan.icr_next;
  return plan;
}

SteeringPlan SteeringController::StepTangentScaling(
    const PerModule<double>& measured, const IcrTarget& target, double dt) {
  SteeringPlan plan;
  plan.regime = Regime::kConcurrent;
  const PerModule<double> h = Headings(morph_, measured);
  const SteeringTarget goal = DesiredSteering(morph_, target, measured);
  PerModule<double> desired_heading;
  for (int i = 0; i < kNumModules; ++i) {
    desired_heading[i] = morph_.Heading(i, goal.steering[i]);
    plan.error[i] = goal.held[i] ? 0.0 : WrapHalfTurn(desired_heading[i] - h[i]);
    plan.desired[i] = goal.steering[i];
  }

  bool target_moved = !transient_active_;
  for (int i = 0; i < kNumModules && !target_moved; ++i) {
    target_moved = std::abs(WrapHalfTurn(desired_heading[i] -
                                         anchor_desired_[i])) >
                   gains_.arrival_tolerance;
  }
  if (target_moved) {
    anchor_initial_ = h;
    anchor_desired_ = desired_heading;
    initial_max_error_ = MaxAbs(plan.error);
    transient_active_ = true;
  }

  plan.reference = ArgMaxAbs(plan.error);
  if (plan.reference != last_reference_) pid_.Reset();
  last_reference_ = plan.reference;
  const int m = plan.reference;
  const double error = plan.error[m];

  PerModule<double> delta = plan.error;
  bool snap = std::abs(error) <= gains_.arrival_tolerance;
  double ref_step = error;
  if (!snap) {
    ref_step = pid_.Update(error, dt, gains_.max_rate) * dt;
    snap = std::abs(ref_step) >= std::abs(error);
  }
  if (!snap) {
    // Departing the initial set anchors on it; the last half of the travel
    // anchors on the desired set.
    const bool departing = MaxAbs(plan.error) > initial_max_error_ / 2.0;
    const PerModule<double>& anchor =
        departing ? anchor_initial_ : anchor_desired_;
    const double ref_tan = std::tan(anchor[m]);
    const bool ref_regular =
        std::abs(ref_tan) >= kTanFloor && std::abs(ref_tan) <= kTanCeiling;
    auto followers = [&](double step, PerModule<double>* out) {
      const double ratio = step / error;
      const double lambda =
          ref_regular ? std::tan(h[m] + step) / ref_tan : 1.0;
      for (int i = 0; i < kNumModules; ++i) {
        if (i == m) {
          (*out)[i] = step;
          continue;
        }
        const double t = std::tan(anchor[i]);
        double d = plan.error[i] * ratio;
        if (ref_regular && std::abs(t) >= kTanFloor &&
            std::abs(t) <= kTanCeiling) {
          d = WrapHalfTurn(std::atan(lambda * t) - h[i]);
          // Off the scaled family the candidate can point away from the
          // target; fall back to the proportional step there.
          if (d * plan.error[i] < 0.0) d = plan.error[i] * ratio;
        }
        // Stop exactly at the target instead of running past it.
        if (d * plan.error[i] > 0.0 && std::abs(d) > std::abs(plan.error[i])) {
          d = plan.error[i];
        }
        (*out)[i] = d;
      }
      return lambda;
    };
    // A follower may need a larger increment than the reference; shorten
    // the reference step until every module fits the rate limit so the set
    // stays on one scaled family.
    const double max_step = gains_.max_rate * dt;
    double lambda = followers(ref_step, &delta);
    if (MaxAbs(delta) > max_step * (1.0 + 1e-12)) {
      double lo = 0.0;
      double hi = 1.0;
      for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        PerModule<double> trial;
        followers(mid * ref_step, &trial);
        (MaxAbs(trial) <= max_step ? lo : hi) = mid;
      }
      ref_step *= lo;
      lambda = followers(ref_step, &delta);
    }
    const double ratio = ref_step / error;
    plan.lambda = ref_regular ? lambda : std::numeric_limits<double>::quiet_NaN();
    plan.progress = ratio;
  } else {
    plan.lambda = TangentRatio(h[m], error);
    plan.progress = 1.0;
    transient_active_ = false;
  }

  for (int i = 0; i < kNumModules; ++i) {
    plan.rate[i] = delta[i] / dt;
    plan.steering_next[i] = WrapAngle(measured[i] + delta[i]);
  }
  plan.arrived = snap;
  plan.icr_next = CheckConcurrency(morph_, plan.steering_next).icr;
  icr_ = plan.icr_next;
  return plan;
}

}  // namespace htetro
