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

// Tetromino morphologies of the four-module robot.
//
// Conventions:
// - Body frame origin is the centroid of the four steering axes; +x is the
//   forward direction of module 2's chassis, +y is to its left.
// - Module indices are 0-based in code (module 1 of the chain is index 0).
// - A module heading is the absolute body-frame direction of its wheel plane,
//   heading = steering + hinge_offset.

#ifndef HTETRO_GEOMETRY_H_
#define HTETRO_GEOMETRY_H_

#include <optional>
#include <string>
#include <string_view>

#include "htetro/common.h"

namespace htetro {

enum class Shape { kI, kL, kZ, kO, kT, kS, kJ };

inline constexpr std::array<Shape, 7> kAllShapes = {
    Shape::kI, Shape::kL, Shape::kZ, Shape::kO,
    Shape::kT, Shape::kS, Shape::kJ};

// Accepts a single letter, case-insensitive.
std::optional<Shape> ParseShape(std::string_view name);
char ShapeLetter(Shape shape);

struct GeometricParams {
  double wheel_radius = 0.03;   // r_w (m)
  double wheel_offset = 0.05;   // d, wheel to steering axis (m)
  double module_length = 0.25;  // l, cell pitch (m)

  // All positive and the wheels inside the module footprint (d < l/2).
  bool Valid() const;
};

struct Morphology {
  Shape shape = Shape::kO;
  GeometricParams params;
  PerModule<Vector2d> centers;    // steering axes in the body frame (m)
  PerModule<double> hinge_offset; // alpha_j(i): {a1, 0, a2, a2 + a3}

  double Heading(int module, double steering) const {
    return steering + hinge_offset[module];
  }
  double Steering(int module, double heading) const {
    return WrapAngle(heading - hinge_offset[module]);
  }
  // Sum of squared distances of the steering axes from the centroid.
  double PolarMoment() const;
};

// Places the tetromino cells on a grid of pitch l with the centroid of the
// module centers at the body origin. Throws std::invalid_argument when
// `params` is not Valid().
Morphology BuildMorphology(Shape shape, const GeometricParams& params = {});

// Line through a module center perpendicular to its wheel plane, in the
// normalized form normal.dot(p) = offset with the normal along the heading.
struct WheelAxisLine {
  Vector2d normal;
  double offset = 0.0;

  double SignedDistance(const Vector2d& p) const {
    return normal.dot(p) - offset;
  }
  // Coefficients (n_x, n_y, -c) so that Homogeneous().dot((x, y, 1)) = 0.
  Vector3d Homogeneous() const { return {normal.x(), normal.y(), -offset}; }
};

WheelAxisLine MakeWheelAxisLine(const Morphology& morph, int module,
                                double steering);

// Half the spread of the module centers projected on the direction normal to
// the driving angle. Falls back to the module track d when the spread is
// zero (all modules on the driving axis).
double EquivalentTrack(const Morphology& morph, double driving_angle);

}  // namespace htetro

#endif  // HTETRO_GEOMETRY_H_
