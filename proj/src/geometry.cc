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

#include "htetro/geometry.h"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace htetro {
namespace {

struct ShapeLayout {
  // Cell coordinates in units of the module pitch, chain order 1..4.
  std::array<std::array<int, 2>, kNumModules> cells;
  // Hinge angles {a1, a2, a3} in quarter turns.
  std::array<int, 3> hinge_quarter_turns;
};

// Cell placements follow the usual per-shape coordinate relations wherever
// those are compatible with a centered tetromino.
ShapeLayout LayoutFor(Shape shape) {
  switch (shape) {
    case Shape::kI:
      return {{{{0, 3}, {0, 2}, {0, 1}, {0, 0}}}, {0, 0, 0}};
    case Shape::kL:  // column 1-2-3, foot beside module 1 on the left
      return {{{{1, 2}, {1, 1}, {1, 0}, {0, 2}}}, {0, 0, 1}};
    case Shape::kZ:
      return {{{{0, 1}, {1, 1}, {1, 0}, {2, 0}}}, {0, -1, 1}};
    case Shape::kO:
      return {{{{1, 1}, {1, 0}, {0, 0}, {0, 1}}}, {0, -1, -1}};
    case Shape::kT:  // column 1-3-4, module 2 is the stub
      return {{{{1, 2}, {0, 1}, {1, 1}, {1, 0}}}, {1, 1, 0}};
    case Shape::kS:
      return {{{{1, 1}, {2, 1}, {1, 0}, {0, 0}}}, {0, -1, -1}};
    case Shape::kJ:  // column 2-3-4, foot module 1 on the right
      return {{{{1, 2}, {0, 2}, {0, 1}, {0, 0}}}, {-1, 0, 0}};
  }
  throw std::logic_error("unknown shape");
}

}  // namespace

std::optional<Shape> ParseShape(std::string_view name) {
  if (name.size() != 1) return std::nullopt;
  switch (std::toupper(static_cast<unsigned char>(name.front()))) {
    case 'I': return Shape::kI;
    case 'L': return Shape::kL;
    case 'Z': return Shape::kZ;
    case 'O': return Shape::kO;
    case 'T': return Shape::kT;
    case 'S': return Shape::kS;
    case 'J': return Shape::kJ;
    default: return std::nullopt;
  }
}

char ShapeLetter(Shape shape) {
  switch (shape) {
    case Shape::kI: return 'I';
    case Shape::kL: return 'L';
    case Shape::kZ: return 'Z';
    case Shape::kO: return 'O';
    case Shape::kT: return 'T';
    case Shape::kS: return 'S';
    case Shape::kJ: return 'J';
  }
  return '?';
}

bool GeometricParams::Valid() const {
  return wheel_radius > 0.0 && wheel_offset > 0.0 && module_length > 0.0 &&
         wheel_offset < module_length / 2.0;
}

double Morphology::PolarMoment() const {
  double sum = 0.0;
  for (const auto& c : centers) sum += c.squaredNorm();
  return sum;
}

Morphology BuildMorphology(Shape shape, const GeometricParams& params) {
  if (!params.Valid()) {
    throw std::invalid_argument(
        "geometric parameters must be positive with d < l/2");
  }
  const ShapeLayout layout = LayoutFor(shape);
  int sum_x = 0;
  int sum_y = 0;
  for (const auto& cell : layout.cells) {
    sum_x += cell[0];
    sum_y += cell[1];
  }
  Morphology morph;
  morph.shape = shape;
  morph.params = params;
  // Centering in integer quarter-pitch units keeps the coordinates exact
  // multiples of l/4.
  const double quarter = params.module_length / 4.0;
  for (int i = 0; i < kNumModules; ++i) {
    const int qx = 4 * layout.cells[i][0] - sum_x;
    const int qy = 4 * layout.cells[i][1] - sum_y;
    morph.centers[i] = Vector2d(qx * quarter, qy * quarter);
  }
  const double a1 = layout.hinge_quarter_turns[0] * kPi / 2.0;
  const double a2 = layout.hinge_quarter_turns[1] * kPi / 2.0;
  const double a3 = layout.hinge_quarter_turns[2] * kPi / 2.0;
  morph.hinge_offset = {WrapAngle(a1), 0.0, WrapAngle(a2), WrapAngle(a2 + a3)};
  return morph;
}

WheelAxisLine MakeWheelAxisLine(const Morphology& morph, int module,
                                double steering) {
  WheelAxisLine line;
  line.normal = UnitVector(morph.Heading(module, steering));
  line.offset = line.normal.dot(morph.centers[module]);
  return line;
}

double EquivalentTrack(const Morphology& morph, double driving_angle) {
  const Vector2d lateral = Perp(UnitVector(driving_angle));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : morph.centers) {
    const double p = lateral.dot(c);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  const double half_spread = (hi - lo) / 2.0;
  // Projections of collinear centers can differ by rounding only.
  if (half_spread <= 1e-12 * morph.params.module_length) {
    return morph.params.wheel_offset;
  }
  return half_spread;
}

}  // namespace htetro
