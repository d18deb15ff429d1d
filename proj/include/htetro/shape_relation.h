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

// Constant-coefficient linear relations sum_i C_i cot(h_i) = 0 satisfied by
// every concurrent steering set of a morphology.
//
// With the center at (X, Y), cot(h_i) = -(Y - y_i) / (X - x_i). A constant
// combination vanishes for every (X, Y) only if, for each distinct x value,
// the modules sharing it satisfy sum C_i = 0 and sum C_i y_i = 0. A lone module
// or a pair on a vertical line is forced to C_i = 0, so a nonzero relation
// needs at least three steering axes with the same x coordinate.

#ifndef HTETRO_SHAPE_RELATION_H_
#define HTETRO_SHAPE_RELATION_H_

#include <vector>

#include "htetro/geometry.h"

namespace htetro {

struct ShapeRelation {
  // Basis of the coefficient space, each scaled to unit max-norm. Empty when
  // no nonzero relation exists.
  std::vector<PerModule<double>> basis;

  bool Exists() const { return !basis.empty(); }
};

ShapeRelation DeriveShapeRelation(const Morphology& morph);

// |sum C_i cot(h_i)| / max(1, sum |C_i cot(h_i)|) for absolute headings h.
double RelationResidual(const PerModule<double>& coefficients,
                        const PerModule<double>& headings);

}  // namespace htetro

#endif  // HTETRO_SHAPE_RELATION_H_
