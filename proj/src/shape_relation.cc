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

#include "htetro/shape_relation.h"

#include <Eigen/Dense>

namespace htetro {

ShapeRelation DeriveShapeRelation(const Morphology& morph) {
  // Two constraint rows per group of modules sharing an x coordinate.
  // Coordinates are exact multiples of l/4, so equality comparison is exact.
  Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(2 * kNumModules,
                                                      kNumModules);
  PerModule<bool> grouped{};
  int row = 0;
  const double l = morph.params.module_length;
  for (int i = 0; i < kNumModules; ++i) {
    if (grouped[i]) continue;
    for (int j = i; j < kNumModules; ++j) {
      if (morph.centers[j].x() != morph.centers[i].x()) continue;
      grouped[j] = true;
      constraints(row, j) = 1.0;
      constraints(row + 1, j) = morph.centers[j].y() / l;
    }
    row += 2;
  }

  ShapeRelation relation;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints.topRows(row));
  lu.setThreshold(1e-12);
  const Eigen::MatrixXd kernel = lu.kernel();
  if (lu.dimensionOfKernel() == 0) return relation;
  for (int k = 0; k < kernel.cols(); ++k) {
    Eigen::Vector4d c = kernel.col(k);
    const double scale = c.cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    c /= scale;
    // Positive leading coefficient for a stable presentation.
    for (int i = 0; i < kNumModules; ++i) {
      if (std::abs(c[i]) > 1e-12) {
        if (c[i] < 0.0) c = -c;
        break;
      }
    }
    relation.basis.push_back({c[0], c[1], c[2], c[3]});
  }
  return relation;
}

double RelationResidual(const PerModule<double>& coefficients,
                        const PerModule<double>& headings) {
  double sum = 0.0;
  double magnitude = 0.0;
  for (int i = 0; i < kNumModules; ++i) {
    if (coefficients[i] == 0.0) continue;
    const double term = coefficients[i] / std::tan(headings[i]);
    sum += term;
    magnitude += std::abs(term);
  }
  return std::abs(sum) / std::max(1.0, magnitude);
}

}  // namespace htetro
