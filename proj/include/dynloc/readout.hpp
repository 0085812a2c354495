/* Copyright 2026 The dynloc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <span>
#include <vector>

#include "dynloc/types.hpp"

namespace dynloc {

struct RidgeConfig {
  double lambda = 1.0;

  void validate() const;
};

/// Linear readout y ~ x . coefficients + intercept.
struct RidgeModel {
  Vector coefficients;
  double intercept = 0.0;

  std::vector<double> predict(const Matrix& x) const;
};

/// Ridge regression on centered columns and labels. Solves
/// (Xc^T Xc + lambda I) beta = Xc^T yc; the intercept restores the means.
/// Throws NumericalError when the solve is not finite.
RidgeModel ridge_fit(const Matrix& x, std::span<const double> labels, const RidgeConfig& config);

/// Mean absolute error.
double mae(std::span<const double> predictions, std::span<const double> truth);

}  // namespace dynloc
