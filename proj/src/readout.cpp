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

#include "dynloc/readout.hpp"

#include <cmath>

namespace dynloc {

void RidgeConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("ridge lambda must be finite and non-negative");
  }
}

std::vector<double> RidgeModel::predict(const Matrix& x) const {
  if (x.cols() != coefficients.size()) throw ContractError("readout width mismatch");
  const Vector fitted = x * coefficients;
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  for (Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = fitted(i) + intercept;
  return out;
}

RidgeModel ridge_fit(const Matrix& x, std::span<const double> labels, const RidgeConfig& config) {
  config.validate();
  const Index n = x.rows();
  if (n < 1) throw ContractError("ridge fit needs at least one row");
  if (static_cast<Index>(labels.size()) != n) throw ContractError("label count mismatch");

  const Eigen::Map<const Vector> y(labels.data(), n);
  const Eigen::RowVectorXd column_means = x.colwise().mean();
  const double label_mean = y.mean();
  const Matrix centered = x.rowwise() - column_means;
  const Vector target = y.array() - label_mean;

  Matrix gram = centered.transpose() * centered;
  gram.diagonal().array() += config.lambda;
  const Vector rhs = centered.transpose() * target;

  RidgeModel model;
  model.coefficients = gram.ldlt().solve(rhs);
  model.intercept = label_mean - column_means.dot(model.coefficients);
  if (!model.coefficients.allFinite() || !std::isfinite(model.intercept)) {
    throw NumericalError("ridge solve produced non-finite coefficients");
  }
  return model;
}

double mae(std::span<const double> predictions, std::span<const double> truth) {
  if (predictions.size() != truth.size()) throw ContractError("mae inputs differ in length");
  if (predictions.empty()) throw ContractError("mae needs at least one value");
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) total += std::abs(predictions[i] - truth[i]);
  return total / static_cast<double>(truth.size());
}

}  // namespace dynloc
