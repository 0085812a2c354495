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

#include "dynloc/kernel_weights.hpp"

#include <cmath>

namespace dynloc {

void KernelSpec::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ConfigError("kernel bandwidth must be a positive finite number");
  }
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian:
      return "gaussian";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "gaussian") return KernelKind::gaussian;
  throw ConfigError("unknown kernel kind: " + std::string(name));
}

double kernel_value(double delta, const KernelSpec& spec) {
  spec.validate();
  if (!std::isfinite(delta)) throw InputError("kernel argument must be finite");
  switch (spec.kind) {
    case KernelKind::gaussian: {
      // delta^2 keeps K exactly even in delta.
      const double sq = delta * delta;
      return std::exp(-sq / (2.0 * spec.bandwidth * spec.bandwidth));
    }
  }
  throw ConfigError("unsupported kernel kind");
}

Matrix positiveness_matrix(std::span<const double> labels, const KernelSpec& spec) {
  spec.validate();
  const auto n = static_cast<Index>(labels.size());
  if (n < 2) throw BatchTooSmallError("positiveness matrix needs at least two labels");
  for (double y : labels) {
    if (!std::isfinite(y)) throw InputError("labels must be finite");
  }
  Matrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    w(i, i) = 1.0;
    for (Index k = i + 1; k < n; ++k) {
      const double v = kernel_value(labels[i] - labels[k], spec);
      w(i, k) = v;
      w(k, i) = v;
    }
  }
  return w;
}

}  // namespace dynloc
