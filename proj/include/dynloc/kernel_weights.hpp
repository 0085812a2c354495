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
#include <string>
#include <string_view>

#include "dynloc/types.hpp"

namespace dynloc {

enum class KernelKind { gaussian };

/// Label-similarity kernel. Bandwidth is in label units (years for age).
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double bandwidth = 2.0;

  void validate() const;
};

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// K(delta) in (0, 1]. Gaussian: exp(-delta^2 / (2 sigma^2)).
double kernel_value(double delta, const KernelSpec& spec);

/// Pairwise degree-of-positiveness weights w(i,k) = K(y_i - y_k).
///
/// The result is exactly symmetric with a unit diagonal. Losses never read
/// the diagonal.
Matrix positiveness_matrix(std::span<const double> labels, const KernelSpec& spec);

}  // namespace dynloc
