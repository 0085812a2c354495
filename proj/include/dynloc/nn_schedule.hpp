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

namespace dynloc {

/// Hyperparameters of the shrinking neighbor-count schedule.
///
/// `nn_final` is the neighbor count reached at the end of training and
/// `step_size` the number of epochs between decrements. Requires
/// `step_size < max_epochs`, `1 <= nn_final <= batch_size - 1` and at least
/// two schedule steps (`max_epochs / step_size >= 2`).
struct ScheduleConfig {
  int batch_size = 32;
  int nn_final = 14;
  int step_size = 1;
  int max_epochs = 50;

  void validate() const;
};

/// Number of nearest neighbors used for repulsion at a 0-based epoch.
///
/// Linear decrement from `batch_size` towards `nn_final` once every
/// `step_size` epochs, floored, then clamped to [nn_final, batch_size - 1].
/// Non-increasing in `epoch`.
int neighbors_at_epoch(const ScheduleConfig& config, int epoch);

}  // namespace dynloc
