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

#include "dynloc/nn_schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynloc/types.hpp"

namespace dynloc {

void ScheduleConfig::validate() const {
  if (batch_size < 2) throw ConfigError("schedule batch size must be at least 2");
  if (max_epochs < 1) throw ConfigError("schedule max epochs must be at least 1");
  if (step_size < 1) throw ConfigError("nn step size must be at least 1");
  if (step_size >= max_epochs) {
    throw ConfigError("nn step size (" + std::to_string(step_size) +
                      ") must be smaller than the number of epochs (" +
                      std::to_string(max_epochs) + ")");
  }
  if (nn_final < 1 || nn_final > batch_size - 1) {
    throw ConfigError("nn final must lie in [1, batch_size - 1] = [1, " +
                      std::to_string(batch_size - 1) + "], got " + std::to_string(nn_final));
  }
  if (max_epochs / step_size <= 1) {
    throw ConfigError("schedule needs at least two steps (epochs / nn step size >= 2)");
  }
}

int neighbors_at_epoch(const ScheduleConfig& config, int epoch) {
  config.validate();
  if (epoch < 0) throw ConfigError("epoch must be non-negative");
  const int steps_completed = epoch / config.step_size;
  const int total_steps = config.max_epochs / config.step_size;
  const double decrement =
      static_cast<double>(config.batch_size - config.nn_final) / static_cast<double>(total_steps - 1);
  const double value = static_cast<double>(config.batch_size) - decrement * steps_completed;
  const double floored = std::floor(value);
  const double clamped = std::clamp(floored, static_cast<double>(config.nn_final),
                                    static_cast<double>(config.batch_size - 1));
  return static_cast<int>(clamped);
}

}  // namespace dynloc
