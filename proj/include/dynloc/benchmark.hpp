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

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynloc/dataset.hpp"
#include "dynloc/readout.hpp"
#include "dynloc/trainer.hpp"

namespace dynloc {

/// Shared protocol settings. `train.loss.variant`, `train.loss.distance_norm`
/// and `train.seed` are overridden per run.
struct BenchmarkConfig {
  TrainConfig train;
  OptimConfig optim;
  EncoderConfig encoder;
  RidgeConfig ridge;
  double test_fraction = 0.2;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  /// Worker threads for independent runs; results do not depend on it.
  int threads = 1;

  void validate() const;
};

/// Per-seed MAEs of one arm, plus mean and population std over seeds.
struct ArmResult {
  std::string name;
  std::vector<double> maes;
  std::vector<double> seconds;
  double mean = 0.0;
  double std = 0.0;
};

/// Test-split label summary for one seed.
struct LabelSummary {
  std::uint64_t seed = 0;
  Index test_size = 0;
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> bin_edges;
  std::vector<int> counts;
};

struct BenchmarkReport {
  std::string kind;  // "benchmark" or "ablation"
  BenchmarkConfig config;
  std::vector<ArmResult> arms;
  ArmResult raw_feature_ridge;
  ArmResult untrained_encoder_ridge;
  std::vector<LabelSummary> test_labels;
  double total_seconds = 0.0;

  const ArmResult& arm(const std::string& name) const;
};

/// Mean and population standard deviation.
std::pair<double, double> mean_std(const std::vector<double>& values);

/// Trains one encoder per (variant, seed), fits a ridge readout on the
/// frozen train embeddings and scores MAE on the test split. Also scores
/// ridge on the raw features and on an untrained encoder for every seed.
BenchmarkReport benchmark(const Dataset& data, const std::vector<LossVariant>& variants,
                          const BenchmarkConfig& config);

/// Same protocol with the localized loss, one arm per neighbor distance norm.
BenchmarkReport ablate(const Dataset& data, const std::vector<DistanceNorm>& norms,
                       const BenchmarkConfig& config);

/// Report as JSON. Wall-clock fields live under "timing" only.
nlohmann::ordered_json to_json(const BenchmarkReport& report);

/// Report JSON with the "timing" section removed.
nlohmann::ordered_json numeric_sections(const nlohmann::ordered_json& report);

}  // namespace dynloc
