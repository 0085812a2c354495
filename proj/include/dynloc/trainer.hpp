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
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dynloc/contrastive_losses.hpp"
#include "dynloc/dataset.hpp"
#include "dynloc/encoder.hpp"
#include "dynloc/nn_schedule.hpp"

namespace dynloc {

struct TrainConfig {
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 0;
  LossConfig loss;
  int nn_final = 14;
  int nn_step_size = 1;
  /// 1-based epochs after which train-split embeddings are captured.
  std::vector<int> export_epochs;

  void validate() const;
  ScheduleConfig schedule() const;
};

/// One line of the training trace. `epoch` is 1-based.
struct EpochRecord {
  int epoch = 0;
  double learning_rate = 0.0;
  /// Scheduled neighbor count; empty for the global baselines.
  std::optional<int> nn_count;
  double mean_loss = 0.0;
};

/// Normalized train-split embeddings after a given 1-based epoch.
struct EmbeddingSnapshot {
  int epoch = 0;
  Matrix embeddings;
};

struct TrainResult {
  Encoder encoder;
  std::vector<EpochRecord> trace;
  std::vector<EmbeddingSnapshot> exports;
};

/// Epoch loop: seeded shuffle, mini-batches, scheduled neighbor count, loss
/// gradient, encoder backward, Adam step. Deterministic for a fixed config.
class Trainer {
 public:
  Trainer(Dataset train, TrainConfig config, OptimConfig optim, EncoderConfig encoder);

  /// Runs the next epoch and returns its trace record.
  EpochRecord run_epoch();

  int epochs_done() const noexcept { return epoch_; }
  const Encoder& encoder() const noexcept { return encoder_; }
  const Dataset& data() const noexcept { return data_; }

 private:
  std::vector<Index> epoch_order(int epoch) const;

  Dataset data_;
  TrainConfig config_;
  OptimConfig optim_;
  Encoder encoder_;
  AdamOptimizer adam_;
  int epoch_ = 0;
};

/// Runs `config.epochs` epochs. `on_epoch`, when set, sees every trace
/// record as soon as its epoch finishes.
TrainResult train(const Dataset& train_split, const TrainConfig& config, const OptimConfig& optim,
                  const EncoderConfig& encoder,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

/// One JSON object per line: {"epoch":..,"lr":..,"nn_count":..,"mean_loss":..}.
void write_trace(std::ostream& out, const std::vector<EpochRecord>& trace);

}  // namespace dynloc
