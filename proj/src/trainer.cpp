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

#include "dynloc/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <json.hpp>

namespace dynloc {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch_size < 4) throw ConfigError("batch size must be at least 4");
  loss.validate();
  if (loss.variant == LossVariant::dyn_loc_rep) schedule().validate();
  for (int e : export_epochs) {
    if (e < 1 || e > epochs) {
      throw ConfigError("export epoch " + std::to_string(e) + " outside [1, " +
                        std::to_string(epochs) + "]");
    }
  }
}

ScheduleConfig TrainConfig::schedule() const {
  return ScheduleConfig{batch_size, nn_final, nn_step_size, epochs};
}

Trainer::Trainer(Dataset train, TrainConfig config, OptimConfig optim, EncoderConfig encoder)
    : data_(std::move(train)),
      config_(std::move(config)),
      optim_(optim),
      encoder_(Encoder::init(encoder, config_.seed)),
      adam_(encoder_, optim_) {
  config_.validate();
  optim_.validate();
  data_.validate();
  if (data_.size() < 2) throw BatchTooSmallError("training needs at least two samples");
  if (data_.feature_dim() != encoder.input_dim) {
    throw ConfigError("encoder input dimension " + std::to_string(encoder.input_dim) +
                      " does not match feature dimension " + std::to_string(data_.feature_dim()));
  }
}

std::vector<Index> Trainer::epoch_order(int epoch) const {
  std::vector<Index> order(static_cast<std::size_t>(data_.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::seed_seq seq{static_cast<std::uint32_t>(config_.seed),
                    static_cast<std::uint32_t>(config_.seed >> 32),
                    static_cast<std::uint32_t>(epoch), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

EpochRecord Trainer::run_epoch() {
  const int epoch = epoch_;
  EpochRecord record;
  record.epoch = epoch + 1;
  record.learning_rate = optim_.rate_at_epoch(epoch);

  Index nn_count = 0;
  if (config_.loss.variant == LossVariant::dyn_loc_rep) {
    nn_count = neighbors_at_epoch(config_.schedule(), epoch);
    record.nn_count = static_cast<int>(nn_count);
  }

  const auto order = epoch_order(epoch);
  const auto total = static_cast<Index>(order.size());
  double loss_sum = 0.0;
  int batches = 0;
  for (Index start = 0; start < total; start += config_.batch_size) {
    const Index b = std::min<Index>(config_.batch_size, total - start);
    if (b < 2) break;
    const std::span<const Index> rows(order.data() + start, static_cast<std::size_t>(b));
    const Dataset batch = data_.subset(rows);

    const EmbeddingBatch emb = encoder_.forward(batch.features);
    LossOutput out;
    try {
      out = loss_with_gradient(config_.loss, emb, batch.labels, nn_count, &batch.features);
    } catch (const NumericalError& e) {
      throw NumericalError("epoch " + std::to_string(epoch + 1) + ": " + e.what());
    }
    adam_.step(encoder_, encoder_.backward(out.grad_raw), record.learning_rate);
    loss_sum += out.value;
    ++batches;
  }
  record.mean_loss = batches ? loss_sum / batches : 0.0;
  if (!std::isfinite(record.mean_loss)) {
    throw NumericalError("epoch " + std::to_string(epoch + 1) + ": non-finite mean loss");
  }
  ++epoch_;
  return record;
}

TrainResult train(const Dataset& train_split, const TrainConfig& config, const OptimConfig& optim,
                  const EncoderConfig& encoder,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  Trainer trainer(train_split, config, optim, encoder);
  TrainResult result;
  for (int e = 0; e < config.epochs; ++e) {
    result.trace.push_back(trainer.run_epoch());
    if (on_epoch) on_epoch(result.trace.back());
    const int done = trainer.epochs_done();
    if (std::find(config.export_epochs.begin(), config.export_epochs.end(), done) !=
        config.export_epochs.end()) {
      result.exports.push_back({done, l2_normalize(trainer.encoder().embed(train_split.features))});
    }
  }
  result.encoder = trainer.encoder();
  return result;
}

void write_trace(std::ostream& out, const std::vector<EpochRecord>& trace) {
  for (const auto& r : trace) {
    nlohmann::ordered_json line;
    line["epoch"] = r.epoch;
    line["lr"] = r.learning_rate;
    line["nn_count"] = r.nn_count ? nlohmann::ordered_json(*r.nn_count) : nlohmann::ordered_json();
    line["mean_loss"] = r.mean_loss;
    out << line.dump() << "\n";
  }
}

}  // namespace dynloc
