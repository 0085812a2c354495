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

#include "dynloc/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

namespace dynloc {

void BenchmarkConfig::validate() const {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (threads < 1) throw ConfigError("thread count must be at least 1");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie strictly between 0 and 1");
  }
  train.validate();
  optim.validate();
  encoder.validate();
  ridge.validate();
}

const ArmResult& BenchmarkReport::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no arm named " + name);
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

namespace {

using Clock = std::chrono::steady_clock;

struct Arm {
  std::string name;
  LossVariant variant;
  DistanceNorm norm;
};

struct Job {
  std::size_t arm = 0;  // index into arms; arms.size() and +1 are the two baselines
  std::size_t seed = 0;
  double mae = 0.0;
  double seconds = 0.0;
  std::exception_ptr error;
};

double readout_mae(const Matrix& train_x, const Dataset& train, const Matrix& test_x,
                   const Dataset& test, const RidgeConfig& ridge) {
  const RidgeModel model = ridge_fit(train_x, train.labels, ridge);
  return mae(model.predict(test_x), test.labels);
}

// Rethrows the stored failure with the run identified, keeping its type.
[[noreturn]] void rethrow_with_context(std::exception_ptr error, const std::string& context) {
  try {
    std::rethrow_exception(error);
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
}

LabelSummary summarize_labels(std::uint64_t seed, const Dataset& test, double lo, double hi) {
  constexpr int kBins = 10;
  LabelSummary s;
  s.seed = seed;
  s.test_size = test.size();
  std::tie(s.mean, s.std) = mean_std(test.labels);
  const double width = hi > lo ? (hi - lo) / kBins : 1.0;
  for (int b = 0; b <= kBins; ++b) s.bin_edges.push_back(lo + width * b);
  s.counts.assign(kBins, 0);
  for (double y : test.labels) {
    const int b = std::clamp(static_cast<int>((y - lo) / width), 0, kBins - 1);
    ++s.counts[static_cast<std::size_t>(b)];
  }
  return s;
}

BenchmarkReport run_protocol(const Dataset& data, const std::vector<Arm>& arms,
                             const BenchmarkConfig& base, std::string kind) {
  if (arms.empty()) throw ConfigError("at least one variant is required");
  base.validate();
  data.validate();
  if (data.size() < 4) throw ConfigError("benchmark needs at least 4 samples");

  BenchmarkConfig config = base;
  config.encoder.input_dim = static_cast<int>(data.feature_dim());
  const auto start = Clock::now();

  std::vector<std::pair<Dataset, Dataset>> splits;
  for (auto seed : config.seeds) splits.push_back(split(data, config.test_fraction, seed));

  std::vector<Job> jobs;
  for (std::size_t a = 0; a < arms.size() + 2; ++a) {
    for (std::size_t s = 0; s < config.seeds.size(); ++s) {
      Job job;
      job.arm = a;
      job.seed = s;
      jobs.push_back(job);
    }
  }

  auto run_job = [&](Job& job) {
    const auto t0 = Clock::now();
    try {
      const auto& [train_split, test_split] = splits[job.seed];
      const auto seed = config.seeds[job.seed];
      if (job.arm == arms.size()) {
        job.mae = readout_mae(train_split.features, train_split, test_split.features, test_split,
                              config.ridge);
      } else if (job.arm == arms.size() + 1) {
        const Encoder untrained = Encoder::init(config.encoder, seed);
        job.mae = readout_mae(untrained.embed(train_split.features), train_split,
                              untrained.embed(test_split.features), test_split, config.ridge);
      } else {
        TrainConfig tc = config.train;
        tc.seed = seed;
        tc.loss.variant = arms[job.arm].variant;
        tc.loss.distance_norm = arms[job.arm].norm;
        tc.export_epochs.clear();
        const TrainResult trained = train(train_split, tc, config.optim, config.encoder);
        job.mae = readout_mae(trained.encoder.embed(train_split.features), train_split,
                              trained.encoder.embed(test_split.features), test_split,
                              config.ridge);
      }
    } catch (...) {
      job.error = std::current_exception();
    }
    job.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  const auto workers = static_cast<std::size_t>(
      std::clamp<int>(config.threads, 1, static_cast<int>(jobs.size())));
  if (workers == 1) {
    for (auto& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run_job(jobs[j]);
      });
    }
    for (auto& t : pool) t.join();
  }

  auto arm_name = [&](std::size_t a) {
    if (a == arms.size()) return std::string("raw_feature_ridge");
    if (a == arms.size() + 1) return std::string("untrained_encoder_ridge");
    return arms[a].name;
  };
  for (const auto& job : jobs) {
    if (job.error) {
      rethrow_with_context(job.error, "run " + arm_name(job.arm) + " seed " +
                                          std::to_string(config.seeds[job.seed]));
    }
  }

  BenchmarkReport report;
  report.kind = std::move(kind);
  report.config = config;
  std::vector<ArmResult> results(arms.size() + 2);
  for (std::size_t a = 0; a < results.size(); ++a) results[a].name = arm_name(a);
  for (const auto& job : jobs) {
    results[job.arm].maes.push_back(job.mae);
    results[job.arm].seconds.push_back(job.seconds);
  }
  for (auto& r : results) std::tie(r.mean, r.std) = mean_std(r.maes);
  report.untrained_encoder_ridge = results.back();
  results.pop_back();
  report.raw_feature_ridge = results.back();
  results.pop_back();
  report.arms = std::move(results);

  const auto [lo_it, hi_it] = std::minmax_element(data.labels.begin(), data.labels.end());
  for (std::size_t s = 0; s < config.seeds.size(); ++s) {
    report.test_labels.push_back(summarize_labels(config.seeds[s], splits[s].second, *lo_it, *hi_it));
  }
  report.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return report;
}

nlohmann::ordered_json arm_json(const ArmResult& arm) {
  nlohmann::ordered_json j;
  j["mae"] = arm.maes;
  j["mean"] = arm.mean;
  j["std"] = arm.std;
  return j;
}

}  // namespace

BenchmarkReport benchmark(const Dataset& data, const std::vector<LossVariant>& variants,
                          const BenchmarkConfig& config) {
  std::vector<Arm> arms;
  for (auto v : variants) arms.push_back({to_string(v), v, config.train.loss.distance_norm});
  return run_protocol(data, arms, config, "benchmark");
}

BenchmarkReport ablate(const Dataset& data, const std::vector<DistanceNorm>& norms,
                       const BenchmarkConfig& config) {
  std::vector<Arm> arms;
  for (auto n : norms) arms.push_back({to_string(n), LossVariant::dyn_loc_rep, n});
  return run_protocol(data, arms, config, "ablation");
}

nlohmann::ordered_json to_json(const BenchmarkReport& report) {
  using nlohmann::ordered_json;
  const auto& c = report.config;
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = report.kind;

  ordered_json cfg;
  cfg["seeds"] = c.seeds;
  cfg["test_fraction"] = c.test_fraction;
  cfg["split_policy"] = "resplit_per_seed";
  cfg["epochs"] = c.train.epochs;
  cfg["batch_size"] = c.train.batch_size;
  cfg["loss"] = report.kind == "ablation" ? "dynlocrep" : to_string(c.train.loss.variant);
  cfg["kernel"] = to_string(c.train.loss.kernel.kind);
  cfg["kernel_sigma"] = c.train.loss.kernel.bandwidth;
  cfg["temperature"] = c.train.loss.temperature;
  cfg["distance_norm"] = to_string(c.train.loss.distance_norm);
  cfg["nn_space"] = to_string(c.train.loss.nn_space);
  cfg["nn_final"] = c.train.nn_final;
  cfg["nn_step_size"] = c.train.nn_step_size;
  cfg["reduction"] = c.train.loss.reduction == Reduction::sum ? "sum" : "mean";
  cfg["learning_rate"] = c.optim.learning_rate;
  cfg["lr_decay"] = c.optim.decay_factor;
  cfg["lr_decay_every"] = c.optim.decay_every;
  cfg["weight_decay"] = c.optim.weight_decay;
  cfg["input_dim"] = c.encoder.input_dim;
  cfg["hidden"] = c.encoder.hidden;
  cfg["embedding_dim"] = c.encoder.output_dim;
  cfg["ridge_lambda"] = c.ridge.lambda;
  j["config"] = cfg;
  j["std_convention"] = "population";
  j["readout"] = "ridge on raw encoder outputs";

  ordered_json results;
  for (const auto& arm : report.arms) results[arm.name] = arm_json(arm);
  j[report.kind == "ablation" ? "norms" : "variants"] = results;
  ordered_json baselines;
  baselines["raw_feature_ridge"] = arm_json(report.raw_feature_ridge);
  baselines["untrained_encoder_ridge"] = arm_json(report.untrained_encoder_ridge);
  j["baselines"] = baselines;

  ordered_json labels = ordered_json::array();
  for (const auto& s : report.test_labels) {
    ordered_json e;
    e["seed"] = s.seed;
    e["test_size"] = s.test_size;
    e["mean"] = s.mean;
    e["std"] = s.std;
    e["bin_edges"] = s.bin_edges;
    e["counts"] = s.counts;
    labels.push_back(e);
  }
  j["test_label_distribution"] = labels;

  if (report.kind == "ablation") {
    ordered_json ref;
    ref["paper_reference"] = true;
    ref["units"] = "years";
    ref["note"] = "published MAE on private clinical data; context only, not measured here";
    const std::pair<const char*, std::pair<double, double>> values[] = {
        {"manhattan", {3.724, 0.220}},
        {"cosine", {3.748, 0.142}},
        {"euclidean", {3.806, 0.154}},
        {"chebyshev", {3.842, 0.196}}};
    for (const auto& [norm, ms] : values) {
      ref["values"][norm] = {{"mean", ms.first}, {"std", ms.second}};
    }
    j["reference"] = ref;
  }

  ordered_json timing;
  ordered_json runs = ordered_json::array();
  auto add_runs = [&](const ArmResult& arm) {
    for (std::size_t s = 0; s < arm.seconds.size(); ++s) {
      runs.push_back({{"arm", arm.name}, {"seed", c.seeds[s]}, {"seconds", arm.seconds[s]}});
    }
  };
  for (const auto& arm : report.arms) add_runs(arm);
  add_runs(report.raw_feature_ridge);
  add_runs(report.untrained_encoder_ridge);
  timing["runs"] = runs;
  timing["total_seconds"] = report.total_seconds;
  j["timing"] = timing;
  return j;
}

nlohmann::ordered_json numeric_sections(const nlohmann::ordered_json& report) {
  nlohmann::ordered_json copy = report;
  copy.erase("timing");
  return copy;
}

}  // namespace dynloc
