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

#include "dynloc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynloc/benchmark.hpp"
#include "dynloc/dataset.hpp"
#include "dynloc/run_config.hpp"
#include "dynloc/trainer.hpp"

namespace dynloc {

namespace fs = std::filesystem;

namespace {

/// Everything a command may be configured with. Flags and config-file keys
/// write into the same fields.
struct RunConfig {
  std::string config_path;
  std::string data;
  std::string out;
  std::string out_dir = "run";
  bool force = false;

  SyntheticSpec synthetic;
  std::uint64_t seed = 0;
  std::uint64_t data_seed = 0;
  double test_fraction = 0.2;

  int epochs = 50;
  int batch_size = 32;
  std::string loss = "dynlocrep";
  double kernel_sigma = 2.0;
  double temperature = 0.1;
  std::string distance_norm = "manhattan";
  std::string nn_space = "embedding";
  int nn_final = 14;
  int nn_step_size = 1;
  std::string reduction = "sum";
  std::vector<int> export_epochs;

  OptimConfig optim;
  std::vector<int> hidden = {64, 64};
  int embedding_dim = 32;
  double ridge_lambda = 1.0;

  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::vector<std::string> variants = {"dynlocrep", "yaware", "threshold", "exponential", "rnc"};
  std::vector<std::string> norms = {"manhattan", "euclidean", "chebyshev", "cosine"};
};

/// Signals a specific exit code with a message.
struct CommandFailure {
  int code;
  std::string message;
};

const std::vector<std::string> kVariantNames = {"dynlocrep", "yaware", "threshold", "exponential",
                                                "rnc"};
const std::vector<std::string> kNormNames = {"manhattan", "euclidean", "chebyshev", "cosine"};

void add_config_option(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--config", rc.config_path,
                  "Flat 'key = value' config file; keys are flag names without dashes, "
                  "flags override them");
}

void add_synthetic_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--n", rc.synthetic.n, "Number of synthetic samples");
  cmd->add_option("--feature-dim", rc.synthetic.feature_dim, "Synthetic feature columns");
  cmd->add_option("--informative-dims", rc.synthetic.informative_dims,
                  "Feature columns that depend on the label");
  cmd->add_option("--noise-std", rc.synthetic.noise_std, "Noise std on informative columns");
}

void add_training_options(CLI::App* cmd, RunConfig& rc, bool with_loss) {
  cmd->add_option("--epochs", rc.epochs, "Training epochs");
  cmd->add_option("--batch-size", rc.batch_size, "Mini-batch size");
  if (with_loss) {
    cmd->add_option("--loss", rc.loss, "Contrastive loss")->check(CLI::IsMember(kVariantNames));
  }
  cmd->add_option("--kernel-sigma", rc.kernel_sigma, "Gaussian label-kernel bandwidth");
  cmd->add_option("--temperature", rc.temperature, "Similarity temperature");
  if (with_loss) {
    cmd->add_option("--distance-norm", rc.distance_norm, "Neighbor distance norm")
        ->check(CLI::IsMember(kNormNames));
  }
  cmd->add_option("--nn-space", rc.nn_space, "Space for neighbor search")
      ->check(CLI::IsMember({"embedding", "input"}));
  cmd->add_option("--nn-final", rc.nn_final, "Final neighbor count");
  cmd->add_option("--nn-step-size", rc.nn_step_size, "Epochs between neighbor-count decrements");
  cmd->add_option("--reduction", rc.reduction, "Loss reduction over anchors")
      ->check(CLI::IsMember({"sum", "mean"}));
  cmd->add_option("--lr", rc.optim.learning_rate, "Initial learning rate");
  cmd->add_option("--lr-decay", rc.optim.decay_factor, "Multiplicative learning-rate decay");
  cmd->add_option("--lr-decay-every", rc.optim.decay_every, "Epochs between decays");
  cmd->add_option("--weight-decay", rc.optim.weight_decay, "L2 weight decay");
  cmd->add_option("--hidden", rc.hidden, "Hidden layer widths")->delimiter(',');
  cmd->add_option("--embedding-dim", rc.embedding_dim, "Encoder output width");
  cmd->add_option("--ridge-lambda", rc.ridge_lambda, "Ridge readout regularization");
  cmd->add_option("--test-fraction", rc.test_fraction, "Held-out fraction of the dataset");
}

// Applies config-file entries to options not given on the command line.
void apply_config(CLI::App* cmd, const RunConfig& rc) {
  if (rc.config_path.empty()) return;
  if (!fs::exists(rc.config_path)) {
    throw CommandFailure{exit_code::kNoInput, "config file not found: " + rc.config_path};
  }
  std::vector<const CLI::Option*> given;
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->count() > 0) given.push_back(opt);
  }
  for (const auto& entry : load_config(rc.config_path)) {
    CLI::Option* opt = entry.key == "config" ? nullptr : cmd->get_option_no_throw("--" + entry.key);
    const std::string where = "config line " + std::to_string(entry.line);
    if (opt == nullptr) {
      throw CommandFailure{exit_code::kUsage,
                           where + ": unknown key '" + entry.key + "' for " + cmd->get_name()};
    }
    if (std::find(given.begin(), given.end(), opt) != given.end()) continue;
    try {
      opt->clear();
      opt->add_result(entry.value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw CommandFailure{exit_code::kUsage, where + ": " + e.what()};
    }
  }
}

std::vector<std::uint64_t> parsed_seeds(const RunConfig& rc) {
  if (rc.seeds.empty()) throw ConfigError("at least one seed is required");
  return rc.seeds;
}

LossConfig loss_config(const RunConfig& rc) {
  LossConfig lc;
  lc.variant = parse_loss_variant(rc.loss);
  lc.kernel.bandwidth = rc.kernel_sigma;
  lc.temperature = rc.temperature;
  lc.distance_norm = parse_distance_norm(rc.distance_norm);
  lc.nn_space = parse_neighbor_space(rc.nn_space);
  if (rc.reduction == "sum") {
    lc.reduction = Reduction::sum;
  } else if (rc.reduction == "mean") {
    lc.reduction = Reduction::mean;
  } else {
    throw ConfigError("unknown reduction: " + rc.reduction);
  }
  lc.validate();
  return lc;
}

TrainConfig train_config(const RunConfig& rc) {
  TrainConfig tc;
  tc.epochs = rc.epochs;
  tc.batch_size = rc.batch_size;
  tc.seed = rc.seed;
  tc.loss = loss_config(rc);
  tc.nn_final = rc.nn_final;
  tc.nn_step_size = rc.nn_step_size;
  tc.export_epochs = rc.export_epochs;
  return tc;
}

EncoderConfig encoder_config(const RunConfig& rc, Index input_dim) {
  EncoderConfig ec;
  ec.input_dim = static_cast<int>(input_dim);
  ec.hidden = rc.hidden;
  ec.output_dim = rc.embedding_dim;
  ec.validate();
  return ec;
}

Dataset load_input(const std::string& path) {
  if (path.empty()) throw ConfigError("--data is required");
  if (!fs::exists(path)) throw CommandFailure{exit_code::kNoInput, "input not found: " + path};
  Dataset data = load_csv(path);
  data.validate();
  return data;
}

void guard_overwrite(const fs::path& path, bool force) {
  if (fs::exists(path) && !force) {
    throw CommandFailure{exit_code::kRefuseOverwrite,
                         "refusing to overwrite " + path.string() + " (use --force)"};
  }
}

int threads_from_env() {
  const char* env = std::getenv("DYNLOC_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int t = std::stoi(env);
    if (t < 1) throw ConfigError("DYNLOC_THREADS must be a positive integer");
    return t;
  } catch (const std::logic_error&) {
    throw ConfigError("DYNLOC_THREADS must be a positive integer");
  }
}

int cmd_generate(const RunConfig& rc, std::ostream& err) {
  if (rc.out.empty()) throw ConfigError("--out is required");
  if (rc.synthetic.n < 1) throw ConfigError("--n must be at least 1");
  rc.synthetic.validate();
  guard_overwrite(rc.out, rc.force);
  const Dataset data = generate_synthetic(rc.synthetic, rc.seed);
  save_csv(rc.out, data);
  err << "wrote " << data.size() << " rows to " << rc.out << "\n";
  return exit_code::kOk;
}

int cmd_train(const RunConfig& rc, std::ostream& err) {
  Dataset data = load_input(rc.data);
  if (data.size() < 4) throw ConfigError("training needs at least 4 samples");
  const TrainConfig tc = train_config(rc);
  tc.validate();
  rc.optim.validate();
  const EncoderConfig ec = encoder_config(rc, data.feature_dim());
  RidgeConfig ridge{rc.ridge_lambda};
  ridge.validate();

  const fs::path dir = rc.out_dir;
  const fs::path trace_path = dir / "trace.jsonl";
  const fs::path ckpt_path = dir / "encoder.ckpt";
  const fs::path summary_path = dir / "summary.json";
  const fs::path emb_path = dir / "embeddings.csv";
  for (const auto& p : {trace_path, ckpt_path, summary_path, emb_path}) guard_overwrite(p, rc.force);
  auto [train_split, test_split] = split(data, rc.test_fraction, rc.seed);

  const TrainResult result = train(train_split, tc, rc.optim, ec, [&](const EpochRecord& r) {
    err << "epoch " << r.epoch << "/" << tc.epochs << " lr=" << r.learning_rate;
    if (r.nn_count) err << " nn=" << *r.nn_count;
    err << " loss=" << r.mean_loss << "\n";
  });

  fs::create_directories(dir);
  {
    std::ofstream trace(trace_path);
    write_trace(trace, result.trace);
  }
  {
    std::ofstream ckpt(ckpt_path);
    result.encoder.save(ckpt);
  }
  if (!result.exports.empty()) {
    std::ofstream emb(emb_path);
    bool header = true;
    for (const auto& snap : result.exports) {
      write_embeddings(emb, snap.epoch, train_split, snap.embeddings, header);
      header = false;
    }
  }

  const RidgeModel readout =
      ridge_fit(result.encoder.embed(train_split.features), train_split.labels, ridge);
  const double test_mae =
      mae(readout.predict(result.encoder.embed(test_split.features)), test_split.labels);
  nlohmann::ordered_json summary;
  summary["schema_version"] = 1;
  summary["loss"] = to_string(tc.loss.variant);
  summary["seed"] = tc.seed;
  summary["train_size"] = train_split.size();
  summary["test_size"] = test_split.size();
  summary["final_mean_loss"] = result.trace.back().mean_loss;
  summary["test_mae"] = test_mae;
  std::ofstream(summary_path) << summary.dump(2) << "\n";
  err << "test MAE " << test_mae << "; artifacts in " << dir.string() << "\n";
  return exit_code::kOk;
}

BenchmarkConfig benchmark_config(const RunConfig& rc, Index input_dim) {
  BenchmarkConfig bc;
  bc.train = train_config(rc);
  bc.train.export_epochs.clear();
  bc.optim = rc.optim;
  bc.encoder = encoder_config(rc, input_dim);
  bc.ridge.lambda = rc.ridge_lambda;
  bc.test_fraction = rc.test_fraction;
  bc.seeds = parsed_seeds(rc);
  bc.threads = threads_from_env();
  bc.validate();
  return bc;
}

Dataset benchmark_data(const RunConfig& rc) {
  if (!rc.data.empty()) return load_input(rc.data);
  return generate_synthetic(rc.synthetic, rc.data_seed);
}

void emit_report(const nlohmann::ordered_json& report, const RunConfig& rc, std::ostream& out,
                 std::ostream& err) {
  if (rc.out.empty()) {
    out << report.dump(2) << "\n";
    return;
  }
  std::ofstream(rc.out) << report.dump(2) << "\n";
  err << "report written to " << rc.out << "\n";
}

int cmd_benchmark(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.variants.empty()) throw ConfigError("--variants must name at least one loss");
  std::vector<LossVariant> variants;
  for (const auto& v : rc.variants) variants.push_back(parse_loss_variant(v));
  if (!rc.out.empty()) guard_overwrite(rc.out, rc.force);
  const Dataset data = benchmark_data(rc);
  const BenchmarkConfig bc = benchmark_config(rc, data.feature_dim());
  err << "benchmark: " << variants.size() << " variants x " << bc.seeds.size() << " seeds\n";
  emit_report(to_json(benchmark(data, variants, bc)), rc, out, err);
  return exit_code::kOk;
}

int cmd_ablate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.norms.empty()) throw ConfigError("--norms must name at least one distance norm");
  std::vector<DistanceNorm> norms;
  for (const auto& n : rc.norms) norms.push_back(parse_distance_norm(n));
  if (!rc.out.empty()) guard_overwrite(rc.out, rc.force);
  const Dataset data = benchmark_data(rc);
  RunConfig fixed = rc;
  fixed.loss = "dynlocrep";
  const BenchmarkConfig bc = benchmark_config(fixed, data.feature_dim());
  err << "ablation: " << norms.size() << " norms x " << bc.seeds.size() << " seeds\n";
  emit_report(to_json(ablate(data, norms, bc)), rc, out, err);
  return exit_code::kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contrastive regression with dynamic localized repulsion", "dynloc"};
  app.option_defaults()->always_capture_default();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", "dynloc 0.1.0");

  RunConfig rc;

  auto* generate = app.add_subcommand("generate", "Write a synthetic bimodal regression dataset");
  add_config_option(generate, rc);
  generate->add_option("--out", rc.out, "Output CSV path");
  generate->add_option("--seed", rc.seed, "Generator seed");
  add_synthetic_options(generate, rc);
  generate->add_flag("--force", rc.force, "Overwrite an existing output file");

  auto* train_cmd = app.add_subcommand("train", "Train an encoder on a dataset CSV");
  add_config_option(train_cmd, rc);
  train_cmd->add_option("--data", rc.data, "Input dataset CSV (id,y,f0,...)");
  train_cmd->add_option("--out-dir", rc.out_dir, "Directory for trace, checkpoint and exports");
  train_cmd->add_option("--seed", rc.seed, "Seed for split, initialization and shuffling");
  add_training_options(train_cmd, rc, true);
  train_cmd->add_option("--export-epochs", rc.export_epochs,
                        "1-based epochs whose train-split embeddings are exported")
      ->delimiter(',');
  train_cmd->add_flag("--force", rc.force, "Overwrite existing artifacts");

  auto* bench = app.add_subcommand("benchmark", "Compare losses over seeds with a ridge readout");
  add_config_option(bench, rc);
  bench->add_option("--data", rc.data, "Dataset CSV; synthetic data is generated when omitted");
  bench->add_option("--data-seed", rc.data_seed, "Seed of the generated dataset");
  add_synthetic_options(bench, rc);
  bench->add_option("--seeds", rc.seeds, "Run seeds")->delimiter(',');
  bench->add_option("--variants", rc.variants, "Losses to compare")->delimiter(',');
  add_training_options(bench, rc, true);
  bench->add_option("--out", rc.out, "Report path; stdout when omitted");
  bench->add_flag("--force", rc.force, "Overwrite an existing report");

  auto* abl = app.add_subcommand("ablate", "Localized loss under each neighbor distance norm");
  add_config_option(abl, rc);
  abl->add_option("--data", rc.data, "Dataset CSV; synthetic data is generated when omitted");
  abl->add_option("--data-seed", rc.data_seed, "Seed of the generated dataset");
  add_synthetic_options(abl, rc);
  abl->add_option("--seeds", rc.seeds, "Run seeds")->delimiter(',');
  abl->add_option("--norms", rc.norms, "Distance norms to sweep")->delimiter(',');
  add_training_options(abl, rc, false);
  abl->add_option("--out", rc.out, "Report path; stdout when omitted");
  abl->add_flag("--force", rc.force, "Overwrite an existing report");

  std::vector<std::string> argv_store{"dynloc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e, out, err);
    return rc_code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    apply_config(cmd, rc);
    if (cmd == generate) return cmd_generate(rc, err);
    if (cmd == train_cmd) return cmd_train(rc, err);
    if (cmd == bench) return cmd_benchmark(rc, out, err);
    return cmd_ablate(rc, out, err);
  } catch (const CommandFailure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const BatchTooSmallError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kDataError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_code::kSoftware;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kSoftware;
  }
}

}  // namespace dynloc
