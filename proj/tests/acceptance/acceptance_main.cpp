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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynloc/benchmark.hpp"
#include "dynloc/cli.hpp"
#include "dynloc/contrastive_losses.hpp"
#include "dynloc/nn_schedule.hpp"
#include "dynloc/readout.hpp"
#include "loss_checks.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace dynloc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// 1. Analytic gradients against central differences.
Outcome gradients() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (auto v : loss_checks::all_variants()) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      worst = std::max(worst, loss_checks::gradient_error(v, 1000 + seed, 8, 4));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 10.0,
          fmt("5 variants x 20 batches, max rel err %.3g (< 1e-4), %.2f s (< 10 s)", worst, secs)};
}

// 2. Forwards against loop oracles.
Outcome oracle_equivalence() {
  double worst = 0.0;
  int cases = 0;
  for (auto v : loss_checks::all_variants()) {
    for (int n : {3, 4, 5}) {
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        worst = std::max(worst, loss_checks::forward_gap(v, 7000 + 100 * n + seed, n));
        ++cases;
      }
    }
  }
  return {worst < 1e-10, fmt("%.0f batches, max gap %.3g (< 1e-10)", cases, worst)};
}

// 3. n - 1 neighbors against the full-denominator oracle.
Outcome degeneration() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    worst = std::max(worst, loss_checks::degeneration_gap(500 + seed));
  }
  return {worst < 1e-10, fmt("50 batches, max gap %.3g (< 1e-10)", worst)};
}

// 4. Two-sample closed forms.
Outcome closed_forms() {
  const auto cfg = loss_checks::config_for(LossVariant::dyn_loc_rep);
  Matrix same(2, 2);
  same << 1, 0, 1, 0;
  Matrix ortho(2, 2);
  ortho << 1, 0, 0, 1;
  const std::vector<double> equal{30.0, 30.0};
  const std::vector<double> apart{22.0, 31.0};
  const double a = loss_with_gradient(cfg, same, equal, 1).value;
  const double b = loss_with_gradient(cfg, ortho, apart, 1).value;
  const double c = loss_with_gradient(cfg, ortho, equal, 1).value;
  const bool ok = std::abs(a + 20.0) <= 1e-9 && std::abs(b) <= 1e-12 && std::abs(c) <= 1e-12;
  return {ok, fmt("identical pair %.12g (-20 +- 1e-9), orthogonal pairs %.3g and %.3g (0 +- 1e-12)",
                  a, b, c)};
}

// 5. Schedule values and the exhaustive sweep.
Outcome schedule() {
  const ScheduleConfig published{32, 14, 1, 50};
  bool ok = neighbors_at_epoch(published, 0) == 31 && neighbors_at_epoch(published, 25) == 22;
  for (int e = 49; e < 60; ++e) ok = ok && neighbors_at_epoch(published, e) == 14;
  for (int e = 1; e < 50; ++e) ok = ok && neighbors_at_epoch(published, e) <= neighbors_at_epoch(published, e - 1);

  long valid = 0;
  long rejected = 0;
  long two_step = 0;
  bool sweep_ok = true;
  for (int batch = 2; batch <= 64; ++batch) {
    for (int max_epochs = 1; max_epochs <= 100; ++max_epochs) {
      for (int step = 1; step <= std::max(1, max_epochs - 1); ++step) {
        for (int fin = 1; fin <= batch - 1; ++fin) {
          const ScheduleConfig c{batch, fin, step, max_epochs};
          if (step >= max_epochs || max_epochs / step <= 1) {
            bool threw = false;
            try {
              c.validate();
            } catch (const ConfigError&) {
              threw = true;
            }
            sweep_ok = sweep_ok && threw;
            ++rejected;
            continue;
          }
          ++valid;
          std::set<int> values;
          int prev = batch;
          for (int e = 0; e < max_epochs; ++e) {
            const int v = neighbors_at_epoch(c, e);
            if (v > prev || v < fin || v > batch - 1) sweep_ok = false;
            prev = v;
            values.insert(v);
          }
          if (max_epochs / step == 2) {
            ++two_step;
            const std::size_t expected = fin < batch - 1 ? 2 : 1;
            if (values.size() != expected) sweep_ok = false;
          }
        }
      }
    }
  }
  return {ok && sweep_ok,
          "config (32, 14, 1, 50) gives 31/22/14 " + std::string(ok ? "ok" : "WRONG") + "; " +
              std::to_string(valid) + " valid configs monotone and bounded, " +
              std::to_string(two_step) + " two-step configs with two plateaus, " +
              std::to_string(rejected) + " invalid configs rejected"};
}

// 6. Ridge against explicit normal equations.
Outcome ridge() {
  std::mt19937_64 rng(2026);
  const double lambdas[] = {0.0, 0.1, 1.0, 10.0};
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    std::uniform_int_distribution<int> dd(1, 10);
    const int d = dd(rng);
    std::uniform_int_distribution<int> nd(d + 2, 50);
    const int n = nd(rng);
    const double lambda = lambdas[inst % 4];
    const auto x = oracle::random_grid(rng, n, d, -2.0, 2.0);
    const auto y = oracle::random_labels(rng, n, 10.0, 80.0);
    const RidgeModel m = ridge_fit(testing_support::to_matrix(x), y, {lambda});
    const auto [beta, b0] = oracle::ridge(x, y, lambda);
    for (int j = 0; j < d; ++j) {
      worst = std::max(worst, std::abs(m.coefficients(j) - beta[j]) / std::max(1.0, std::abs(beta[j])));
    }
    worst = std::max(worst, std::abs(m.intercept - b0) / std::max(1.0, std::abs(b0)));
  }
  return {worst < 1e-8, fmt("100 instances, max gap %.3g (< 1e-8)", worst)};
}

std::string run_benchmark_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out;
  std::ostringstream err;
  code = run_cli(args, out, err);
  return out.str();
}

// 7. Two identical benchmark invocations.
Outcome determinism() {
  const std::vector<std::string> args{
      "benchmark", "--n", "80", "--feature-dim", "8", "--informative-dims", "4", "--seeds", "0,1",
      "--epochs", "3", "--batch-size", "16", "--nn-final", "4", "--hidden", "16,16",
      "--embedding-dim", "8"};
  int c1 = 0;
  int c2 = 0;
  const std::string a = run_benchmark_cli(args, c1);
  const std::string b = run_benchmark_cli(args, c2);
  if (c1 != 0 || c2 != 0) return {false, "benchmark command failed"};
  const auto ja = numeric_sections(nlohmann::ordered_json::parse(a)).dump();
  const auto jb = numeric_sections(nlohmann::ordered_json::parse(b)).dump();
  return {ja == jb, "numeric sections " + std::string(ja == jb ? "byte-identical" : "DIFFER") +
                        " (" + std::to_string(ja.size()) + " bytes)"};
}

// 8. Synthetic end-to-end comparison.
Outcome synthetic_benchmark() {
  const auto t0 = Clock::now();
  const Dataset data = generate_synthetic(SyntheticSpec{}, 0);
  BenchmarkConfig c;
  c.encoder.input_dim = static_cast<int>(data.feature_dim());
  c.optim.learning_rate = 1e-3;
  const BenchmarkReport r = benchmark(data, loss_checks::all_variants(), c);
  const double ours = r.arm("dynlocrep").mean;
  double worst = 0.0;
  for (const char* name : {"yaware", "threshold", "exponential", "rnc"}) {
    worst = std::max(worst, r.arm(name).mean);
  }
  const double raw = r.raw_feature_ridge.mean;
  const double untrained = r.untrained_encoder_ridge.mean;
  const bool ok = ours < raw && ours < untrained && ours <= worst;
  std::string detail = fmt("dynlocrep %.3f vs raw ridge %.3f, untrained %.3f", ours, raw, untrained);
  detail += fmt(", worst baseline %.3f; %.1f s", worst, seconds_since(t0));
  for (const auto& arm : r.arms) detail += "\n       " + arm.name + fmt(" %.3f +- %.3f", arm.mean, arm.std);
  return {ok, detail};
}

// 9. Ablation over all four norms through the command.
Outcome ablation() {
  const auto t0 = Clock::now();
  int code = 0;
  const std::string text = run_benchmark_cli({"ablate"}, code);
  if (code != 0) return {false, "ablate exited with " + std::to_string(code)};
  const auto j = nlohmann::json::parse(text);
  bool ok = j["kind"] == "ablation" && j["norms"].size() == 4;
  for (const char* norm : {"manhattan", "euclidean", "chebyshev", "cosine"}) {
    ok = ok && j["norms"].contains(norm) && j["norms"][norm]["mae"].size() == 5 &&
         j["reference"]["values"].contains(norm);
  }
  ok = ok && j["reference"]["paper_reference"] == true && j["baselines"].size() == 2;
  std::string detail = fmt("4 norms x 5 seeds, %.1f s", seconds_since(t0));
  for (const char* norm : {"manhattan", "euclidean", "chebyshev", "cosine"}) {
    if (j["norms"].contains(norm)) {
      detail += std::string("\n       ") + norm +
                fmt(" %.3f +- %.3f", j["norms"][norm]["mean"].get<double>(),
                    j["norms"][norm]["std"].get<double>());
    }
  }
  return {ok, detail};
}

// 10. Attraction weights of every anchor sum to one, read both from the
// kernel matrix and from the loss gradient.
Outcome weight_normalization() {
  double worst_direct = 0.0;
  double worst_loss = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(900 + seed);
    const int n = 8;
    const auto raw = oracle::random_grid(rng, n, 4);
    const auto y = oracle::random_labels(rng, n, 27.0, 33.0);
    const Matrix w = positiveness_matrix(y, {KernelKind::gaussian, loss_checks::kSigma});
    const Matrix unit = l2_normalize(testing_support::to_matrix(raw));
    const Matrix s = similarity_matrix(unit, loss_checks::kTemperature);
    const NeighborSets nbrs = select_neighbors(distance_matrix(unit, DistanceNorm::manhattan), 1);
    const auto g = similarity_loss(LossVariant::dyn_loc_rep, s, w, y, &nbrs).grad_similarity;
    for (int i = 0; i < n; ++i) {
      const double total = w.row(i).sum() - w(i, i);
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k != i) sum += w(i, k) / total;
      }
      worst_direct = std::max(worst_direct, std::abs(sum - 1.0));
      // With one neighbor j the row gradient sums to -(sum of weights) * w(i, j).
      const Index j = nbrs.of(i)[0];
      worst_loss = std::max(worst_loss, std::abs(-g.row(i).sum() / w(i, j) - 1.0));
    }
  }
  return {worst_direct <= 1e-9 && worst_loss <= 1e-9,
          fmt("400 anchors, kernel rows off by %.3g, loss-implied sums off by %.3g (<= 1e-9)",
              worst_direct, worst_loss)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gradient correctness", gradients},
      {"oracle equivalence", oracle_equivalence},
      {"degeneration identity", degeneration},
      {"closed forms", closed_forms},
      {"schedule conformance", schedule},
      {"ridge oracle", ridge},
      {"determinism", determinism},
      {"synthetic benchmark", synthetic_benchmark},
      {"ablation harness", ablation},
      {"weight normalization", weight_normalization}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
