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

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "dynloc/trainer.hpp"

using namespace dynloc;

namespace {

Dataset small_data(Index n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.feature_dim = 6;
  spec.informative_dims = 4;
  return generate_synthetic(spec, seed);
}

EncoderConfig small_encoder() {
  EncoderConfig e;
  e.input_dim = 6;
  e.hidden = {16, 16};
  e.output_dim = 8;
  return e;
}

TrainConfig small_train(int epochs) {
  TrainConfig t;
  t.epochs = epochs;
  t.batch_size = 16;
  t.nn_final = 5;
  t.seed = 3;
  return t;
}

}  // namespace

TEST_SUITE("trainer") {
  TEST_CASE("same config and seed give bit-identical results") {
    const Dataset d = small_data(64, 1);
    const auto a = train(d, small_train(4), OptimConfig{}, small_encoder());
    const auto b = train(d, small_train(4), OptimConfig{}, small_encoder());
    CHECK(a.encoder == b.encoder);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t e = 0; e < a.trace.size(); ++e) CHECK(a.trace[e].mean_loss == b.trace[e].mean_loss);
  }

  TEST_CASE("no epochs run leaves the initialization untouched") {
    const Trainer t(small_data(32, 2), small_train(3), OptimConfig{}, small_encoder());
    CHECK(t.encoder() == Encoder::init(small_encoder(), 3));
    CHECK(t.epochs_done() == 0);
  }

  TEST_CASE("trace records the decayed rate and the scheduled neighbor count") {
    const Dataset d = small_data(40, 4);
    TrainConfig c = small_train(25);
    c.batch_size = 8;
    c.nn_final = 2;
    OptimConfig o;
    o.learning_rate = 2e-4;
    std::vector<int> seen;
    const auto r = train(d, c, o, small_encoder(), [&](const EpochRecord& rec) { seen.push_back(rec.epoch); });
    REQUIRE(r.trace.size() == 25);
    CHECK(seen.size() == 25);
    for (int e = 0; e < 25; ++e) {
      const auto& rec = r.trace[static_cast<std::size_t>(e)];
      CHECK(rec.epoch == e + 1);
      CHECK(rec.learning_rate == 2e-4 * std::pow(0.9, e / 10));
      REQUIRE(rec.nn_count.has_value());
      CHECK(*rec.nn_count == neighbors_at_epoch(c.schedule(), e));
      CHECK(*rec.nn_count <= c.batch_size - 1);
    }
    CHECK(*r.trace.front().nn_count == 7);
    CHECK(*r.trace.back().nn_count == 2);
  }

  TEST_CASE("baselines leave the neighbor count empty") {
    TrainConfig c = small_train(2);
    c.loss.variant = LossVariant::y_aware;
    const auto r = train(small_data(32, 5), c, OptimConfig{}, small_encoder());
    for (const auto& rec : r.trace) CHECK_FALSE(rec.nn_count.has_value());
    std::ostringstream out;
    write_trace(out, r.trace);
    CHECK(out.str().find("\"nn_count\":null") != std::string::npos);
  }

  TEST_CASE("a trailing batch of one sample is dropped") {
    // 17 rows with batch 16 leave one sample over; training must not fail.
    TrainConfig c = small_train(3);
    const auto r = train(small_data(17, 6), c, OptimConfig{}, small_encoder());
    CHECK(r.trace.size() == 3);
    for (const auto& rec : r.trace) CHECK(std::isfinite(rec.mean_loss));
  }

  TEST_CASE("exports capture train embeddings at the requested epochs") {
    TrainConfig c = small_train(4);
    c.export_epochs = {1, 4};
    const Dataset d = small_data(32, 7);
    const auto r = train(d, c, OptimConfig{}, small_encoder());
    REQUIRE(r.exports.size() == 2);
    CHECK(r.exports[0].epoch == 1);
    CHECK(r.exports[1].epoch == 4);
    CHECK(r.exports[1].embeddings.rows() == 32);
    CHECK(std::abs(r.exports[1].embeddings.row(0).norm() - 1.0) < 1e-9);
  }

  TEST_CASE("mean epoch loss falls on well separated clusters") {
    SyntheticSpec spec;
    spec.n = 200;
    const Dataset d = generate_synthetic(spec, 0);
    int improved = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      TrainConfig c;
      c.seed = seed;
      EncoderConfig e;
      const auto r = train(d, c, OptimConfig{}, e);
      if (r.trace.back().mean_loss < r.trace.front().mean_loss) ++improved;
    }
    CHECK(improved >= 4);
  }

  TEST_CASE("config errors") {
    TrainConfig c = small_train(3);
    c.batch_size = 3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_train(0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_train(3);
    c.export_epochs = {4};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_train(3);
    c.nn_final = 16;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.loss.variant = LossVariant::rank_n_contrast;
    CHECK_NOTHROW(c.validate());
    EncoderConfig wrong = small_encoder();
    wrong.input_dim = 5;
    CHECK_THROWS_AS(Trainer(small_data(32, 1), small_train(3), OptimConfig{}, wrong), ConfigError);
  }
}
