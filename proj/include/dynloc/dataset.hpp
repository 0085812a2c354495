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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynloc/types.hpp"

namespace dynloc {

/// Tabular regression data: one row of features and one label per sample.
struct Dataset {
  Matrix features;
  std::vector<double> labels;
  std::vector<std::string> ids;

  Index size() const noexcept { return features.rows(); }
  Index feature_dim() const noexcept { return features.cols(); }

  /// Rows selected by `rows`, in that order.
  Dataset subset(std::span<const Index> rows) const;
  void validate() const;
};

/// Two-component gaussian label mixture with sinusoidal informative features.
struct SyntheticSpec {
  Index n = 500;
  Index feature_dim = 16;
  Index informative_dims = 8;
  double noise_std = 0.1;
  /// Range of the per-feature frequencies a_j.
  double freq_min = 3.0;
  double freq_max = 6.0;
  double mean_young = 25.0;
  double mean_old = 68.0;
  double std_young = 5.0;
  double std_old = 6.0;
  double weight_young = 0.5;
  double weight_old = 0.5;

  void validate() const;
};

/// Labels come from the mixture. Informative feature j is
/// sin(a_j * (y - 40) / 25 + phi_j) plus gaussian noise of `noise_std`, with
/// a_j and phi_j drawn once from the seed; the other columns are standard
/// normal noise.
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Reads `id,y,f0,...,f{p-1}`. Throws ParseError naming the line on a
/// missing column, a non-numeric or non-finite cell, or a duplicate id.
Dataset read_csv(std::istream& in);
Dataset load_csv(const std::filesystem::path& path);

/// Writes the same layout with 17 significant digits.
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::filesystem::path& path, const Dataset& data);

/// Seeded 80:20-style split. Test size is round(n * test_fraction); both
/// sides keep the original row order.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed);

/// Writes `epoch,id,y,z0,...,z{d-1}` rows; the header is emitted when
/// `header` is set.
void write_embeddings(std::ostream& out, int epoch, const Dataset& data, const Matrix& embeddings,
                      bool header);

}  // namespace dynloc
