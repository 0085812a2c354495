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

#include "dynloc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace dynloc {

Dataset Dataset::subset(std::span<const Index> rows) const {
  Dataset out;
  out.features.resize(static_cast<Index>(rows.size()), feature_dim());
  out.labels.reserve(rows.size());
  out.ids.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Index>(r)) = features.row(rows[r]);
    out.labels.push_back(labels[static_cast<std::size_t>(rows[r])]);
    out.ids.push_back(ids[static_cast<std::size_t>(rows[r])]);
  }
  return out;
}

void Dataset::validate() const {
  if (static_cast<Index>(labels.size()) != size() || static_cast<Index>(ids.size()) != size()) {
    throw ContractError("dataset columns have inconsistent lengths");
  }
  if (!features.allFinite()) throw InputError("dataset features contain non-finite values");
  for (double y : labels) {
    if (!std::isfinite(y)) throw InputError("dataset labels contain non-finite values");
  }
}

void SyntheticSpec::validate() const {
  if (n < 1) throw ConfigError("synthetic sample count must be at least 1");
  if (feature_dim < 1) throw ConfigError("synthetic feature dimension must be at least 1");
  if (informative_dims < 0 || informative_dims > feature_dim) {
    throw ConfigError("informative dimensions must lie in [0, feature_dim]");
  }
  if (!(noise_std >= 0.0)) throw ConfigError("noise std must be non-negative");
  if (!(freq_min > 0.0) || !(freq_max >= freq_min)) {
    throw ConfigError("feature frequency range must satisfy 0 < min <= max");
  }
  if (!(std_young > 0.0) || !(std_old > 0.0)) throw ConfigError("mixture stds must be positive");
  if (!(weight_young >= 0.0) || !(weight_old >= 0.0) ||
      std::abs(weight_young + weight_old - 1.0) > 1e-12) {
    throw ConfigError("mixture weights must be non-negative and sum to 1");
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(spec.freq_min, spec.freq_max);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> a(static_cast<std::size_t>(spec.informative_dims));
  std::vector<double> phi(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] = freq(rng);
    phi[j] = phase(rng);
  }

  std::bernoulli_distribution pick_young(spec.weight_young);
  std::normal_distribution<double> young(spec.mean_young, spec.std_young);
  std::normal_distribution<double> old(spec.mean_old, spec.std_old);
  std::normal_distribution<double> unit_noise(0.0, 1.0);

  Dataset data;
  data.features.resize(spec.n, spec.feature_dim);
  data.labels.resize(static_cast<std::size_t>(spec.n));
  data.ids.resize(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) {
    const double y = pick_young(rng) ? young(rng) : old(rng);
    const double scaled = (y - 40.0) / 25.0;
    for (Index j = 0; j < spec.feature_dim; ++j) {
      if (j < spec.informative_dims) {
        const auto jj = static_cast<std::size_t>(j);
        data.features(i, j) = std::sin(a[jj] * scaled + phi[jj]) + spec.noise_std * unit_noise(rng);
      } else {
        data.features(i, j) = unit_noise(rng);
      }
    }
    data.labels[static_cast<std::size_t>(i)] = y;
    std::ostringstream id;
    id << "s" << std::setw(5) << std::setfill('0') << i;
    data.ids[static_cast<std::size_t>(i)] = id.str();
  }
  return data;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, long line, std::string_view column) {
  cell = trim(cell);
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line) + ": column '" + std::string(column) +
                         "' is not a number: '" + std::string(cell) + "'",
                     line);
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line) + ": column '" + std::string(column) +
                         "' is not finite",
                     line);
  }
  return value;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header", 1);
  ++line_no;
  const auto header = split_fields(trim(line));
  if (header.size() < 3 || trim(header[0]) != "id" || trim(header[1]) != "y") {
    throw ParseError("line 1: header must be id,y,f0,...", 1);
  }
  const std::size_t p = header.size() - 2;
  for (std::size_t j = 0; j < p; ++j) {
    if (trim(header[j + 2]) != "f" + std::to_string(j)) {
      throw ParseError("line 1: expected column f" + std::to_string(j), 1);
    }
  }

  std::vector<double> values;
  Dataset data;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(trim(line));
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(header.size()) + " columns, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::string id(trim(fields[0]));
    if (id.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty id", line_no);
    if (!seen.insert(id).second) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate id '" + id + "'", line_no);
    }
    data.labels.push_back(parse_cell(fields[1], line_no, "y"));
    for (std::size_t j = 0; j < p; ++j) {
      values.push_back(parse_cell(fields[j + 2], line_no, header[j + 2]));
    }
    data.ids.push_back(std::move(id));
  }
  const auto n = static_cast<Index>(data.labels.size());
  data.features = Eigen::Map<Matrix>(values.data(), n, static_cast<Index>(p));
  return data;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "id,y";
  for (Index j = 0; j < data.feature_dim(); ++j) out << ",f" << j;
  out << "\n" << std::setprecision(17);
  for (Index i = 0; i < data.size(); ++i) {
    out << data.ids[static_cast<std::size_t>(i)] << "," << data.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < data.feature_dim(); ++j) out << "," << data.features(i, j);
    out << "\n";
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, data);
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie strictly between 0 and 1");
  }
  const Index n = data.size();
  const auto test_n = static_cast<Index>(std::llround(static_cast<double>(n) * test_fraction));
  if (test_n < 2 || n - test_n < 2) {
    throw ConfigError("split of " + std::to_string(n) + " rows leaves a side with fewer than 2");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Index> test(order.begin(), order.begin() + test_n);
  std::vector<Index> train(order.begin() + test_n, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {data.subset(train), data.subset(test)};
}

void write_embeddings(std::ostream& out, int epoch, const Dataset& data, const Matrix& embeddings,
                      bool header) {
  if (embeddings.rows() != data.size()) throw ContractError("one embedding row per sample needed");
  if (header) {
    out << "epoch,id,y";
    for (Index j = 0; j < embeddings.cols(); ++j) out << ",z" << j;
    out << "\n";
  }
  out << std::setprecision(17);
  for (Index i = 0; i < data.size(); ++i) {
    out << epoch << "," << data.ids[static_cast<std::size_t>(i)] << ","
        << data.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < embeddings.cols(); ++j) out << "," << embeddings(i, j);
    out << "\n";
  }
}

}  // namespace dynloc
