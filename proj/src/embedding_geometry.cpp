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

#include "dynloc/embedding_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dynloc {

std::string to_string(DistanceNorm norm) {
  switch (norm) {
    case DistanceNorm::manhattan:
      return "manhattan";
    case DistanceNorm::euclidean:
      return "euclidean";
    case DistanceNorm::chebyshev:
      return "chebyshev";
    case DistanceNorm::cosine:
      return "cosine";
  }
  return "unknown";
}

std::string to_string(NeighborSpace space) {
  return space == NeighborSpace::embedding ? "embedding" : "input";
}

DistanceNorm parse_distance_norm(std::string_view name) {
  if (name == "manhattan") return DistanceNorm::manhattan;
  if (name == "euclidean") return DistanceNorm::euclidean;
  if (name == "chebyshev") return DistanceNorm::chebyshev;
  if (name == "cosine") return DistanceNorm::cosine;
  throw ConfigError("unknown distance norm: " + std::string(name));
}

NeighborSpace parse_neighbor_space(std::string_view name) {
  if (name == "embedding") return NeighborSpace::embedding;
  if (name == "input") return NeighborSpace::input;
  throw ConfigError("unknown neighbor space: " + std::string(name));
}

Matrix l2_normalize(const Matrix& raw) {
  Matrix unit(raw.rows(), raw.cols());
  for (Index i = 0; i < raw.rows(); ++i) {
    const double norm = std::max(raw.row(i).norm(), kNormEpsilon);
    unit.row(i) = raw.row(i) / norm;
  }
  return unit;
}

Matrix similarity_matrix(const Matrix& unit, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be a positive finite number");
  }
  Matrix s = unit * unit.transpose();
  s /= temperature;
  // The product is symmetric in exact arithmetic; make it so bitwise.
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index k = i + 1; k < s.cols(); ++k) s(k, i) = s(i, k);
  }
  return s;
}

namespace {

double pair_distance(const Matrix& p, Index a, Index b, DistanceNorm norm) {
  const auto diff = p.row(a) - p.row(b);
  switch (norm) {
    case DistanceNorm::manhattan:
      return diff.cwiseAbs().sum();
    case DistanceNorm::euclidean:
      return std::sqrt(diff.squaredNorm());
    case DistanceNorm::chebyshev:
      return p.cols() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
    case DistanceNorm::cosine: {
      const double na = std::max(p.row(a).norm(), kNormEpsilon);
      const double nb = std::max(p.row(b).norm(), kNormEpsilon);
      return 1.0 - p.row(a).dot(p.row(b)) / (na * nb);
    }
  }
  return 0.0;
}

}  // namespace

Matrix distance_matrix(const Matrix& points, DistanceNorm norm) {
  const Index n = points.rows();
  if (n < 2) throw BatchTooSmallError("distance matrix needs at least two points");
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = i + 1; k < n; ++k) {
      const double v = pair_distance(points, i, k, norm);
      d(i, k) = v;
      d(k, i) = v;
    }
  }
  return d;
}

NeighborSets::NeighborSets(Index anchors, Index count)
    : anchors_(anchors), count_(count), flat_(static_cast<std::size_t>(anchors * count)) {}

std::span<const Index> NeighborSets::of(Index anchor) const {
  return {flat_.data() + anchor * count_, static_cast<std::size_t>(count_)};
}

std::span<Index> NeighborSets::of(Index anchor) {
  return {flat_.data() + anchor * count_, static_cast<std::size_t>(count_)};
}

NeighborSets NeighborSets::full(Index n) {
  NeighborSets sets(n, n - 1);
  for (Index i = 0; i < n; ++i) {
    auto row = sets.of(i);
    Index pos = 0;
    for (Index k = 0; k < n; ++k) {
      if (k != i) row[pos++] = k;
    }
  }
  return sets;
}

NeighborSets select_neighbors(const Matrix& distances, Index count) {
  const Index n = distances.rows();
  if (distances.cols() != n) throw ContractError("distance matrix must be square");
  if (count < 1 || count > n - 1) {
    throw ConfigError("neighbor count " + std::to_string(count) + " outside [1, " +
                      std::to_string(n - 1) + "]");
  }
  NeighborSets sets(n, count);
  std::vector<Index> order(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    Index pos = 0;
    for (Index k = 0; k < n; ++k) {
      if (k != i) order[pos++] = k;
    }
    auto closer = [&](Index a, Index b) {
      const double da = distances(i, a);
      const double db = distances(i, b);
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + count, order.end(), closer);
    std::copy_n(order.begin(), count, sets.of(i).begin());
  }
  return sets;
}

}  // namespace dynloc
