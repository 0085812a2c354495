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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynloc/types.hpp"

namespace dynloc {

/// Guard used wherever a norm ends up in a denominator.
inline constexpr double kNormEpsilon = 1e-12;

enum class DistanceNorm { manhattan, euclidean, chebyshev, cosine };

/// Space in which nearest neighbors are searched.
enum class NeighborSpace { embedding, input };

std::string to_string(DistanceNorm norm);
std::string to_string(NeighborSpace space);
DistanceNorm parse_distance_norm(std::string_view name);
NeighborSpace parse_neighbor_space(std::string_view name);

/// Encoder outputs together with their row-normalized copy.
struct EmbeddingBatch {
  Matrix raw;
  Matrix unit;
};

/// Divides each row by max(||row||_2, 1e-12). Zero rows stay zero.
Matrix l2_normalize(const Matrix& raw);

/// s(i,k) = <unit_i, unit_k> / temperature.
Matrix similarity_matrix(const Matrix& unit, double temperature);

/// Symmetric pairwise distances with an exactly zero diagonal.
Matrix distance_matrix(const Matrix& points, DistanceNorm norm);

/// Per-anchor neighbor lists: `count` indices k != i, ascending by
/// distance, ties broken by ascending index.
class NeighborSets {
 public:
  NeighborSets() = default;
  NeighborSets(Index anchors, Index count);

  Index anchors() const noexcept { return anchors_; }
  Index count() const noexcept { return count_; }

  /// Neighbors of `anchor`, nearest first.
  std::span<const Index> of(Index anchor) const;
  std::span<Index> of(Index anchor);

  /// Every anchor's neighbor set is all other indices.
  static NeighborSets full(Index n);

  bool operator==(const NeighborSets&) const = default;

 private:
  Index anchors_ = 0;
  Index count_ = 0;
  std::vector<Index> flat_;
};

NeighborSets select_neighbors(const Matrix& distances, Index count);

}  // namespace dynloc
