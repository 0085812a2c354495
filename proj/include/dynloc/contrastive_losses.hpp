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

#include "dynloc/embedding_geometry.hpp"
#include "dynloc/kernel_weights.hpp"
#include "dynloc/types.hpp"

namespace dynloc {

enum class LossVariant { dyn_loc_rep, y_aware, threshold, exponential, rank_n_contrast };

/// CLI spellings: dynlocrep, yaware, threshold, exponential, rnc.
std::string to_string(LossVariant variant);
LossVariant parse_loss_variant(std::string_view name);

enum class Reduction { sum, mean };

/// Weight normalizers below this value make the affected anchor (or pair)
/// contribute nothing.
inline constexpr double kWeightGuard = 1e-12;

struct LossConfig {
  LossVariant variant = LossVariant::dyn_loc_rep;
  KernelSpec kernel;
  double temperature = 0.1;
  DistanceNorm distance_norm = DistanceNorm::manhattan;
  NeighborSpace nn_space = NeighborSpace::embedding;
  Reduction reduction = Reduction::sum;

  void validate() const;
};

struct LossOutput {
  double value = 0.0;
  /// dL/d(raw embeddings), chained through row normalization.
  Matrix grad_raw;
};

/// Value and dL/ds of a loss as a function of the similarity matrix.
struct SimilarityLoss {
  double value = 0.0;
  Matrix grad_similarity;
};

/// Dynamic localized repulsion, summed over anchors.
///
/// For anchor i the attraction weights are w(i,k) / sum_{t != i} w(i,t) over
/// every k != i, and the repulsion denominator runs over the anchor's
/// neighbor set only, with terms exp(s(i,t) * (1 - w(i,t))). Anchors whose
/// weight normalizer falls below kWeightGuard contribute zero.
double dynlocrep_forward(const Matrix& s, const Matrix& w, const NeighborSets& nbrs);

/// One of the four global baselines. `w` is ignored by rank_n_contrast and
/// `labels` by the kernel-weighted variants. Pairs whose denominator set is
/// empty contribute zero.
double baseline_forward(LossVariant variant, const Matrix& s, const Matrix& w,
                        std::span<const double> labels);

/// Value and gradient with respect to s. Neighbor sets and weights are
/// treated as constants.
SimilarityLoss similarity_loss(LossVariant variant, const Matrix& s, const Matrix& w,
                               std::span<const double> labels, const NeighborSets* nbrs);

/// Back-propagates dL/ds through s = <unit_i, unit_k> / temperature and the
/// row normalization unit = raw / max(||raw||, eps).
Matrix chain_to_raw(const Matrix& grad_similarity, const EmbeddingBatch& batch,
                    double temperature);

/// Full loss evaluation on a batch of raw embeddings.
///
/// `nn_count` is the scheduled neighbor count; it is clamped to n - 1 here so
/// short final batches work. `input_points` is required when the config
/// selects neighbors in input space and must have one row per sample.
LossOutput loss_with_gradient(const LossConfig& config, const EmbeddingBatch& batch,
                              std::span<const double> labels, Index nn_count,
                              const Matrix* input_points = nullptr);

LossOutput loss_with_gradient(const LossConfig& config, const Matrix& raw,
                              std::span<const double> labels, Index nn_count,
                              const Matrix* input_points = nullptr);

}  // namespace dynloc
