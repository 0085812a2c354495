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

#include "dynloc/contrastive_losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dynloc {

std::string to_string(LossVariant variant) {
  switch (variant) {
    case LossVariant::dyn_loc_rep:
      return "dynlocrep";
    case LossVariant::y_aware:
      return "yaware";
    case LossVariant::threshold:
      return "threshold";
    case LossVariant::exponential:
      return "exponential";
    case LossVariant::rank_n_contrast:
      return "rnc";
  }
  return "unknown";
}

LossVariant parse_loss_variant(std::string_view name) {
  if (name == "dynlocrep") return LossVariant::dyn_loc_rep;
  if (name == "yaware") return LossVariant::y_aware;
  if (name == "threshold") return LossVariant::threshold;
  if (name == "exponential") return LossVariant::exponential;
  if (name == "rnc") return LossVariant::rank_n_contrast;
  throw ConfigError("unknown loss variant: " + std::string(name));
}

void LossConfig::validate() const {
  kernel.validate();
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError("temperature must be a positive finite number");
  }
}

namespace {

// Max-shifted log-sum-exp over the gathered exponents.
double log_sum_exp(std::span<const double> x) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : x) hi = std::max(hi, v);
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

void check_square(const Matrix& m, Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw ContractError(std::string(what) + " must be " + std::to_string(n) + "x" +
                        std::to_string(n));
  }
}

void dynlocrep_terms(const Matrix& s, const Matrix& w, const NeighborSets& nbrs, double& value,
                     Matrix* grad) {
  const Index n = s.rows();
  check_square(w, n, "positiveness matrix");
  if (nbrs.anchors() != n) throw ContractError("neighbor sets do not match batch size");
  if (nbrs.count() < 1) throw ContractError("neighbor sets must be non-empty");

  std::vector<double> exps(static_cast<std::size_t>(nbrs.count()));
  for (Index i = 0; i < n; ++i) {
    double normalizer = 0.0;
    for (Index t = 0; t < n; ++t) {
      if (t != i) normalizer += w(i, t);
    }
    if (normalizer < kWeightGuard) continue;

    const auto hood = nbrs.of(i);
    for (std::size_t j = 0; j < hood.size(); ++j) {
      const Index t = hood[j];
      exps[j] = s(i, t) * (1.0 - w(i, t));
    }
    const double lse = log_sum_exp(exps);

    double attraction = 0.0;
    double mass = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;
      const double c = w(i, k) / normalizer;
      attraction += c * s(i, k);
      mass += c;
      if (grad) (*grad)(i, k) -= c;
    }
    value += mass * lse - attraction;

    if (grad) {
      for (std::size_t j = 0; j < hood.size(); ++j) {
        const Index t = hood[j];
        (*grad)(i, t) += mass * (1.0 - w(i, t)) * std::exp(exps[j] - lse);
      }
    }
  }
}

// Shared pair loop for the four global baselines:
//   -sum_i sum_{k != i} c(i,k) * (s(i,k) - log sum_{t in T(i,k)} exp(a(i,t) s(i,t)))
void baseline_terms(LossVariant variant, const Matrix& s, const Matrix& w,
                    std::span<const double> labels, double& value, Matrix* grad) {
  const Index n = s.rows();
  const bool weighted = variant != LossVariant::rank_n_contrast;
  if (weighted) {
    check_square(w, n, "positiveness matrix");
  } else if (static_cast<Index>(labels.size()) != n) {
    throw ContractError("label count does not match batch size");
  }

  std::vector<double> exps;
  std::vector<double> scales;
  std::vector<Index> members;
  exps.reserve(static_cast<std::size_t>(n));
  scales.reserve(static_cast<std::size_t>(n));
  members.reserve(static_cast<std::size_t>(n));

  for (Index i = 0; i < n; ++i) {
    double anchor_normalizer = 0.0;
    if (weighted) {
      for (Index t = 0; t < n; ++t) {
        if (t != i) anchor_normalizer += w(i, t);
      }
    }

    for (Index k = 0; k < n; ++k) {
      if (k == i) continue;

      double coef = 1.0;
      switch (variant) {
        case LossVariant::y_aware:
        case LossVariant::exponential:
          if (anchor_normalizer < kWeightGuard) continue;
          coef = w(i, k) / anchor_normalizer;
          break;
        case LossVariant::threshold: {
          double lesser = 0.0;
          for (Index t = 0; t < n; ++t) {
            if (t != i && w(i, t) < w(i, k)) lesser += w(i, t);
          }
          if (lesser < kWeightGuard) continue;
          coef = w(i, k) / lesser;
          break;
        }
        default:
          break;
      }

      exps.clear();
      scales.clear();
      members.clear();
      for (Index t = 0; t < n; ++t) {
        if (t == i) continue;
        bool member = false;
        double scale = 1.0;
        switch (variant) {
          case LossVariant::y_aware:
            member = t != k;
            break;
          case LossVariant::exponential:
            member = t != k;
            scale = 1.0 - w(i, t);
            break;
          case LossVariant::threshold:
            member = w(i, t) < w(i, k);
            break;
          case LossVariant::rank_n_contrast:
            member = std::abs(labels[i] - labels[t]) >= std::abs(labels[i] - labels[k]);
            break;
          default:
            break;
        }
        if (!member) continue;
        members.push_back(t);
        scales.push_back(scale);
        exps.push_back(scale * s(i, t));
      }
      if (members.empty()) continue;

      const double lse = log_sum_exp(exps);
      value -= coef * (s(i, k) - lse);
      if (grad) {
        (*grad)(i, k) -= coef;
        for (std::size_t j = 0; j < members.size(); ++j) {
          (*grad)(i, members[j]) += coef * scales[j] * std::exp(exps[j] - lse);
        }
      }
    }
  }
}

}  // namespace

double dynlocrep_forward(const Matrix& s, const Matrix& w, const NeighborSets& nbrs) {
  double value = 0.0;
  dynlocrep_terms(s, w, nbrs, value, nullptr);
  return value;
}

double baseline_forward(LossVariant variant, const Matrix& s, const Matrix& w,
                        std::span<const double> labels) {
  if (variant == LossVariant::dyn_loc_rep) {
    throw ContractError("baseline_forward does not evaluate the localized loss");
  }
  double value = 0.0;
  baseline_terms(variant, s, w, labels, value, nullptr);
  return value;
}

SimilarityLoss similarity_loss(LossVariant variant, const Matrix& s, const Matrix& w,
                               std::span<const double> labels, const NeighborSets* nbrs) {
  if (s.rows() != s.cols()) throw ContractError("similarity matrix must be square");
  SimilarityLoss out;
  out.grad_similarity = Matrix::Zero(s.rows(), s.cols());
  if (variant == LossVariant::dyn_loc_rep) {
    if (nbrs == nullptr) throw ContractError("localized loss needs neighbor sets");
    dynlocrep_terms(s, w, *nbrs, out.value, &out.grad_similarity);
  } else {
    baseline_terms(variant, s, w, labels, out.value, &out.grad_similarity);
  }
  return out;
}

Matrix chain_to_raw(const Matrix& grad_similarity, const EmbeddingBatch& batch,
                    double temperature) {
  const Matrix sym = grad_similarity + grad_similarity.transpose();
  const Matrix grad_unit = (sym * batch.unit) / temperature;
  Matrix grad_raw(batch.raw.rows(), batch.raw.cols());
  for (Index i = 0; i < batch.raw.rows(); ++i) {
    const double norm = batch.raw.row(i).norm();
    if (norm > kNormEpsilon) {
      const double radial = grad_unit.row(i).dot(batch.unit.row(i));
      grad_raw.row(i) = (grad_unit.row(i) - radial * batch.unit.row(i)) / norm;
    } else {
      grad_raw.row(i) = grad_unit.row(i) / kNormEpsilon;
    }
  }
  return grad_raw;
}

LossOutput loss_with_gradient(const LossConfig& config, const EmbeddingBatch& batch,
                              std::span<const double> labels, Index nn_count,
                              const Matrix* input_points) {
  config.validate();
  const Index n = batch.raw.rows();
  if (n < 2) throw BatchTooSmallError("loss needs a batch of at least two samples");
  if (batch.unit.rows() != n || batch.unit.cols() != batch.raw.cols()) {
    throw ContractError("raw and unit embeddings differ in shape");
  }
  if (static_cast<Index>(labels.size()) != n) {
    throw ContractError("label count does not match batch size");
  }

  const Matrix s = similarity_matrix(batch.unit, config.temperature);
  Matrix w;
  if (config.variant != LossVariant::rank_n_contrast) w = positiveness_matrix(labels, config.kernel);

  NeighborSets nbrs;
  if (config.variant == LossVariant::dyn_loc_rep) {
    if (nn_count < 1) throw ConfigError("neighbor count must be at least 1");
    const Index count = std::min(nn_count, n - 1);
    const Matrix* points = &batch.unit;
    if (config.nn_space == NeighborSpace::input) {
      if (input_points == nullptr || input_points->rows() != n) {
        throw ContractError("input-space neighbor search needs one input row per sample");
      }
      points = input_points;
    }
    nbrs = select_neighbors(distance_matrix(*points, config.distance_norm), count);
  }

  SimilarityLoss sl = similarity_loss(config.variant, s, w, labels, &nbrs);
  LossOutput out;
  out.value = sl.value;
  out.grad_raw = chain_to_raw(sl.grad_similarity, batch, config.temperature);
  if (config.reduction == Reduction::mean) {
    out.value /= static_cast<double>(n);
    out.grad_raw /= static_cast<double>(n);
  }
  if (!std::isfinite(out.value) || !out.grad_raw.allFinite()) {
    throw NumericalError("non-finite " + to_string(config.variant) + " loss or gradient");
  }
  return out;
}

LossOutput loss_with_gradient(const LossConfig& config, const Matrix& raw,
                              std::span<const double> labels, Index nn_count,
                              const Matrix* input_points) {
  EmbeddingBatch batch{raw, l2_normalize(raw)};
  return loss_with_gradient(config, batch, labels, nn_count, input_points);
}

}  // namespace dynloc
