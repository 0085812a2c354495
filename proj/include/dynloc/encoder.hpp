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
#include <iosfwd>
#include <vector>

#include "dynloc/embedding_geometry.hpp"
#include "dynloc/types.hpp"

namespace dynloc {

struct EncoderConfig {
  int input_dim = 16;
  std::vector<int> hidden = {64, 64};
  int output_dim = 32;

  void validate() const;
};

/// One affine layer: out = in * weight^T + bias. weight is (out x in).
struct DenseLayer {
  Matrix weight;
  Vector bias;
};

/// Parameter gradients, laid out like the encoder's layers.
struct EncoderGradients {
  std::vector<DenseLayer> layers;
};

/// Fully connected encoder: rectifier after every hidden layer, linear output.
class Encoder {
 public:
  Encoder() = default;
  explicit Encoder(std::vector<DenseLayer> layers);

  /// Uniform weights in +-sqrt(6 / fan_in), zero biases.
  static Encoder init(const EncoderConfig& config, std::uint64_t seed);

  Index input_dim() const;
  Index output_dim() const;
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  /// Raw and normalized outputs. Activations are cached for backward().
  EmbeddingBatch forward(const Matrix& features);

  /// Raw outputs only; does not touch the cache.
  Matrix embed(const Matrix& features) const;

  /// Gradients of the parameters given dL/d(raw output) for the batch most
  /// recently passed to forward().
  EncoderGradients backward(const Matrix& grad_raw) const;

  bool operator==(const Encoder& other) const;

  /// Versioned text checkpoint (see README for the layout).
  void save(std::ostream& out) const;
  static Encoder load(std::istream& in);

 private:
  std::vector<DenseLayer> layers_;
  // activations_[l] is the input to layer l; pre_[l] its affine output.
  std::vector<Matrix> activations_;
  std::vector<Matrix> pre_;
};

struct OptimConfig {
  double learning_rate = 1e-4;
  double decay_factor = 0.9;
  int decay_every = 10;
  double weight_decay = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
  /// Step-decayed rate for a 0-based epoch.
  double rate_at_epoch(int epoch) const;
};

/// Adam with classic L2 weight decay folded into the gradient.
class AdamOptimizer {
 public:
  AdamOptimizer(const Encoder& shape, const OptimConfig& config);

  void step(Encoder& encoder, const EncoderGradients& grads, double learning_rate);
  long steps() const noexcept { return step_; }

 private:
  OptimConfig config_;
  std::vector<DenseLayer> first_;
  std::vector<DenseLayer> second_;
  long step_ = 0;
};

}  // namespace dynloc
