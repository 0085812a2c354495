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

#include "dynloc/encoder.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <string>

namespace dynloc {

namespace {

constexpr const char* kCheckpointMagic = "dynloc-encoder";
constexpr int kCheckpointVersion = 1;

}  // namespace

void EncoderConfig::validate() const {
  if (input_dim < 1) throw ConfigError("encoder input dimension must be at least 1");
  if (output_dim < 1) throw ConfigError("encoder output dimension must be at least 1");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("hidden layer widths must be at least 1");
  }
}

Encoder::Encoder(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ConfigError("encoder needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.bias.size() != layer.weight.rows()) throw ContractError("bias/weight size mismatch");
    if (l > 0 && layer.weight.cols() != layers_[l - 1].weight.rows()) {
      throw ContractError("consecutive layer widths do not match");
    }
  }
}

Encoder Encoder::init(const EncoderConfig& config, std::uint64_t seed) {
  config.validate();
  std::vector<int> widths{config.input_dim};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(config.output_dim);

  std::mt19937_64 rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    const double bound = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer{Matrix(fan_out, fan_in), Vector::Zero(fan_out)};
    for (Index r = 0; r < fan_out; ++r) {
      for (Index c = 0; c < fan_in; ++c) layer.weight(r, c) = dist(rng);
    }
    layers.push_back(std::move(layer));
  }
  return Encoder(std::move(layers));
}

Index Encoder::input_dim() const { return layers_.empty() ? 0 : layers_.front().weight.cols(); }
Index Encoder::output_dim() const { return layers_.empty() ? 0 : layers_.back().weight.rows(); }

EmbeddingBatch Encoder::forward(const Matrix& features) {
  if (features.cols() != input_dim()) {
    throw ContractError("feature width " + std::to_string(features.cols()) +
                        " does not match encoder input " + std::to_string(input_dim()));
  }
  activations_.assign(1, features);
  pre_.clear();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = activations_.back() * layers_[l].weight.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    pre_.push_back(z);
    if (l + 1 < layers_.size()) activations_.push_back(z.cwiseMax(0.0));
  }
  EmbeddingBatch out;
  out.raw = pre_.back();
  out.unit = l2_normalize(out.raw);
  return out;
}

Matrix Encoder::embed(const Matrix& features) const {
  if (features.cols() != input_dim()) throw ContractError("feature width does not match encoder");
  Matrix a = features;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = a * layers_[l].weight.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    a = (l + 1 < layers_.size()) ? Matrix(z.cwiseMax(0.0)) : z;
  }
  return a;
}

EncoderGradients Encoder::backward(const Matrix& grad_raw) const {
  if (pre_.size() != layers_.size()) throw ContractError("backward called before forward");
  if (grad_raw.rows() != pre_.back().rows() || grad_raw.cols() != pre_.back().cols()) {
    throw ContractError("output gradient shape does not match the last forward batch");
  }
  EncoderGradients grads;
  grads.layers.resize(layers_.size());
  Matrix delta = grad_raw;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    grads.layers[l].weight = delta.transpose() * activations_[l];
    grads.layers[l].bias = delta.colwise().sum().transpose();
    if (l > 0) {
      Matrix upstream = delta * layers_[l].weight;
      const Matrix& z = pre_[l - 1];
      for (Index r = 0; r < upstream.rows(); ++r) {
        for (Index c = 0; c < upstream.cols(); ++c) {
          if (z(r, c) <= 0.0) upstream(r, c) = 0.0;
        }
      }
      delta = std::move(upstream);
    }
  }
  return grads;
}

bool Encoder::operator==(const Encoder& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& a = layers_[l];
    const auto& b = other.layers_[l];
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols()) return false;
    if (a.weight != b.weight || a.bias != b.bias) return false;
  }
  return true;
}

void Encoder::save(std::ostream& out) const {
  out << kCheckpointMagic << " v" << kCheckpointVersion << "\n";
  out << "layers " << layers_.size() << "\n";
  out << std::setprecision(17);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    out << "layer " << l << " " << layer.weight.rows() << " " << layer.weight.cols() << "\n";
    for (Index r = 0; r < layer.weight.rows(); ++r) {
      for (Index c = 0; c < layer.weight.cols(); ++c) {
        out << (c ? " " : "") << layer.weight(r, c);
      }
      out << "\n";
    }
    for (Index r = 0; r < layer.bias.size(); ++r) out << (r ? " " : "") << layer.bias(r);
    out << "\n";
  }
}

Encoder Encoder::load(std::istream& in) {
  std::string magic, version, tag;
  in >> magic >> version;
  if (!in || magic != kCheckpointMagic) throw ParseError("not an encoder checkpoint", 1);
  if (version != "v" + std::to_string(kCheckpointVersion)) {
    throw ParseError("unsupported checkpoint version " + version, 1);
  }
  std::size_t count = 0;
  in >> tag >> count;
  if (!in || tag != "layers" || count == 0) throw ParseError("bad layer count", 2);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l < count; ++l) {
    std::size_t index = 0;
    Index rows = 0, cols = 0;
    in >> tag >> index >> rows >> cols;
    if (!in || tag != "layer" || index != l || rows < 1 || cols < 1) {
      throw ParseError("bad header for layer " + std::to_string(l), -1);
    }
    DenseLayer layer{Matrix(rows, cols), Vector(rows)};
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) in >> layer.weight(r, c);
    }
    for (Index r = 0; r < rows; ++r) in >> layer.bias(r);
    if (!in) throw ParseError("truncated data in layer " + std::to_string(l), -1);
    layers.push_back(std::move(layer));
  }
  return Encoder(std::move(layers));
}

void OptimConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(decay_factor > 0.0) || decay_factor > 1.0) {
    throw ConfigError("learning-rate decay factor must lie in (0, 1]");
  }
  if (decay_every < 1) throw ConfigError("learning-rate decay interval must be at least 1");
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw ConfigError("weight decay must be non-negative");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("moment coefficients must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("optimizer epsilon must be positive");
}

double OptimConfig::rate_at_epoch(int epoch) const {
  return learning_rate * std::pow(decay_factor, epoch / decay_every);
}

AdamOptimizer::AdamOptimizer(const Encoder& shape, const OptimConfig& config) : config_(config) {
  config_.validate();
  for (const auto& layer : shape.layers()) {
    DenseLayer zero{Matrix::Zero(layer.weight.rows(), layer.weight.cols()),
                    Vector::Zero(layer.bias.size())};
    first_.push_back(zero);
    second_.push_back(zero);
  }
}

namespace {

template <typename Param, typename Grad>
void adam_update(Param& param, const Grad& grad, Param& m, Param& v, const OptimConfig& c,
                 double lr, double correction1, double correction2) {
  const auto g = (grad.array() + c.weight_decay * param.array()).eval();
  m.array() = c.beta1 * m.array() + (1.0 - c.beta1) * g;
  v.array() = c.beta2 * v.array() + (1.0 - c.beta2) * g.square();
  param.array() -=
      lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + c.epsilon);
}

}  // namespace

void AdamOptimizer::step(Encoder& encoder, const EncoderGradients& grads, double learning_rate) {
  auto& layers = encoder.layers();
  if (grads.layers.size() != layers.size() || first_.size() != layers.size()) {
    throw ContractError("gradient layout does not match the encoder");
  }
  ++step_;
  const double correction1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    adam_update(layers[l].weight, grads.layers[l].weight, first_[l].weight, second_[l].weight,
                config_, learning_rate, correction1, correction2);
    adam_update(layers[l].bias, grads.layers[l].bias, first_[l].bias, second_[l].bias, config_,
                learning_rate, correction1, correction2);
  }
}

}  // namespace dynloc
