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

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace dynloc {

/// Row-major dense matrix; one sample per row throughout the library.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Bad input values (non-finite labels, malformed rows).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid hyperparameters or configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A batch with fewer than two samples has no pairs.
class BatchTooSmallError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition (shape mismatch, empty neighbor set).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite values produced during a computation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed dataset or config file. The message names the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace dynloc
