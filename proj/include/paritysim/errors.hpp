// Copyright 2026 The paritysim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARITYSIM_ERRORS_HPP
#define PARITYSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace paritysim {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Ensemble too small or without spread to support a fit.
class DegenerateEnsembleError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The sensitivity diverges because the response slope vanishes.
class DivergenceError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Parity model fit did not converge or the data cannot identify it.
class FitFailure : public std::runtime_error {
  public:
    FitFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Invalid experiment configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// Filesystem failure while persisting or loading data.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace paritysim

#endif  // PARITYSIM_ERRORS_HPP
