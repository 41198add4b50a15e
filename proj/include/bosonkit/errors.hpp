// Copyright 2026 The bosonkit authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace bosonkit {

/// Non-square matrix, mismatched vector lengths, or inconsistent extents.
class shape_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Problem size beyond the configured cap (permanent dimension, photon number, ...).
class size_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Scalar parameter outside its admissible range.
class parameter_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Request outside a detector's outcome range, or a formula applied where it does not hold.
class domain_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Matrix failed the unitarity check. Carries the offending residual.
class unitarity_error : public std::runtime_error {
  public:
    unitarity_error(const std::string &what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

/// Numeric integration did not reach the requested accuracy.
/// Carries the best estimate and its error bound.
class accuracy_error : public std::runtime_error {
  public:
    accuracy_error(const std::string &what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

  private:
    double estimate_;
    double error_bound_;
};

}  // namespace bosonkit
