// Copyright 2026 The qmem Authors
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

namespace qmem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or parameter values violate an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Selection matrix F has dependent rows.
class SelectionRankError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A requested size exceeds a configured cap (qubit count, storage).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A matrix basis is not closed under multiplication to tolerance.
class ClosureViolation : public Error {
 public:
  ClosureViolation(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Density matrix or mean vector is not a valid quantum state.
class StateValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared while integrating an ODE.
class NumericOverflow : public Error {
 public:
  NumericOverflow(const std::string& what, double time)
      : Error(what), time_(time) {}
  /// Time at which the first non-finite value was detected.
  double time() const { return time_; }

 private:
  double time_;
};

/// Generator image has a component outside span{I, X_1..X_n}.
class ModelInconsistency : public Error {
 public:
  using Error::Error;
};

/// A conserved quantity drifted beyond tolerance during integration.
class IntegratorError : public Error {
 public:
  using Error::Error;
};

/// Object used before a required computation completed.
class StateError : public Error {
 public:
  using Error::Error;
};

/// g(z) = 0: no control direction changes the deviation rate.
class NoDescentDirection : public Error {
 public:
  using Error::Error;
};

}  // namespace qmem
