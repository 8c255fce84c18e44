// Copyright 2026 The polabh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLABH_ERRORS_HPP
#define POLABH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polabh {

/// Base of every error raised by the library. `kind()` is the stable name
/// used in CLI messages and tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Errors caused by an invalid request (bad config, oversize spaces).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Errors signalling that a numerical procedure or a perturbative mapping
/// broke down for otherwise well-formed input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define POLABH_DEFINE_ERROR(Name, Base)                              \
  class Name : public Base {                                         \
   public:                                                           \
    explicit Name(const std::string& what) : Base(#Name, what) {}    \
  };

POLABH_DEFINE_ERROR(ConfigError, UsageError)
POLABH_DEFINE_ERROR(DimensionOverflow, UsageError)
POLABH_DEFINE_ERROR(InadmissibleState, UsageError)
POLABH_DEFINE_ERROR(IndexOutOfRange, UsageError)
POLABH_DEFINE_ERROR(DimMismatch, UsageError)
POLABH_DEFINE_ERROR(TruncationExceeded, UsageError)

POLABH_DEFINE_ERROR(DegenerateDetuning, NumericalError)
POLABH_DEFINE_ERROR(NoInteriorMaximum, NumericalError)
POLABH_DEFINE_ERROR(NoCrossover, NumericalError)
POLABH_DEFINE_ERROR(ConvergenceFailure, NumericalError)
POLABH_DEFINE_ERROR(NonHermitian, NumericalError)
POLABH_DEFINE_ERROR(CalibrationFailure, NumericalError)

#undef POLABH_DEFINE_ERROR

}  // namespace polabh

#endif  // POLABH_ERRORS_HPP
