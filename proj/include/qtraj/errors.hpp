// Copyright 2026 The qtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTRAJ_ERRORS_HPP
#define QTRAJ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qtraj {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (non-square input, mismatched dimensions).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A pivot fell below the relative singularity threshold.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Physical parameters outside their admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Function arguments violate a precondition (time ordering, normalization, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A trajectory weight reached zero or became negative.
class DegenerateWeightError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (non-finite values, step-size underflow).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qtraj

#endif  // QTRAJ_ERRORS_HPP
