// Copyright 2026 The udcert Authors
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

namespace udcert {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input, e.g. a Pauli label with a character outside IXYZ.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation was violated (dimension mismatch, bad size,
/// non-finite parameters, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Variational parameters collapsed to a zero eigenvalue vector.
class DegenerateParameterError : public Error {
 public:
  using Error::Error;
};

/// The starting scheme handed to the minimal-scheme search is not UD.
class SearchPreconditionError : public Error {
 public:
  using Error::Error;
};

/// The stability coefficient has a zero denominator.
class UndefinedAlphaError : public Error {
 public:
  using Error::Error;
};

/// A certification produced by the kernel shortcut carries no optimal Delta.
class NoDeltaError : public Error {
 public:
  using Error::Error;
};

/// Domain error for special functions evaluated outside their support.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scheme file could not be loaded. The message names the offending entry.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing a report.
class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace detail
}  // namespace udcert
