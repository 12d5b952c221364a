// Copyright 2026 The theta-forge Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace theta_forge {

// Precondition violations: bad sizes, levels, parities, malformed input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A linear system that is too ill-conditioned to trust (e.g. C*tau + D).
class NumericalDegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The theta series could not reach the requested tolerance within the
// maximal truncation radius.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every probe theta constant vanished at the chosen base point.
class DegenerateBasePointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed theta expression; `column` is 1-based.
class ParseError : public DomainError {
 public:
  ParseError(const std::string& message, std::size_t column)
      : DomainError(message + " at column " + std::to_string(column)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

}  // namespace theta_forge
