// Copyright 2026 The ifp Authors
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

namespace ifp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear-algebra failure (singular or ill-conditioned system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text that does not follow a documented grammar. Carries the 1-based
/// line number, or 0 when the problem is not tied to a single line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const { return line_; }

  /// Same error with `prefix: ` prepended to the message (e.g. a file name).
  ParseError with_context(const std::string& prefix) const {
    return ParseError(prefix + ": " + what(), line_, Raw{});
  }

 private:
  struct Raw {};
  ParseError(const std::string& message, int line, Raw) : std::runtime_error(message), line_(line) {}

  int line_;
};

}  // namespace ifp
