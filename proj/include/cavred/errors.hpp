// Copyright (c) 2026 The cavred authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cavred {

  /// Base class of every exception thrown by the library.
  class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  /// A precondition on an argument was violated.
  class DomainError : public Error {
  public:
    using Error::Error;
  };

  /// An unscaled special-function value does not fit in a double.
  class OverflowError : public Error {
  public:
    using Error::Error;
  };

  /// A numerical procedure stopped before reaching its tolerance. The best
  /// estimate and its error bound are kept so callers can decide what to do.
  class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    double estimate_;
    double error_bound_;
  };

  /// Invalid configuration. `field` is the dotted path of the offending key
  /// (e.g. "geometry.R"); `line` is 0 when the source has no line structure.
  class ConfigError : public Error {
  public:
    ConfigError(const std::string& field, const std::string& message, int line = 0)
        : Error(format(field, message, line)), field_(field), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

  private:
    static std::string format(const std::string& field, const std::string& message, int line) {
      std::string out = field.empty() ? std::string("config") : field;
      if (line > 0) out += " (line " + std::to_string(line) + ")";
      return out + ": " + message;
    }

    std::string field_;
    int line_;
  };

} // namespace cavred
