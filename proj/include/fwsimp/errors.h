// Copyright 2026 The fwsimp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FWSIMP_ERRORS_H_
#define FWSIMP_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fwsimp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class WellFormednessError : public Error {
 public:
  using Error::Error;
};

// A Return matched in the outermost chain invocation.
class TopLevelReturn : public Error {
 public:
  using Error::Error;
};

// The call budget reached zero at a Call; only possible with call loops.
class DepthExhausted : public Error {
 public:
  using Error::Error;
};

class UndefinedChain : public Error {
 public:
  using Error::Error;
};

class LoopDetected : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class UnsupportedAction : public Error {
 public:
  using Error::Error;
};

class UniverseTooLarge : public Error {
 public:
  using Error::Error;
};

class BlowupLimitExceeded : public Error {
 public:
  BlowupLimitExceeded(const std::string& message, std::size_t rule_index)
      : Error(message), rule_index_(rule_index) {}
  explicit BlowupLimitExceeded(const std::string& message)
      : BlowupLimitExceeded(message, kNoRule) {}

  static constexpr std::size_t kNoRule = static_cast<std::size_t>(-1);
  // Index of the offending rule, or kNoRule for a bare expression.
  std::size_t rule_index() const { return rule_index_; }

 private:
  std::size_t rule_index_;
};

class NotNnf : public Error {
 public:
  using Error::Error;
};

class NotEmittable : public Error {
 public:
  using Error::Error;
};

// Raised by the strict Boolean matcher when asked about an opaque primitive.
class UnknownPrimitiveHit : public Error {
 public:
  using Error::Error;
};

}  // namespace fwsimp

#endif  // FWSIMP_ERRORS_H_
