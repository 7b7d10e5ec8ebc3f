/*
 * Copyright 2026 The ARISE Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARISE_ERRORS_HPP_
#define ARISE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace arise {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes, so each one names the category it belongs to.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A node id or index outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between matrices, rows or files.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Precondition violated by the caller (empty subset, size-1 substructure...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Not enough nodes to satisfy an injection request.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A metric is undefined for the given labels (e.g. a single class).
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace arise

#endif  // ARISE_ERRORS_HPP_
