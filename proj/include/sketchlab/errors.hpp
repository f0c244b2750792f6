/*
 * Copyright 2026 The sketchlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sketchlab {

// Rejected input: bad parameter ranges, malformed ops, infeasible configs.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A tree mechanism was asked to consume more updates than its time horizon.
// Callers decide the policy (abort the trial, resize, ...).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed line in a text stream/trace file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::uint64_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::uint64_t line() const { return line_; }

 private:
  std::uint64_t line_;
};

}  // namespace sketchlab
