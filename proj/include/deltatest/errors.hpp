// Copyright 2026 The deltatest Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deltatest {

/// Malformed edge-list input. Carries the 1-based line number of the
/// offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line_number_(line_number) {}

  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

/// Base class for conditions where a sample carries no usable information
/// for the t test. The experiment harness treats these as recorded
/// non-rejecting repetitions; every other error aborts the experiment.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All observations identical: the t statistic is undefined.
class ZeroVarianceError : public DegenerateSampleError {
 public:
  using DegenerateSampleError::DegenerateSampleError;
};

/// Fewer than two usable observations.
class SampleTooSmallError : public DegenerateSampleError {
 public:
  using DegenerateSampleError::DegenerateSampleError;
};

}  // namespace deltatest
