// Copyright 2026 The idtest Authors.
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

#ifndef IDTEST_ERROR_H_
#define IDTEST_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idtest {

// Base class for every error raised by the library. Callers that only need
// to distinguish "bad input" from "bug" can catch this and std::logic_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NegativeEntry : public Error {
 public:
  explicit NegativeEntry(std::size_t index)
      : Error("negative probability at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class SumOutOfTolerance : public Error {
 public:
  explicit SumOutOfTolerance(double actual_sum)
      : Error("probabilities sum to " + std::to_string(actual_sum) + ", expected 1"),
        actual_sum_(actual_sum) {}
  double actual_sum() const { return actual_sum_; }

 private:
  double actual_sum_;
};

class DomainMismatch : public Error {
 public:
  DomainMismatch(std::size_t expected, std::size_t actual)
      : Error("domain size mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("vector length mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class BadParams : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t limit)
      : Error("index " + std::to_string(index) + " out of range [0, " + std::to_string(limit) +
              "]") {}
};

// Raised by recorded (file-backed) sample streams when a phase asks for more
// samples than were recorded.
class SampleExhausted : public Error {
 public:
  explicit SampleExhausted(std::size_t available)
      : Error("sample source exhausted after " + std::to_string(available) + " samples") {}
};

// A completed run used more samples or queries than the closed-form budget.
// This indicates a bug in the tester, not an input condition.
class BudgetExceeded : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class CalibrationFailed : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace idtest

#endif  // IDTEST_ERROR_H_
