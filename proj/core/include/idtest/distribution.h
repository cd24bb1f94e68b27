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

#ifndef IDTEST_DISTRIBUTION_H_
#define IDTEST_DISTRIBUTION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

namespace idtest {

inline constexpr double kPmfSumTolerance = 1e-9;

// A validated probability mass function on the domain {0, ..., n-1}.
// Immutable after construction; safe for concurrent reads.
class ProbabilityVector {
 public:
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

 private:
  friend ProbabilityVector validate_pmf(std::vector<double> probs);
  explicit ProbabilityVector(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

// Throws BadParams (empty or non-finite input), NegativeEntry, or
// SumOutOfTolerance.
ProbabilityVector validate_pmf(std::vector<double> probs);

ProbabilityVector uniform_pmf(std::size_t n);
ProbabilityVector point_mass(std::size_t n, std::size_t index);
// p_i proportional to 1 / (i+1)^exponent.
ProbabilityVector zipf_pmf(std::size_t n, double exponent);

// Exact sum_i |p_i - q_i|. O(n); oracle use only.
double l1_distance(const ProbabilityVector& p, const ProbabilityVector& q);

// Query access to a known distribution with accounting. Every probability
// lookup made by the tester goes through query(), so the counters are the
// authoritative record of how much of p the tester touched.
class KnownDistribution {
 public:
  explicit KnownDistribution(const ProbabilityVector& p, bool track_distinct = false);
  // Holds a pointer to p; a temporary would dangle.
  KnownDistribution(ProbabilityVector&&, bool = false) = delete;

  std::size_t size() const { return p_->size(); }

  double query(std::size_t i) {
    ++queries_;
    if (seen_) seen_->insert(i);
    return (*p_)[i];
  }

  std::uint64_t queries() const { return queries_; }
  // Only available when constructed with track_distinct.
  std::optional<std::size_t> distinct_queried() const;

  const ProbabilityVector& pmf() const { return *p_; }

 private:
  const ProbabilityVector* p_;
  std::uint64_t queries_ = 0;
  std::optional<std::unordered_set<std::size_t>> seen_;
};

}  // namespace idtest

#endif  // IDTEST_DISTRIBUTION_H_
