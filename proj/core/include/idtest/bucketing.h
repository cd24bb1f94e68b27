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

#ifndef IDTEST_BUCKETING_H_
#define IDTEST_BUCKETING_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "idtest/distribution.h"

namespace idtest {

inline constexpr double kDefaultBucketConstant = 100.0;

// Implicit geometric partition of the domain by known probability:
//
//   R_0 = { i : p_i <= base }
//   R_j = { i : base * r^(j-1) < p_i <= base * r^j },  j = 1..k
//
// with base = eps / (2n) and r = 1 + eps / C. Membership of an element is a
// function of p_i alone, so the partition is never materialized.
//
// The boundary table holds k+1 doubles, k = O(log(n/eps) / eps'), and is the
// single source of truth for every membership decision.
class BucketScheme {
 public:
  std::size_t n() const { return n_; }
  double eps() const { return eps_; }
  double C() const { return C_; }
  double eps_prime() const { return eps_prime_; }
  std::size_t k() const { return upper_.size() - 1; }
  std::size_t num_buckets() const { return upper_.size(); }
  double base() const { return upper_.front(); }
  // Bucket that an element of probability 1/sqrt(n) falls in.
  std::size_t j_star() const { return j_star_; }
  // True when 1/sqrt(n) fell outside (base, upper(k)] and j* was clamped.
  bool j_star_clamped() const { return j_star_clamped_; }

  std::span<const double> upper_bounds() const { return upper_; }

  std::size_t index_of(double prob) const {
    if (prob <= upper_[0]) return 0;
    const std::size_t top = k();
    double guess = std::ceil(std::log(prob / upper_[0]) / log_ratio_);
    std::size_t j = guess < 1.0 ? 1 : (guess > static_cast<double>(top) ? top : static_cast<std::size_t>(guess));
    // The log only guesses; the boundary table decides.
    while (j > 1 && prob <= upper_[j - 1]) --j;
    while (j < top && prob > upper_[j]) ++j;
    return j;
  }

 private:
  friend BucketScheme build_scheme(std::size_t n, double eps, double C);
  BucketScheme() = default;

  std::size_t n_ = 0;
  double eps_ = 0;
  double C_ = 0;
  double eps_prime_ = 0;
  double log_ratio_ = 0;
  std::size_t j_star_ = 0;
  bool j_star_clamped_ = false;
  std::vector<double> upper_;
};

// Requires n >= 2, 0 < eps <= 2, C >= 1; throws BadParams otherwise (also
// when the bucket count would be unreasonably large).
BucketScheme build_scheme(std::size_t n, double eps, double C = kDefaultBucketConstant);

inline std::size_t bucket_index(const BucketScheme& scheme, double prob) {
  return scheme.index_of(prob);
}

// base * (1 + eps')^j. Throws IndexOutOfRange for j > k.
double bucket_upper(const BucketScheme& scheme, std::size_t j);

// P_j = sum of p_i over R_j. O(n): oracle and baseline use only.
std::vector<double> exact_bucket_masses(const BucketScheme& scheme, const ProbabilityVector& p);

// sum of weights_i over R_j, where R_j is defined by p. With weights = q this
// gives the Q_j of an unknown distribution. O(n).
std::vector<double> exact_bucket_masses(const BucketScheme& scheme, const ProbabilityVector& p,
                                        const ProbabilityVector& weights);

// sum_j |a_j - b_j|.
double vector_l1(std::span<const double> a, std::span<const double> b);

}  // namespace idtest

#endif  // IDTEST_BUCKETING_H_
