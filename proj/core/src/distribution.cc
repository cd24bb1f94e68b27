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

#include "idtest/distribution.h"

#include <cmath>
#include <string>

#include "idtest/error.h"

namespace idtest {

ProbabilityVector validate_pmf(std::vector<double> probs) {
  if (probs.empty()) throw BadParams("probability vector is empty");
  long double sum = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double x = probs[i];
    if (!std::isfinite(x)) {
      throw BadParams("non-finite probability at index " + std::to_string(i));
    }
    if (x < 0) throw NegativeEntry(i);
    sum += x;
  }
  if (std::fabs(static_cast<double>(sum) - 1.0) > kPmfSumTolerance) {
    throw SumOutOfTolerance(static_cast<double>(sum));
  }
  return ProbabilityVector(std::move(probs));
}

ProbabilityVector uniform_pmf(std::size_t n) {
  if (n == 0) throw BadParams("uniform_pmf: n must be positive");
  return validate_pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityVector point_mass(std::size_t n, std::size_t index) {
  if (index >= n) throw IndexOutOfRange(index, n == 0 ? 0 : n - 1);
  std::vector<double> probs(n, 0.0);
  probs[index] = 1.0;
  return validate_pmf(std::move(probs));
}

ProbabilityVector zipf_pmf(std::size_t n, double exponent) {
  if (n == 0) throw BadParams("zipf_pmf: n must be positive");
  if (!(exponent >= 0) || !std::isfinite(exponent)) {
    throw BadParams("zipf_pmf: exponent must be finite and non-negative");
  }
  std::vector<double> probs(n);
  long double norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    probs[i] = std::pow(static_cast<double>(i + 1), -exponent);
    norm += probs[i];
  }
  for (double& x : probs) x = static_cast<double>(x / norm);
  return validate_pmf(std::move(probs));
}

double l1_distance(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.size() != q.size()) throw DomainMismatch(p.size(), q.size());
  long double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::fabs(p[i] - q[i]);
  return static_cast<double>(total);
}

KnownDistribution::KnownDistribution(const ProbabilityVector& p, bool track_distinct) : p_(&p) {
  if (track_distinct) seen_.emplace();
}

std::optional<std::size_t> KnownDistribution::distinct_queried() const {
  if (!seen_) return std::nullopt;
  return seen_->size();
}

}  // namespace idtest
