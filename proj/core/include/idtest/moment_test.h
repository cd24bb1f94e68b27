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

#ifndef IDTEST_MOMENT_TEST_H_
#define IDTEST_MOMENT_TEST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idtest/bucketing.h"
#include "idtest/distribution.h"
#include "idtest/sample_stream.h"

namespace idtest {

struct CollisionStats {
  std::uint64_t total_samples = 0;
  // Occurrence count s_i for every sampled index; never holds zeros.
  std::unordered_map<std::size_t, std::uint64_t> counts;
  // Entry j: sum over sampled i in R_j of C(s_i, 2).
  std::vector<double> per_bucket_stat;
};

// s * (s - 1) / 2 in floating point.
inline double pairs(double s) { return s * (s - 1.0) / 2.0; }

// ceil(c4 * sqrt(n) * ln(n+1) / eps^2), at least 2.
std::uint64_t moment_sample_size(std::size_t n, double eps, double c4);

// Draws S samples and queries p once per distinct sampled index. Memory is
// proportional to the number of distinct samples.
CollisionStats collect_counts(SampleStream& source, KnownDistribution& p,
                              const BucketScheme& scheme, std::uint64_t S);

enum class BucketOutcome { kSkipped, kPass, kReject };
std::string_view to_string(BucketOutcome o);

struct MomentBucket {
  std::size_t bucket = 0;
  double stat = 0;
  double threshold = 0;
  BucketOutcome outcome = BucketOutcome::kSkipped;
};

struct MomentVerdict {
  bool reject = false;
  std::optional<std::size_t> triggering_bucket;  // first rejecting bucket
  std::vector<BucketOutcome> outcomes;           // one per bucket, k+1 entries
  std::vector<MomentBucket> tested;              // buckets that passed the mass guard

  std::size_t num_tested() const { return tested.size(); }
};

// For every j in [1, k] with bucket_mass[j] > eps/(4k+4), rejects j when
//   stat_j > gamma * (1 + eps/4) * C(S, 2) * bucket_mass[j] * upper(j).
// gamma = 1 is the plain threshold; larger values add slack for estimated
// masses. Throws DimensionMismatch when bucket_mass has the wrong length.
MomentVerdict moment_decide(const CollisionStats& stats, std::span<const double> bucket_mass,
                            const BucketScheme& scheme, double eps, double gamma = 1.0);

}  // namespace idtest

#endif  // IDTEST_MOMENT_TEST_H_
