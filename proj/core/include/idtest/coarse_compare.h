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

#ifndef IDTEST_COARSE_COMPARE_H_
#define IDTEST_COARSE_COMPARE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "idtest/bucketing.h"
#include "idtest/distribution.h"
#include "idtest/random.h"
#include "idtest/sample_stream.h"

namespace idtest {

// faithful: sample sizes follow the asymptotic formulas with the configured
// multipliers. practical: the probe size drops one k/delta factor and the
// Q' and probe phases are each capped at budget_factor * sqrt(n) samples.
// Thresholds and decision order are identical in both modes.
enum class SampleMode { kFaithful, kPractical };

std::string_view to_string(SampleMode mode);
std::optional<SampleMode> parse_sample_mode(std::string_view name);

struct CoarseConfig {
  double delta = 0.1;
  double c1 = 1.0;  // Q' estimation: c1 * (k/delta)^2 * ln(k+2)
  double c2 = 1.0;  // heavy support: c2 * sqrt(n) * ln(n+1)
  double c3 = 1.0;  // uniform probe: c3 * (k/delta)^3 * sqrt(n) * ln(k+2) (faithful)
  SampleMode mode = SampleMode::kPractical;
  // Practical-mode cap per phase, in units of sqrt(n). nullopt disables the cap.
  std::optional<double> budget_factor = 4.0;
  // Compare Q'_j against sum_{U_j} p_i / |S2| without rescaling by n.
  bool literal_probe_normalization = false;

  void validate() const;
};

struct CoarseSampleSizes {
  std::uint64_t m1 = 0;  // q-samples for Q'
  std::uint64_t s1 = 0;  // q-samples for heavy support
  std::uint64_t s2 = 0;  // uniform domain probes
  bool capped = false;

  std::uint64_t total() const { return m1 + s1 + s2; }
};

CoarseSampleSizes coarse_sample_sizes(const BucketScheme& scheme, const CoarseConfig& config);

struct CoarseEstimates {
  std::vector<double> q_hat;       // Q'_j
  std::vector<double> heavy_mass;  // sum of p_i over distinct sampled i in R_j, j >= j*
  std::vector<double> probe_mass;  // uniform-probe estimate of P_j, j < j*
  std::uint64_t s2_size = 0;
};

enum class CoarseCase { kCase1, kCase2 };
enum class CoarseStep { kNone, kHeavyCheck, kProbeCheck };

std::string_view to_string(CoarseCase c);
std::string_view to_string(CoarseStep s);

struct CoarseVerdict {
  CoarseCase outcome = CoarseCase::kCase1;
  CoarseStep triggering_step = CoarseStep::kNone;
  std::optional<std::size_t> triggering_bucket;
  CoarseEstimates estimates;
  CoarseSampleSizes sizes;
};

// Q'_j = fraction of m samples whose known probability falls in R_j.
// Draws m samples and makes m queries.
std::vector<double> estimate_q(SampleStream& source, KnownDistribution& p,
                               const BucketScheme& scheme, std::uint64_t m);

// Draws s1 samples; entry j >= j* is the p-mass of the distinct sampled
// elements of R_j. Queries p once per distinct element.
std::vector<double> collect_heavy_support(SampleStream& source, KnownDistribution& p,
                                          const BucketScheme& scheme, std::uint64_t s1);

// s2 uniform draws from the domain with replacement; entry j < j* is
// n * sum_{U_j} p_i / s2 (unbiased for P_j), or sum_{U_j} p_i / s2 with
// literal normalization. Makes s2 queries.
std::vector<double> uniform_probe(KnownDistribution& p, const BucketScheme& scheme,
                                  std::uint64_t s2, Rng& rng, bool literal_normalization = false);

// Pure. Heavy buckets [j*, k] are checked against delta/(8k+8), then light
// buckets [0, j*) against delta/(4k+4), each in increasing j.
CoarseVerdict coarse_decide(const CoarseEstimates& estimates, const BucketScheme& scheme,
                            const CoarseConfig& config);

double heavy_threshold(const BucketScheme& scheme, double delta);
double probe_threshold(const BucketScheme& scheme, double delta);

// Full comparator. Returns after the heavy check on a violation, so the probe
// phase only runs when every heavy bucket agrees.
CoarseVerdict coarse_compare(SampleStream& source, KnownDistribution& p,
                             const BucketScheme& scheme, const CoarseConfig& config, Rng& rng);

}  // namespace idtest

#endif  // IDTEST_COARSE_COMPARE_H_
