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

#ifndef IDTEST_TESTER_H_
#define IDTEST_TESTER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "idtest/coarse_compare.h"
#include "idtest/distribution.h"
#include "idtest/moment_test.h"
#include "idtest/sample_stream.h"

namespace idtest {

struct TesterConfig {
  double eps = 0.5;
  double C = kDefaultBucketConstant;  // eps' = eps / C
  double C_prime = 8.0;               // delta = eps / C_prime
  CoarseConfig coarse;                // delta and mode are overwritten from this struct
  double c4 = 1.0;                    // moment sample: c4 * sqrt(n) * ln(n+1) / eps^2
  double gamma = 2.0;                 // moment threshold slack when using Q' as bucket mass
  unsigned trials = 1;                // majority-vote repetitions, odd
  std::uint64_t master_seed = 0;
  SampleMode mode = SampleMode::kPractical;
  bool track_distinct = false;        // audit distinct p-queries (costs a hash set)

  double delta() const { return eps / C_prime; }
  CoarseConfig effective_coarse() const;
  void validate() const;

  // Constants pinned by the calibration run shipped in config/calibrated.json.
  static TesterConfig calibrated();
};

enum class Decision { kAccept, kReject };
enum class Stage { kNone, kCoarse, kMoment };
enum class Pipeline { kEfficient, kBaseline };

std::string_view to_string(Decision d);
std::string_view to_string(Stage s);
std::string_view to_string(Pipeline p);

struct Verdict {
  Decision decision = Decision::kAccept;
  Stage stage = Stage::kNone;
  std::optional<std::size_t> triggering_bucket;
  Pipeline pipeline = Pipeline::kEfficient;

  std::uint64_t q_samples_used = 0;
  std::uint64_t p_queries_used = 0;
  std::uint64_t probes_used = 0;  // |S2| actually drawn
  std::optional<std::uint64_t> distinct_p_queries;

  std::size_t k = 0;
  std::size_t j_star = 0;
  bool j_star_clamped = false;
  std::uint64_t seed = 0;

  std::optional<CoarseVerdict> coarse;
  std::optional<MomentVerdict> moment;
  // Baseline only: the explicit bucket-mass distance of step 4.
  std::optional<double> bucket_mass_distance;

  unsigned trials = 1;
  std::vector<Decision> trial_decisions;
};

// Efficient tester. Never iterates over the domain: every probability it
// reads is for a sampled or uniformly probed index.
Verdict identity_test(const ProbabilityVector& p, SampleStream& source, const TesterConfig& config);

// Majority vote over config.trials runs with independent sub-seeds drawn
// from config.master_seed. Counters are summed.
Verdict amplified_test(const ProbabilityVector& p, SampleStream& source,
                       const TesterConfig& config);

// Explicit-partition tester: computes every P_j with n queries, compares the
// bucket-mass vectors directly, then runs the same moment test with exact
// masses. O(n) work; a scaling foil and cross-check only.
Verdict baseline_test(const ProbabilityVector& p, SampleStream& source, const TesterConfig& config);

struct Budget {
  std::uint64_t m1 = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  std::uint64_t moment = 0;
  std::uint64_t linear = 0;  // baseline's explicit pass

  std::uint64_t q_samples() const { return m1 + s1 + moment; }
  std::uint64_t total() const { return m1 + s1 + s2 + moment + linear; }
};

// Closed-form per-run budget for a single (unamplified) run.
Budget closed_form_budget(std::size_t n, const TesterConfig& config,
                          Pipeline pipeline = Pipeline::kEfficient);

struct AuditReport {
  std::uint64_t q_samples_used = 0;
  std::uint64_t p_queries_used = 0;
  std::uint64_t budget = 0;
  double q_ratio = 0;  // q_samples_used / budget
  double p_ratio = 0;  // p_queries_used / budget
  double budget_over_n = 0;
};

// Throws BudgetExceeded if the verdict used more samples or queries than
// trials * closed_form_budget, or more p-queries than q-samples plus probes.
AuditReport query_audit(const Verdict& verdict, std::size_t n, const TesterConfig& config);

}  // namespace idtest

#endif  // IDTEST_TESTER_H_
