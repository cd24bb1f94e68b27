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

#ifndef IDTEST_HARNESS_H_
#define IDTEST_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idtest/bucketing.h"
#include "idtest/coarse_compare.h"
#include "idtest/distribution.h"
#include "idtest/instances.h"
#include "idtest/tester.h"

namespace idtest {

inline constexpr double kZ95 = 1.959963984540054;

struct WilsonInterval {
  double lo = 0;
  double hi = 1;
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct InstanceSpec {
  std::string descriptor;
  ProbabilityVector p;
  ProbabilityVector q;  // sampled only, never queried by the tester
};

InstanceSpec make_instance(InstanceKind kind, std::size_t n, std::uint64_t seed,
                           const InstanceParams& params = {});

struct TrialReport {
  std::string descriptor;
  Pipeline pipeline = Pipeline::kEfficient;
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t accepts = 0;
  double accept_rate = 0;
  WilsonInterval accept_wilson;
  WilsonInterval reject_wilson;
  double mean_q_samples = 0;
  double mean_p_queries = 0;
  double mean_wall_ms = 0;
  std::uint64_t audit_violations = 0;
  double max_q_ratio = 0;  // worst q_samples / budget over trials
  double max_p_ratio = 0;

  std::uint64_t rejects() const { return trials - accepts; }
};

// Runs `trials` independent seeded tests on the instance. Trial t uses
// derive_seed(master_seed, kTrial, t) for both the tester and q's stream,
// so the report does not depend on `jobs`. Requires trials >= 30.
TrialReport run_trials(const InstanceSpec& instance, const TesterConfig& config,
                       std::uint64_t trials, std::uint64_t master_seed, unsigned jobs = 1,
                       Pipeline pipeline = Pipeline::kEfficient);

// --- Coarse comparator verification -------------------------------------

struct LemmaConfig {
  std::size_t n = 400;
  double delta = 0.1;
  double scheme_eps = 0.8;  // eps of the bucket scheme the families live on
  double C = 1.0;
  CoarseConfig coarse{.delta = 0.1, .c1 = 24.0, .c2 = 3.0, .c3 = 2.0,
                      .mode = SampleMode::kPractical, .budget_factor = std::nullopt};
  double zipf_exponent = 1.0;
  double perturbed_eps = 0.5;
  std::uint64_t trials = 300;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  double min_wilson_lo = 0.85;

  void validate() const;
};

enum class LemmaExpectation { kCase1, kCase2, kGap };
std::string_view to_string(LemmaExpectation e);

struct LemmaFamily {
  std::string name;
  LemmaExpectation expect = LemmaExpectation::kCase1;
  ProbabilityVector p;
  ProbabilityVector q;
  double bucket_l1 = 0;  // exact ||P - Q||_1 from the oracle
};

// Moves `amount` of q-mass from bucket `from` to bucket `to` (buckets by p),
// rescaling within each bucket. ||P - Q||_1 of the result is 2 * amount.
ProbabilityVector shift_bucket_mass(const BucketScheme& scheme, const ProbabilityVector& p,
                                    std::size_t from, std::size_t to, double amount);

// Case 1 families (uniform, zipf, eps-perturbed), Case 2 families whose bucket
// distance the oracle has confirmed to be >= delta, and one gap family.
std::vector<LemmaFamily> lemma_families(const BucketScheme& scheme, const LemmaConfig& config);

struct LemmaFamilyResult {
  std::string name;
  LemmaExpectation expect = LemmaExpectation::kCase1;
  double bucket_l1 = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // runs that returned the expected case (Case 2 for gaps)
  double rate = 0;
  WilsonInterval wilson;
  std::optional<bool> passed;  // unset for gap families
  double mean_q_samples = 0;
  double mean_p_queries = 0;
  std::uint64_t audit_violations = 0;
};

struct LemmaReport {
  LemmaConfig config;
  std::size_t k = 0;
  std::size_t j_star = 0;
  CoarseSampleSizes sizes;
  std::vector<LemmaFamilyResult> families;
  bool passed = false;
};

// Requires n <= 10^4 so the exact oracles stay cheap.
LemmaReport lemma_check(const LemmaConfig& config);

// --- Scaling -------------------------------------------------------------

struct ScalingRow {
  std::size_t n = 0;
  std::uint64_t q_samples = 0;
  std::uint64_t p_queries = 0;
  double wall_ms = 0;
  std::uint64_t budget = 0;
  Decision decision = Decision::kAccept;
};

struct ScalingTable {
  Pipeline pipeline = Pipeline::kEfficient;
  double eps = 0;
  std::uint64_t seed = 0;
  std::vector<ScalingRow> rows;
  std::optional<double> slope;  // least-squares slope of ln(q + p) vs ln n
};

// Least-squares slope of ln y against ln x. Needs >= 2 points.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

// One identical-uniform run per grid point. Grid must be non-empty and
// strictly increasing.
ScalingTable scaling_experiment(std::span<const std::size_t> n_grid, double eps,
                                const TesterConfig& config, std::uint64_t seed,
                                Pipeline pipeline = Pipeline::kEfficient);

// --- Calibration ---------------------------------------------------------

struct CalibrationTargets {
  std::size_t n = 400;
  std::uint64_t trials = 300;
  double contract_lo = 0.6;  // Wilson lower bound for accept / reject rates
  bool check_lemma = true;
  double lemma_lo = 0.85;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct SearchSpace {
  std::vector<double> c1, c2, c3, c4, gamma;
  bool empty() const {
    return c1.empty() && c2.empty() && c3.empty() && c4.empty() && gamma.empty();
  }
};

struct CalibrationPoint {
  std::string stage;  // "defaults", "coarse", or "moment"
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, gamma = 0;
  bool passed = false;
  std::vector<std::pair<std::string, double>> wilson_lo;
};

struct CalibrationResult {
  TesterConfig tester;
  LemmaConfig lemma;
  bool defaults_unchanged = false;
  std::vector<CalibrationPoint> evaluated;
};

// Coarse multipliers (c1, c2, c3) are chosen first, as the cheapest point
// whose lemma check passes; then (c4, gamma) as the cheapest point meeting
// the accept/reject contract on identical-uniform, random-half and
// eps-perturbed at targets.n. If the starting configuration already passes
// it is returned unchanged. Throws CalibrationFailed when the space is empty
// or no point meets the targets.
CalibrationResult calibrate_constants(const CalibrationTargets& targets, const SearchSpace& space,
                                      const TesterConfig& base, const LemmaConfig& lemma_base);

}  // namespace idtest

#endif  // IDTEST_HARNESS_H_
