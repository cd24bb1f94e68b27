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

#include "idtest/coarse_compare.h"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "idtest/error.h"

namespace idtest {

std::string_view to_string(SampleMode mode) {
  return mode == SampleMode::kFaithful ? "faithful" : "practical";
}

std::optional<SampleMode> parse_sample_mode(std::string_view name) {
  if (name == "faithful") return SampleMode::kFaithful;
  if (name == "practical") return SampleMode::kPractical;
  return std::nullopt;
}

std::string_view to_string(CoarseCase c) { return c == CoarseCase::kCase1 ? "case1" : "case2"; }

std::string_view to_string(CoarseStep s) {
  switch (s) {
    case CoarseStep::kNone:
      return "none";
    case CoarseStep::kHeavyCheck:
      return "heavy-check";
    case CoarseStep::kProbeCheck:
      return "probe-check";
  }
  return "none";
}

void CoarseConfig::validate() const {
  if (!(delta > 0.0 && delta <= 2.0)) throw BadParams("delta must lie in (0, 2]");
  if (!(c1 > 0 && c2 > 0 && c3 > 0)) throw BadParams("coarse multipliers must be positive");
  if (budget_factor && !(*budget_factor > 0)) throw BadParams("budget factor must be positive");
}

namespace {

// Sizes beyond 2^53 are not representable exactly and could never be run.
std::uint64_t to_count(double x) {
  if (!(x < 9007199254740992.0)) throw BadParams("sample size overflows: configuration infeasible");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(x)));
}

}  // namespace

CoarseSampleSizes coarse_sample_sizes(const BucketScheme& scheme, const CoarseConfig& config) {
  config.validate();
  const double k = static_cast<double>(scheme.k());
  const double n = static_cast<double>(scheme.n());
  const double ratio = k / config.delta;
  const double log_k = std::log(k + 2.0);
  const double sqrt_n = std::sqrt(n);

  const double m1 = config.c1 * ratio * ratio * log_k;
  const double s1 = config.c2 * sqrt_n * std::log(n + 1.0);
  double s2 = config.c3 * ratio * ratio * sqrt_n * log_k;
  if (config.mode == SampleMode::kFaithful) s2 *= ratio;

  CoarseSampleSizes sizes;
  sizes.s1 = to_count(s1);
  if (config.mode == SampleMode::kPractical && config.budget_factor) {
    const double cap = *config.budget_factor * sqrt_n;
    sizes.capped = m1 > cap || s2 > cap;
    sizes.m1 = to_count(std::min(m1, cap));
    sizes.s2 = to_count(std::min(s2, cap));
  } else {
    sizes.m1 = to_count(m1);
    sizes.s2 = to_count(s2);
  }
  return sizes;
}

double heavy_threshold(const BucketScheme& scheme, double delta) {
  return delta / (8.0 * static_cast<double>(scheme.k()) + 8.0);
}

double probe_threshold(const BucketScheme& scheme, double delta) {
  return delta / (4.0 * static_cast<double>(scheme.k()) + 4.0);
}

std::vector<double> estimate_q(SampleStream& source, KnownDistribution& p,
                               const BucketScheme& scheme, std::uint64_t m) {
  if (m == 0) throw BadParams("estimate_q needs at least one sample");
  std::vector<std::uint64_t> counts(scheme.num_buckets(), 0);
  for (std::uint64_t t = 0; t < m; ++t) {
    ++counts[scheme.index_of(p.query(source.draw()))];
  }
  std::vector<double> q_hat(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    q_hat[j] = static_cast<double>(counts[j]) / static_cast<double>(m);
  }
  return q_hat;
}

std::vector<double> collect_heavy_support(SampleStream& source, KnownDistribution& p,
                                          const BucketScheme& scheme, std::uint64_t s1) {
  if (s1 == 0) throw BadParams("collect_heavy_support needs at least one sample");
  std::unordered_set<std::size_t> seen;
  seen.reserve(static_cast<std::size_t>(s1));
  std::vector<double> heavy(scheme.num_buckets(), 0.0);
  for (std::uint64_t t = 0; t < s1; ++t) {
    const std::size_t i = source.draw();
    if (!seen.insert(i).second) continue;
    const double pi = p.query(i);
    const std::size_t j = scheme.index_of(pi);
    if (j >= scheme.j_star()) heavy[j] += pi;
  }
  return heavy;
}

std::vector<double> uniform_probe(KnownDistribution& p, const BucketScheme& scheme,
                                  std::uint64_t s2, Rng& rng, bool literal_normalization) {
  if (s2 == 0) throw BadParams("uniform_probe needs at least one probe");
  const std::size_t n = p.size();
  const std::size_t j_star = scheme.j_star();
  std::vector<double> probe(scheme.num_buckets(), 0.0);
  // Anything below j* sits under 1/sqrt(n); the contribution bound relies on it.
  const double light_limit = (1.0 + scheme.eps_prime()) / std::sqrt(static_cast<double>(n));
  for (std::uint64_t t = 0; t < s2; ++t) {
    const double pi = p.query(static_cast<std::size_t>(rng.uniform_index(n)));
    const std::size_t j = scheme.index_of(pi);
    if (j < j_star) {
      if (!(pi < light_limit)) throw std::logic_error("light-bucket element above 1/sqrt(n)");
      probe[j] += pi;
    }
  }
  const double scale = (literal_normalization ? 1.0 : static_cast<double>(n)) /
                       static_cast<double>(s2);
  for (std::size_t j = 0; j < j_star; ++j) probe[j] *= scale;
  return probe;
}

namespace {

std::optional<std::size_t> first_heavy_violation(const CoarseEstimates& e,
                                                 const BucketScheme& scheme, double delta) {
  const double threshold = heavy_threshold(scheme, delta);
  for (std::size_t j = scheme.j_star(); j <= scheme.k(); ++j) {
    if (std::fabs(e.q_hat[j] - e.heavy_mass[j]) > threshold) return j;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_probe_violation(const CoarseEstimates& e,
                                                 const BucketScheme& scheme, double delta) {
  const double threshold = probe_threshold(scheme, delta);
  for (std::size_t j = 0; j < scheme.j_star(); ++j) {
    if (std::fabs(e.q_hat[j] - e.probe_mass[j]) > threshold) return j;
  }
  return std::nullopt;
}

void check_dimensions(const CoarseEstimates& e, const BucketScheme& scheme) {
  const std::size_t want = scheme.num_buckets();
  if (e.q_hat.size() != want) throw DimensionMismatch(want, e.q_hat.size());
  if (e.heavy_mass.size() != want) throw DimensionMismatch(want, e.heavy_mass.size());
  if (e.probe_mass.size() != want) throw DimensionMismatch(want, e.probe_mass.size());
}

}  // namespace

CoarseVerdict coarse_decide(const CoarseEstimates& estimates, const BucketScheme& scheme,
                            const CoarseConfig& config) {
  check_dimensions(estimates, scheme);
  CoarseVerdict verdict;
  verdict.estimates = estimates;
  if (auto j = first_heavy_violation(estimates, scheme, config.delta)) {
    verdict.outcome = CoarseCase::kCase2;
    verdict.triggering_step = CoarseStep::kHeavyCheck;
    verdict.triggering_bucket = j;
  } else if (auto j = first_probe_violation(estimates, scheme, config.delta)) {
    verdict.outcome = CoarseCase::kCase2;
    verdict.triggering_step = CoarseStep::kProbeCheck;
    verdict.triggering_bucket = j;
  }
  return verdict;
}

CoarseVerdict coarse_compare(SampleStream& source, KnownDistribution& p,
                             const BucketScheme& scheme, const CoarseConfig& config, Rng& rng) {
  if (source.domain_size() != scheme.n()) throw DomainMismatch(scheme.n(), source.domain_size());
  if (p.size() != scheme.n()) throw DomainMismatch(scheme.n(), p.size());
  const CoarseSampleSizes sizes = coarse_sample_sizes(scheme, config);

  CoarseVerdict verdict;
  verdict.sizes = sizes;
  CoarseEstimates& e = verdict.estimates;
  e.q_hat = estimate_q(source, p, scheme, sizes.m1);
  e.heavy_mass = collect_heavy_support(source, p, scheme, sizes.s1);
  e.probe_mass.assign(scheme.num_buckets(), 0.0);

  if (auto j = first_heavy_violation(e, scheme, config.delta)) {
    verdict.outcome = CoarseCase::kCase2;
    verdict.triggering_step = CoarseStep::kHeavyCheck;
    verdict.triggering_bucket = j;
    return verdict;
  }

  if (scheme.j_star() > 0) {
    e.probe_mass = uniform_probe(p, scheme, sizes.s2, rng, config.literal_probe_normalization);
    e.s2_size = sizes.s2;
  }
  if (auto j = first_probe_violation(e, scheme, config.delta)) {
    verdict.outcome = CoarseCase::kCase2;
    verdict.triggering_step = CoarseStep::kProbeCheck;
    verdict.triggering_bucket = j;
  }
  return verdict;
}

}  // namespace idtest
