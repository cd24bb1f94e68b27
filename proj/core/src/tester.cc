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

#include "idtest/tester.h"

#include <cmath>
#include <string>

#include "idtest/error.h"
#include "idtest/random.h"

namespace idtest {

std::string_view to_string(Decision d) { return d == Decision::kAccept ? "accept" : "reject"; }

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kNone:
      return "none";
    case Stage::kCoarse:
      return "coarse";
    case Stage::kMoment:
      return "moment";
  }
  return "none";
}

std::string_view to_string(Pipeline p) {
  return p == Pipeline::kEfficient ? "efficient" : "baseline";
}

CoarseConfig TesterConfig::effective_coarse() const {
  CoarseConfig c = coarse;
  c.delta = delta();
  c.mode = mode;
  return c;
}

void TesterConfig::validate() const {
  if (!(eps > 0.0 && eps <= 2.0)) throw BadParams("eps must lie in (0, 2]");
  if (!(C >= 1.0)) throw BadParams("C must be >= 1");
  if (!(C_prime >= 4.0)) throw BadParams("C' must be >= 4");
  if (!(c4 > 0.0)) throw BadParams("c4 must be positive");
  if (!(gamma > 0.0)) throw BadParams("gamma must be positive");
  if (trials == 0 || trials % 2 == 0) throw BadParams("trials must be an odd positive integer");
  effective_coarse().validate();
}

TesterConfig TesterConfig::calibrated() {
  TesterConfig c;
  c.coarse.c1 = 24.0;
  c.coarse.c2 = 3.0;
  c.coarse.c3 = 2.0;
  c.coarse.budget_factor = 4.0;
  c.c4 = 1.0;
  c.gamma = 1.0;
  return c;
}

Verdict identity_test(const ProbabilityVector& p, SampleStream& source,
                      const TesterConfig& config) {
  config.validate();
  if (source.domain_size() != p.size()) throw DomainMismatch(p.size(), source.domain_size());
  const BucketScheme scheme = build_scheme(p.size(), config.eps, config.C);
  KnownDistribution known(p, config.track_distinct);
  const std::uint64_t draws_before = source.draws();
  Rng probe_rng(derive_seed(config.master_seed, StreamTag::kUniformProbe));

  Verdict v;
  v.k = scheme.k();
  v.j_star = scheme.j_star();
  v.j_star_clamped = scheme.j_star_clamped();
  v.seed = config.master_seed;

  v.coarse = coarse_compare(source, known, scheme, config.effective_coarse(), probe_rng);
  v.probes_used = v.coarse->estimates.s2_size;
  if (v.coarse->outcome == CoarseCase::kCase2) {
    v.decision = Decision::kReject;
    v.stage = Stage::kCoarse;
    v.triggering_bucket = v.coarse->triggering_bucket;
  } else {
    const std::uint64_t S = moment_sample_size(p.size(), config.eps, config.c4);
    const CollisionStats stats = collect_counts(source, known, scheme, S);
    v.moment = moment_decide(stats, v.coarse->estimates.q_hat, scheme, config.eps, config.gamma);
    if (v.moment->reject) {
      v.decision = Decision::kReject;
      v.stage = Stage::kMoment;
      v.triggering_bucket = v.moment->triggering_bucket;
    }
  }

  v.q_samples_used = source.draws() - draws_before;
  v.p_queries_used = known.queries();
  if (auto d = known.distinct_queried()) v.distinct_p_queries = *d;
  v.trial_decisions = {v.decision};
  return v;
}

Verdict amplified_test(const ProbabilityVector& p, SampleStream& source,
                       const TesterConfig& config) {
  config.validate();
  Verdict merged;
  std::vector<Verdict> runs;
  runs.reserve(config.trials);
  unsigned rejects = 0;
  for (unsigned t = 0; t < config.trials; ++t) {
    TesterConfig sub = config;
    sub.trials = 1;
    sub.master_seed = derive_seed(config.master_seed, StreamTag::kAmplification, t);
    runs.push_back(identity_test(p, source, sub));
    if (runs.back().decision == Decision::kReject) ++rejects;
  }
  const Decision majority = 2 * rejects > config.trials ? Decision::kReject : Decision::kAccept;
  for (const Verdict& r : runs) {
    if (r.decision == majority) {
      merged = r;
      break;
    }
  }
  merged.seed = config.master_seed;
  merged.trials = config.trials;
  merged.q_samples_used = 0;
  merged.p_queries_used = 0;
  merged.probes_used = 0;
  merged.trial_decisions.clear();
  std::optional<std::uint64_t> distinct = config.track_distinct ? std::optional<std::uint64_t>(0)
                                                                 : std::nullopt;
  for (const Verdict& r : runs) {
    merged.q_samples_used += r.q_samples_used;
    merged.p_queries_used += r.p_queries_used;
    merged.probes_used += r.probes_used;
    if (distinct && r.distinct_p_queries) *distinct += *r.distinct_p_queries;
    merged.trial_decisions.push_back(r.decision);
  }
  merged.distinct_p_queries = distinct;
  return merged;
}

Verdict baseline_test(const ProbabilityVector& p, SampleStream& source,
                      const TesterConfig& config) {
  config.validate();
  if (source.domain_size() != p.size()) throw DomainMismatch(p.size(), source.domain_size());
  const std::size_t n = p.size();
  const BucketScheme scheme = build_scheme(n, config.eps, config.C);
  KnownDistribution known(p, config.track_distinct);
  const std::uint64_t draws_before = source.draws();

  Verdict v;
  v.pipeline = Pipeline::kBaseline;
  v.k = scheme.k();
  v.j_star = scheme.j_star();
  v.j_star_clamped = scheme.j_star_clamped();
  v.seed = config.master_seed;

  // Steps 1-2: materialize the partition and every P_j.
  std::vector<std::uint32_t> bucket_of(n);
  std::vector<long double> exact(scheme.num_buckets(), 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = known.query(i);
    bucket_of[i] = static_cast<std::uint32_t>(scheme.index_of(pi));
    exact[bucket_of[i]] += pi;
  }
  const std::vector<double> P(exact.begin(), exact.end());

  // Q' to eps/(4k+4) from O((k/eps)^2 log k) samples.
  CoarseConfig estimate = config.effective_coarse();
  estimate.delta = config.eps;
  const std::uint64_t m1 = coarse_sample_sizes(scheme, estimate).m1;
  std::vector<double> q_hat(scheme.num_buckets(), 0.0);
  for (std::uint64_t t = 0; t < m1; ++t) q_hat[bucket_of[source.draw()]] += 1.0;
  for (double& x : q_hat) x /= static_cast<double>(m1);

  // Reject when the bucket-mass vectors are already far apart.
  v.bucket_mass_distance = vector_l1(P, q_hat);
  if (*v.bucket_mass_distance > config.eps / 4.0) {
    v.decision = Decision::kReject;
    v.stage = Stage::kCoarse;
  } else {
    // Collision test with exact masses.
    const std::uint64_t S = moment_sample_size(n, config.eps, config.c4);
    CollisionStats stats;
    stats.total_samples = S;
    for (std::uint64_t t = 0; t < S; ++t) ++stats.counts[source.draw()];
    stats.per_bucket_stat.assign(scheme.num_buckets(), 0.0);
    for (const auto& [i, s] : stats.counts) {
      stats.per_bucket_stat[bucket_of[i]] += pairs(static_cast<double>(s));
    }
    v.moment = moment_decide(stats, P, scheme, config.eps, 1.0);
    if (v.moment->reject) {
      v.decision = Decision::kReject;
      v.stage = Stage::kMoment;
      v.triggering_bucket = v.moment->triggering_bucket;
    }
  }

  v.q_samples_used = source.draws() - draws_before;
  v.p_queries_used = known.queries();
  if (auto d = known.distinct_queried()) v.distinct_p_queries = *d;
  v.trial_decisions = {v.decision};
  return v;
}

Budget closed_form_budget(std::size_t n, const TesterConfig& config, Pipeline pipeline) {
  config.validate();
  const BucketScheme scheme = build_scheme(n, config.eps, config.C);
  Budget b;
  b.moment = moment_sample_size(n, config.eps, config.c4);
  if (pipeline == Pipeline::kEfficient) {
    const CoarseSampleSizes sizes = coarse_sample_sizes(scheme, config.effective_coarse());
    b.m1 = sizes.m1;
    b.s1 = sizes.s1;
    b.s2 = scheme.j_star() > 0 ? sizes.s2 : 0;
  } else {
    CoarseConfig estimate = config.effective_coarse();
    estimate.delta = config.eps;
    b.m1 = coarse_sample_sizes(scheme, estimate).m1;
    b.linear = n;
  }
  return b;
}

AuditReport query_audit(const Verdict& verdict, std::size_t n, const TesterConfig& config) {
  const Budget per_run = closed_form_budget(n, config, verdict.pipeline);
  const std::uint64_t runs = verdict.trials;
  AuditReport r;
  r.q_samples_used = verdict.q_samples_used;
  r.p_queries_used = verdict.p_queries_used;
  r.budget = per_run.total() * runs;
  r.q_ratio = static_cast<double>(r.q_samples_used) / static_cast<double>(r.budget);
  r.p_ratio = static_cast<double>(r.p_queries_used) / static_cast<double>(r.budget);
  r.budget_over_n = static_cast<double>(per_run.total()) / static_cast<double>(n);

  auto fail = [&](const std::string& what) {
    throw BudgetExceeded(what + " (q_samples=" + std::to_string(r.q_samples_used) +
                         ", p_queries=" + std::to_string(r.p_queries_used) +
                         ", budget=" + std::to_string(r.budget) + ")");
  };
  if (r.q_samples_used > per_run.q_samples() * runs) fail("q-samples exceed budget");
  if (r.p_queries_used > r.budget) fail("p-queries exceed budget");
  if (verdict.pipeline == Pipeline::kEfficient &&
      r.p_queries_used > r.q_samples_used + verdict.probes_used) {
    fail("p-queries exceed q-samples plus probes");
  }
  if (verdict.distinct_p_queries && *verdict.distinct_p_queries > r.p_queries_used) {
    fail("distinct p-queries exceed total p-queries");
  }
  return r;
}

}  // namespace idtest
