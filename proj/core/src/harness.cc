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

#include "idtest/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "idtest/error.h"
#include "idtest/random.h"
#include "idtest/sample_stream.h"

namespace idtest {
namespace {

// Runs fn(i) for i in [0, count) on `jobs` threads. Each index is handled by
// exactly one thread; callers write results into per-index slots.
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
  if (jobs == 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < count; i += jobs) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (successes > trials) throw BadParams("wilson_interval: more successes than trials");
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

InstanceSpec make_instance(InstanceKind kind, std::size_t n, std::uint64_t seed,
                           const InstanceParams& params) {
  Instance inst = generate_instance(kind, n, seed, params);
  std::string descriptor = std::string(to_string(kind)) + "/n=" + std::to_string(n);
  if (kind == InstanceKind::kEpsPerturbed) descriptor += "/eps=" + std::to_string(params.eps);
  return {std::move(descriptor), std::move(inst.p), std::move(inst.q)};
}

TrialReport run_trials(const InstanceSpec& instance, const TesterConfig& config,
                       std::uint64_t trials, std::uint64_t master_seed, unsigned jobs,
                       Pipeline pipeline) {
  if (trials < 30) throw BadParams("run_trials needs at least 30 trials");
  config.validate();
  if (instance.p.size() != instance.q.size()) {
    throw DomainMismatch(instance.p.size(), instance.q.size());
  }
  const auto table = std::make_shared<const AliasTable>(instance.q);
  const std::size_t n = instance.p.size();

  struct Outcome {
    bool accept = false;
    std::uint64_t q = 0, p = 0;
    double ms = 0;
    bool violation = false;
    double q_ratio = 0, p_ratio = 0;
  };
  std::vector<Outcome> outcomes(trials);

  parallel_for(trials, jobs, [&](std::uint64_t t) {
    const std::uint64_t seed = derive_seed(master_seed, StreamTag::kTrial, t);
    AliasSampler source(table, derive_seed(seed, StreamTag::kQSource));
    TesterConfig cfg = config;
    cfg.master_seed = seed;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    if (pipeline == Pipeline::kBaseline) {
      v = baseline_test(instance.p, source, cfg);
    } else {
      v = cfg.trials > 1 ? amplified_test(instance.p, source, cfg)
                         : identity_test(instance.p, source, cfg);
    }
    Outcome& o = outcomes[t];
    o.ms = elapsed_ms(start);
    o.accept = v.decision == Decision::kAccept;
    o.q = v.q_samples_used;
    o.p = v.p_queries_used;
    try {
      const AuditReport audit = query_audit(v, n, cfg);
      o.q_ratio = audit.q_ratio;
      o.p_ratio = audit.p_ratio;
    } catch (const BudgetExceeded&) {
      o.violation = true;
    }
  });

  TrialReport r;
  r.descriptor = instance.descriptor;
  r.pipeline = pipeline;
  r.master_seed = master_seed;
  r.trials = trials;
  long double q_sum = 0, p_sum = 0, ms_sum = 0;
  for (const Outcome& o : outcomes) {
    r.accepts += o.accept ? 1 : 0;
    q_sum += o.q;
    p_sum += o.p;
    ms_sum += o.ms;
    r.audit_violations += o.violation ? 1 : 0;
    r.max_q_ratio = std::max(r.max_q_ratio, o.q_ratio);
    r.max_p_ratio = std::max(r.max_p_ratio, o.p_ratio);
  }
  const double td = static_cast<double>(trials);
  r.accept_rate = static_cast<double>(r.accepts) / td;
  r.accept_wilson = wilson_interval(r.accepts, trials);
  r.reject_wilson = wilson_interval(r.rejects(), trials);
  r.mean_q_samples = static_cast<double>(q_sum / td);
  r.mean_p_queries = static_cast<double>(p_sum / td);
  r.mean_wall_ms = static_cast<double>(ms_sum / td);
  return r;
}

// --- Lemma ---------------------------------------------------------------

void LemmaConfig::validate() const {
  if (n < 2 || n > 10000) throw BadParams("lemma_check needs 2 <= n <= 10^4");
  if (!(delta > 0.0 && delta <= 2.0)) throw BadParams("delta must lie in (0, 2]");
  if (trials < 30) throw BadParams("lemma_check needs at least 30 trials per family");
  CoarseConfig c = coarse;
  c.delta = delta;
  c.validate();
}

std::string_view to_string(LemmaExpectation e) {
  switch (e) {
    case LemmaExpectation::kCase1:
      return "case1";
    case LemmaExpectation::kCase2:
      return "case2";
    case LemmaExpectation::kGap:
      return "gap";
  }
  return "gap";
}

ProbabilityVector shift_bucket_mass(const BucketScheme& scheme, const ProbabilityVector& p,
                                    std::size_t from, std::size_t to, double amount) {
  const auto P = exact_bucket_masses(scheme, p);
  if (from >= P.size() || to >= P.size()) throw IndexOutOfRange(std::max(from, to), scheme.k());
  if (from == to) throw BadParams("shift_bucket_mass: buckets must differ");
  if (!(P[from] >= amount) || !(P[to] > 0)) {
    throw BadParams("shift_bucket_mass: source bucket too light or target bucket empty");
  }
  const double shrink = 1.0 - amount / P[from];
  const double grow = 1.0 + amount / P[to];
  std::vector<double> q(p.probs().begin(), p.probs().end());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const std::size_t j = scheme.index_of(p[i]);
    if (j == from) q[i] *= shrink;
    if (j == to) q[i] *= grow;
  }
  return validate_pmf(std::move(q));
}

namespace {

struct BucketPick {
  std::optional<std::size_t> light;         // heaviest bucket below j*
  std::optional<std::size_t> light_second;  // runner-up below j*
  std::optional<std::size_t> heavy;         // heaviest bucket at or above j*
};

BucketPick pick_buckets(const BucketScheme& scheme, const std::vector<double>& P) {
  std::vector<std::size_t> light;
  BucketPick pick;
  for (std::size_t j = 0; j < P.size(); ++j) {
    if (P[j] <= 0) continue;
    if (j < scheme.j_star()) {
      light.push_back(j);
    } else if (!pick.heavy || P[j] > P[*pick.heavy]) {
      pick.heavy = j;
    }
  }
  std::stable_sort(light.begin(), light.end(), [&](auto a, auto b) { return P[a] > P[b]; });
  if (!light.empty()) pick.light = light[0];
  if (light.size() > 1) pick.light_second = light[1];
  return pick;
}

LemmaFamily shifted_family(std::string name, LemmaExpectation expect, const BucketScheme& scheme,
                           const ProbabilityVector& p, std::optional<std::size_t> from,
                           std::optional<std::size_t> to, double amount) {
  if (!from || !to) throw BadParams("lemma family " + name + " has no suitable buckets");
  LemmaFamily f{std::move(name), expect, p, shift_bucket_mass(scheme, p, *from, *to, amount), 0};
  f.bucket_l1 = vector_l1(exact_bucket_masses(scheme, f.p), exact_bucket_masses(scheme, f.p, f.q));
  return f;
}

}  // namespace

std::vector<LemmaFamily> lemma_families(const BucketScheme& scheme, const LemmaConfig& config) {
  const std::size_t n = config.n;
  const auto uniform = uniform_pmf(n);
  const auto zipf = zipf_pmf(n, config.zipf_exponent);
  InstanceParams perturbed_params;
  perturbed_params.eps = config.perturbed_eps;
  const auto perturbed = generate_instance(InstanceKind::kEpsPerturbed, n,
                                           derive_seed(config.seed, StreamTag::kInstance),
                                           perturbed_params)
                             .q;

  std::vector<LemmaFamily> families;
  for (const auto& [name, pmf] : {std::pair{"case1/uniform", &uniform}, std::pair{"case1/zipf", &zipf},
                                  std::pair{"case1/eps-perturbed-self", &perturbed}}) {
    families.push_back({name, LemmaExpectation::kCase1, *pmf, *pmf, 0.0});
  }

  // Slightly more than delta/2 so rounding cannot pull the distance under delta.
  const double amount = config.delta / 2.0 * (1.0 + 1e-9);
  const auto zipf_pick = pick_buckets(scheme, exact_bucket_masses(scheme, zipf));
  const auto perturbed_pick = pick_buckets(scheme, exact_bucket_masses(scheme, perturbed));
  families.push_back(shifted_family("case2/zipf-into-heavy", LemmaExpectation::kCase2, scheme, zipf,
                                    zipf_pick.light, zipf_pick.heavy, amount));
  families.push_back(shifted_family("case2/zipf-into-light", LemmaExpectation::kCase2, scheme, zipf,
                                    zipf_pick.heavy, zipf_pick.light, amount));
  families.push_back(shifted_family("case2/eps-perturbed-light", LemmaExpectation::kCase2, scheme,
                                    perturbed, perturbed_pick.light, perturbed_pick.light_second, amount));
  families.push_back(shifted_family("gap/zipf-half-delta", LemmaExpectation::kGap, scheme, zipf,
                                    zipf_pick.light, zipf_pick.heavy, config.delta / 4.0));

  for (const LemmaFamily& f : families) {
    if (f.expect == LemmaExpectation::kCase2 && !(f.bucket_l1 >= config.delta)) {
      throw std::logic_error("oracle rejected Case 2 family " + f.name);
    }
    if (f.expect == LemmaExpectation::kCase1 && f.bucket_l1 != 0.0) {
      throw std::logic_error("oracle rejected Case 1 family " + f.name);
    }
  }
  return families;
}

LemmaReport lemma_check(const LemmaConfig& config) {
  config.validate();
  const BucketScheme scheme = build_scheme(config.n, config.scheme_eps, config.C);
  CoarseConfig coarse = config.coarse;
  coarse.delta = config.delta;

  LemmaReport report;
  report.config = config;
  report.k = scheme.k();
  report.j_star = scheme.j_star();
  report.sizes = coarse_sample_sizes(scheme, coarse);

  const auto families = lemma_families(scheme, config);
  bool all_passed = true;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const LemmaFamily& fam = families[f];
    const auto table = std::make_shared<const AliasTable>(fam.q);
    const std::uint64_t family_seed = derive_seed(config.seed, StreamTag::kInstance, f + 1);
    struct Outcome {
      bool case2 = false;
      std::uint64_t q = 0, p = 0;
      bool violation = false;
    };
    std::vector<Outcome> outcomes(config.trials);
    parallel_for(config.trials, config.jobs, [&](std::uint64_t t) {
      const std::uint64_t seed = derive_seed(family_seed, StreamTag::kTrial, t);
      AliasSampler source(table, derive_seed(seed, StreamTag::kQSource));
      KnownDistribution known(fam.p);
      Rng rng(derive_seed(seed, StreamTag::kUniformProbe));
      const CoarseVerdict v = coarse_compare(source, known, scheme, coarse, rng);
      const std::uint64_t q = source.draws(), p = known.queries();
      const std::uint64_t budget = report.sizes.total();
      const bool violation = p > q + v.estimates.s2_size || p > budget || q > budget;
      outcomes[t] = {v.outcome == CoarseCase::kCase2, q, p, violation};
    });

    LemmaFamilyResult r;
    r.name = fam.name;
    r.expect = fam.expect;
    r.bucket_l1 = fam.bucket_l1;
    r.trials = config.trials;
    long double q_sum = 0, p_sum = 0;
    for (const Outcome& o : outcomes) {
      const bool success = fam.expect == LemmaExpectation::kCase1 ? !o.case2 : o.case2;
      r.successes += success ? 1 : 0;
      r.audit_violations += o.violation ? 1 : 0;
      q_sum += o.q;
      p_sum += o.p;
    }
    const double td = static_cast<double>(r.trials);
    r.rate = static_cast<double>(r.successes) / td;
    r.wilson = wilson_interval(r.successes, r.trials);
    r.mean_q_samples = static_cast<double>(q_sum / td);
    r.mean_p_queries = static_cast<double>(p_sum / td);
    if (fam.expect != LemmaExpectation::kGap) {
      r.passed = r.wilson.lo >= config.min_wilson_lo;
      all_passed = all_passed && *r.passed;
    }
    report.families.push_back(std::move(r));
  }
  report.passed = all_passed;
  return report;
}

// --- Scaling -------------------------------------------------------------

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
  if (x.size() < 2) throw BadParams("slope fit needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw BadParams("log-log fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw BadParams("slope fit needs distinct x values");
  return sxy / sxx;
}

ScalingTable scaling_experiment(std::span<const std::size_t> n_grid, double eps,
                                const TesterConfig& config, std::uint64_t seed,
                                Pipeline pipeline) {
  if (n_grid.empty()) throw BadParams("scaling grid is empty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw BadParams("scaling grid must be strictly increasing");
  }
  TesterConfig cfg = config;
  cfg.eps = eps;
  cfg.trials = 1;
  cfg.validate();

  ScalingTable table;
  table.pipeline = pipeline;
  table.eps = eps;
  table.seed = seed;
  for (std::size_t n : n_grid) {
    const auto p = uniform_pmf(n);
    AliasSampler source = build_sampler(p, derive_seed(seed, StreamTag::kQSource, n));
    cfg.master_seed = derive_seed(seed, StreamTag::kTrial, n);
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = pipeline == Pipeline::kBaseline ? baseline_test(p, source, cfg)
                                                      : identity_test(p, source, cfg);
    ScalingRow row;
    row.wall_ms = elapsed_ms(start);
    row.n = n;
    row.q_samples = v.q_samples_used;
    row.p_queries = v.p_queries_used;
    row.decision = v.decision;
    row.budget = query_audit(v, n, cfg).budget;
    table.rows.push_back(row);
  }
  if (table.rows.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& r : table.rows) {
      xs.push_back(static_cast<double>(r.n));
      ys.push_back(static_cast<double>(r.q_samples + r.p_queries));
    }
    table.slope = fit_loglog_slope(xs, ys);
  }
  return table;
}

// --- Calibration ---------------------------------------------------------

namespace {

std::vector<double> or_default(const std::vector<double>& values, double fallback) {
  return values.empty() ? std::vector<double>{fallback} : values;
}

bool lemma_passes(const LemmaConfig& lemma, CalibrationPoint& point) {
  const LemmaReport report = lemma_check(lemma);
  for (const auto& f : report.families) {
    if (f.passed) point.wilson_lo.emplace_back("lemma:" + f.name, f.wilson.lo);
  }
  return report.passed;
}

bool contract_passes(const CalibrationTargets& targets, const TesterConfig& config,
                     CalibrationPoint& point) {
  InstanceParams params;
  params.eps = config.eps;
  bool ok = true;
  const auto check = [&](InstanceKind kind, bool expect_accept) {
    const auto instance = make_instance(kind, targets.n, derive_seed(targets.seed, StreamTag::kInstance), params);
    const auto r = run_trials(instance, config, targets.trials, targets.seed, targets.jobs);
    const double lo = expect_accept ? r.accept_wilson.lo : r.reject_wilson.lo;
    point.wilson_lo.emplace_back(std::string(expect_accept ? "accept:" : "reject:") +
                                     instance.descriptor, lo);
    ok = ok && lo >= targets.contract_lo && r.audit_violations == 0;
  };
  check(InstanceKind::kIdenticalUniform, true);
  if (ok) check(InstanceKind::kRandomHalf, false);
  if (ok && config.eps <= 1.0) check(InstanceKind::kEpsPerturbed, false);
  return ok;
}

CalibrationPoint point_of(std::string stage, const TesterConfig& c) {
  CalibrationPoint p;
  p.stage = std::move(stage);
  p.c1 = c.coarse.c1;
  p.c2 = c.coarse.c2;
  p.c3 = c.coarse.c3;
  p.c4 = c.c4;
  p.gamma = c.gamma;
  return p;
}

LemmaConfig with_coarse(LemmaConfig lemma, const TesterConfig& c) {
  lemma.coarse.c1 = c.coarse.c1;
  lemma.coarse.c2 = c.coarse.c2;
  lemma.coarse.c3 = c.coarse.c3;
  return lemma;
}

}  // namespace

CalibrationResult calibrate_constants(const CalibrationTargets& targets, const SearchSpace& space,
                                      const TesterConfig& base, const LemmaConfig& lemma_base) {
  if (space.empty()) throw CalibrationFailed("search space is empty");
  base.validate();
  CalibrationResult result;
  result.tester = base;
  result.lemma = with_coarse(lemma_base, base);

  {
    CalibrationPoint p = point_of("defaults", base);
    bool ok = !targets.check_lemma || lemma_passes(result.lemma, p);
    ok = ok && contract_passes(targets, base, p);
    p.passed = ok;
    result.evaluated.push_back(p);
    if (ok) {
      result.defaults_unchanged = true;
      return result;
    }
  }

  TesterConfig current = base;
  if (targets.check_lemma) {
    std::vector<TesterConfig> candidates;
    for (double c1 : or_default(space.c1, base.coarse.c1))
      for (double c2 : or_default(space.c2, base.coarse.c2))
        for (double c3 : or_default(space.c3, base.coarse.c3)) {
          TesterConfig c = base;
          c.coarse.c1 = c1;
          c.coarse.c2 = c2;
          c.coarse.c3 = c3;
          candidates.push_back(c);
        }
    const BucketScheme scheme = build_scheme(lemma_base.n, lemma_base.scheme_eps, lemma_base.C);
    const auto cost = [&](const TesterConfig& c) {
      CoarseConfig cc = with_coarse(lemma_base, c).coarse;
      cc.delta = lemma_base.delta;
      return coarse_sample_sizes(scheme, cc).total();
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const auto& a, const auto& b) { return cost(a) < cost(b); });
    bool found = false;
    for (const auto& c : candidates) {
      CalibrationPoint p = point_of("coarse", c);
      p.passed = lemma_passes(with_coarse(lemma_base, c), p);
      result.evaluated.push_back(p);
      if (p.passed) {
        current = c;
        found = true;
        break;
      }
    }
    if (!found) throw CalibrationFailed("no coarse multipliers meet the lemma target");
  }

  std::vector<TesterConfig> candidates;
  for (double c4 : or_default(space.c4, base.c4))
    for (double gamma : or_default(space.gamma, base.gamma)) {
      TesterConfig c = current;
      c.c4 = c4;
      c.gamma = gamma;
      candidates.push_back(c);
    }
  std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(a.c4, a.gamma) < std::tie(b.c4, b.gamma);
  });
  for (const auto& c : candidates) {
    CalibrationPoint p = point_of("moment", c);
    p.passed = contract_passes(targets, c, p);
    result.evaluated.push_back(p);
    if (p.passed) {
      result.tester = c;
      result.lemma = with_coarse(lemma_base, c);
      return result;
    }
  }
  throw CalibrationFailed("no (c4, gamma) point meets the accept/reject contract");
}

}  // namespace idtest
