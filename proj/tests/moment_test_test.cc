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

#include "idtest/moment_test.h"

#include <cmath>
#include <memory>

#include "gtest/gtest.h"
#include "idtest/error.h"
#include "property_suite.h"

namespace idtest {
namespace {

CollisionStats stats_from(const BucketScheme& s, std::uint64_t S, std::size_t bucket, double stat) {
  CollisionStats c;
  c.total_samples = S;
  c.per_bucket_stat.assign(s.num_buckets(), 0.0);
  c.per_bucket_stat[bucket] = stat;
  return c;
}

TEST(MomentSampleSizeTest, Formula) {
  EXPECT_EQ(moment_sample_size(400, 0.5, 2.0),
            static_cast<std::uint64_t>(std::ceil(2 * 20 * std::log(401.0) / 0.25)));
  EXPECT_GE(moment_sample_size(2, 2.0, 1e-6), 2u);
}

TEST(CollectCountsTest, PairInOneBucket) {
  const auto s = build_scheme(20, 0.5, 100);
  const auto p = uniform_pmf(20);
  RecordedSampleStream source(20, {7, 7, 9});
  KnownDistribution known(p);
  const auto stats = collect_counts(source, known, s, 3);
  EXPECT_EQ(stats.counts.size(), 2u);
  EXPECT_EQ(stats.counts.at(7), 2u);
  EXPECT_EQ(stats.counts.at(9), 1u);
  const std::size_t b = bucket_index(s, 0.05);
  for (std::size_t j = 0; j < s.num_buckets(); ++j) {
    EXPECT_EQ(stats.per_bucket_stat[j], j == b ? 1.0 : 0.0);
  }
  EXPECT_EQ(known.queries(), 2u);
}

TEST(CollectCountsTest, DistinctSamplesHaveNoCollisions) {
  const auto s = build_scheme(50, 0.5, 100);
  std::vector<std::size_t> samples(50);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = i;
  RecordedSampleStream source(50, samples);
  const auto pmf = zipf_pmf(50, 1.0);
  KnownDistribution known(pmf);
  const auto stats = collect_counts(source, known, s, 50);
  for (double x : stats.per_bucket_stat) EXPECT_EQ(x, 0.0);
}

TEST(CollectCountsTest, RepeatedSampleIsMaximal) {
  const auto s = build_scheme(50, 0.5, 100);
  const auto p = zipf_pmf(50, 1.0);
  RecordedSampleStream source(50, std::vector<std::size_t>(40, 3));
  KnownDistribution known(p);
  const auto stats = collect_counts(source, known, s, 40);
  EXPECT_EQ(stats.per_bucket_stat[bucket_index(s, p[3])], pairs(40));
  EXPECT_EQ(known.queries(), 1u);
}

TEST(CollectCountsTest, NeedsTwoSamples) {
  const auto s = build_scheme(50, 0.5, 100);
  auto source = build_sampler(uniform_pmf(50), 1);
  const auto pmf = uniform_pmf(50);
  KnownDistribution known(pmf);
  EXPECT_THROW(collect_counts(source, known, s, 1), BadParams);
}

TEST(MomentDecideTest, ZeroStatisticAccepts) {
  const auto s = build_scheme(100, 0.5, 100);
  const auto P = exact_bucket_masses(s, zipf_pmf(100, 1.0));
  const auto v = moment_decide(stats_from(s, 100, 0, 0.0), P, s, 0.5);
  EXPECT_FALSE(v.reject);
  EXPECT_GT(v.num_tested(), 0u);
  for (const auto& b : v.tested) EXPECT_GT(b.threshold, 0.0);
}

TEST(MomentDecideTest, StatisticAtThresholdAccepts) {
  const auto s = build_scheme(400, 0.5, 100);
  const auto P = exact_bucket_masses(s, uniform_pmf(400));
  const std::size_t j = bucket_index(s, 1.0 / 400);
  const double threshold = (1.0 + 0.5 / 4.0) * pairs(500) * P[j] * bucket_upper(s, j);

  const auto at = moment_decide(stats_from(s, 500, j, threshold), P, s, 0.5);
  ASSERT_EQ(at.num_tested(), 1u);
  EXPECT_EQ(at.tested[0].threshold, threshold);
  EXPECT_FALSE(at.reject);

  const auto above = moment_decide(stats_from(s, 500, j, std::nextafter(threshold, INFINITY)), P, s, 0.5);
  EXPECT_TRUE(above.reject);
  EXPECT_EQ(above.triggering_bucket, j);
  EXPECT_EQ(above.outcomes[j], BucketOutcome::kReject);
}

TEST(MomentDecideTest, GammaScalesThreshold) {
  const auto s = build_scheme(400, 0.5, 100);
  const auto P = exact_bucket_masses(s, uniform_pmf(400));
  const std::size_t j = bucket_index(s, 1.0 / 400);
  const auto plain = moment_decide(stats_from(s, 500, j, 0), P, s, 0.5, 1.0);
  const auto slack = moment_decide(stats_from(s, 500, j, 0), P, s, 0.5, 2.0);
  EXPECT_DOUBLE_EQ(slack.tested[0].threshold, 2 * plain.tested[0].threshold);
}

TEST(MomentDecideTest, LightMassBucketsAreSkipped) {
  const auto s = build_scheme(100, 0.5, 100);
  std::vector<double> mass(s.num_buckets(), 0.0);
  const double guard = 0.5 / (4.0 * s.k() + 4.0);
  mass[0] = 0.5;
  mass[10] = guard;
  mass[20] = std::nextafter(guard, 1.0);
  const auto v = moment_decide(stats_from(s, 100, 10, 1e9), mass, s, 0.5);
  ASSERT_EQ(v.num_tested(), 1u);
  EXPECT_EQ(v.tested[0].bucket, 20u);
  EXPECT_EQ(v.outcomes[0], BucketOutcome::kSkipped);
  EXPECT_EQ(v.outcomes[10], BucketOutcome::kSkipped);
  EXPECT_FALSE(v.reject);
}

TEST(MomentDecideTest, MonotoneInStatistic) {
  const auto s = build_scheme(400, 0.5, 100);
  const auto P = exact_bucket_masses(s, uniform_pmf(400));
  const std::size_t j = bucket_index(s, 1.0 / 400);
  bool rejected = false;
  for (double stat = 0; stat < 2000; stat += 7) {
    const bool r = moment_decide(stats_from(s, 500, j, stat), P, s, 0.5).reject;
    EXPECT_TRUE(!rejected || r) << stat;
    rejected = r;
  }
  EXPECT_TRUE(rejected);
}

TEST(MomentDecideTest, WrongLengthThrows) {
  const auto s = build_scheme(100, 0.5, 100);
  std::vector<double> short_mass(3, 0.0);
  EXPECT_THROW(moment_decide(stats_from(s, 100, 0, 0), short_mass, s, 0.5), DimensionMismatch);
}

// p = q = uniform[400]: E[stat] = C(S,2)/400 and the threshold is
// 1.125 * C(S,2) * upper(j), about 4 standard deviations above the mean.
TEST(MomentDecideTest, EqualUniformAccepts) {
  const std::size_t n = 400;
  const auto s = build_scheme(n, 0.5, 100);
  const auto p = uniform_pmf(n);
  const auto P = exact_bucket_masses(s, p);
  const std::uint64_t S = moment_sample_size(n, 0.5, 2.0);
  const auto table = std::make_shared<const AliasTable>(p);
  int accepts = 0;
  for (int trial = 0; trial < 200; ++trial) {
    AliasSampler source(table, derive_seed(3, StreamTag::kTrial, trial));
    KnownDistribution known(p);
    accepts += !moment_decide(collect_counts(source, known, s, S), P, s, 0.5).reject;
  }
  EXPECT_GE(accepts, 190);
}

TEST(CollisionStatisticTest, Unbiased) {
  const auto r = props::collision_unbiasedness(4, 3000);
  EXPECT_TRUE(r.passed) << r.detail;
}

}  // namespace
}  // namespace idtest
