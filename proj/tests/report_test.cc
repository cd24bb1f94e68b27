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

#include "idtest/report.h"

#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "idtest/error.h"
#include "idtest/instances.h"

namespace idtest {
namespace {

TEST(ConfigJsonTest, TesterConfigRoundTrip) {
  TesterConfig c = TesterConfig::calibrated();
  c.eps = 0.75;
  c.coarse.c1 = 5;
  c.coarse.budget_factor = std::nullopt;
  c.gamma = 1.25;
  c.mode = SampleMode::kFaithful;
  const auto back = tester_config_from_json(to_json_value(c), TesterConfig{});
  EXPECT_EQ(back.eps, 0.75);
  EXPECT_EQ(back.coarse.c1, 5);
  EXPECT_FALSE(back.coarse.budget_factor.has_value());
  EXPECT_EQ(back.gamma, 1.25);
  EXPECT_EQ(back.mode, SampleMode::kFaithful);
  EXPECT_EQ(to_json_value(back), to_json_value(c));
}

TEST(ConfigJsonTest, AcceptsCalibrationDocument) {
  const json doc = {{"schema_version", kReportSchemaVersion}, {"tester", {{"c4", 3.0}}}};
  EXPECT_EQ(tester_config_from_json(doc).c4, 3.0);
}

TEST(ConfigJsonTest, RejectsUnknownKeys) {
  EXPECT_THROW(tester_config_from_json(json{{"epsilon", 0.5}}), BadParams);
  EXPECT_THROW(tester_config_from_json(json{{"coarse", {{"c9", 1}}}}), BadParams);
  EXPECT_THROW(lemma_config_from_json(json{{"bogus", 1}}), BadParams);
}

TEST(ConfigJsonTest, LemmaConfigRoundTrip) {
  LemmaConfig c;
  c.n = 300;
  c.delta = 0.2;
  c.coarse.c3 = 9;
  const auto back = lemma_config_from_json(to_json_value(c));
  EXPECT_EQ(back.n, 300u);
  EXPECT_EQ(back.delta, 0.2);
  EXPECT_EQ(back.coarse.c3, 9);
}

TEST(VerdictJsonTest, CarriesRequiredFields) {
  const auto p = uniform_pmf(500);
  auto config = TesterConfig::calibrated();
  config.master_seed = 12;
  auto source = build_sampler(p, 1);
  const auto v = identity_test(p, source, config);
  const json j = verdict_json(v, config, 500);
  for (const char* key : {"schema_version", "decision", "stage", "triggering_bucket", "q_samples_used",
                          "p_queries_used", "k", "j_star", "seed", "config", "audit"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["seed"], 12u);
  EXPECT_EQ(j["q_samples_used"], v.q_samples_used);
  EXPECT_EQ(j["decision"], std::string(to_string(v.decision)));
}

TEST(ScalingCsvTest, HeaderRowsAndSlope) {
  ScalingTable t;
  t.eps = 0.5;
  t.seed = 3;
  t.rows.push_back({1024, 100, 90, 1.5, 400, Decision::kAccept});
  t.rows.push_back({4096, 200, 180, 2.5, 800, Decision::kAccept});
  t.slope = 0.5;
  const std::string csv = scaling_csv(t, /*include_timing=*/false);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0].rfind("# ", 0), 0u);
  EXPECT_EQ(lines[1], "n,q_samples,p_queries,wall_ms,budget");
  EXPECT_EQ(lines[2], "1024,100,90,0,400");
  EXPECT_EQ(lines[4], "# slope=0.5");
  EXPECT_NE(scaling_csv(t, true).find("1024,100,90,1.5,400"), std::string::npos);
}

TEST(ScalingCsvTest, NoSlopeLineWithoutFit) {
  ScalingTable t;
  t.rows.push_back({1024, 100, 90, 1.5, 400, Decision::kAccept});
  EXPECT_EQ(scaling_csv(t).find("slope"), std::string::npos);
}

}  // namespace
}  // namespace idtest
