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

#ifndef IDTEST_REPORT_H_
#define IDTEST_REPORT_H_

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "idtest/harness.h"
#include "idtest/tester.h"

namespace idtest {

// Bumped whenever a field is renamed or removed.
inline constexpr int kReportSchemaVersion = 1;

using nlohmann::json;

json to_json_value(const CoarseConfig& c);
json to_json_value(const TesterConfig& c);
json to_json_value(const LemmaConfig& c);
json to_json_value(const WilsonInterval& w);

// Applies the keys present in `j` on top of `base`. Unknown keys are an error.
TesterConfig tester_config_from_json(const json& j, TesterConfig base = TesterConfig::calibrated());
LemmaConfig lemma_config_from_json(const json& j, LemmaConfig base = LemmaConfig{});

// Verdict document for `test`. Carries no timing, so equal seeds give equal bytes.
json verdict_json(const Verdict& v, const TesterConfig& config, std::size_t n);

json trial_report_json(const TrialReport& r, bool include_timing = false);
json lemma_report_json(const LemmaReport& r);
json calibration_json(const CalibrationResult& r);

// Columns n,q_samples,p_queries,wall_ms,budget; a trailing "# slope=..."
// comment row when the table has a fit.
std::string scaling_csv(const ScalingTable& table, bool include_timing = true);

}  // namespace idtest

#endif  // IDTEST_REPORT_H_
