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

#include <charconv>
#include <set>
#include <sstream>

#include "idtest/error.h"

namespace idtest {
namespace {

std::string fmt_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

json optional_index(const std::optional<std::size_t>& j) {
  return j ? json(*j) : json(nullptr);
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) throw BadParams(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw BadParams(std::string("unknown ") + what + " key '" + key + "'");
  }
}

void apply_coarse(const json& j, CoarseConfig& c) {
  reject_unknown(j, {"delta", "c1", "c2", "c3", "mode", "budget_factor",
                     "literal_probe_normalization"},
                 "coarse config");
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("c1")) c.c1 = j.at("c1").get<double>();
  if (j.contains("c2")) c.c2 = j.at("c2").get<double>();
  if (j.contains("c3")) c.c3 = j.at("c3").get<double>();
  if (j.contains("mode")) {
    const auto m = parse_sample_mode(j.at("mode").get<std::string>());
    if (!m) throw BadParams("unknown mode " + j.at("mode").dump());
    c.mode = *m;
  }
  if (j.contains("budget_factor")) {
    const auto& b = j.at("budget_factor");
    c.budget_factor = b.is_null() ? std::nullopt : std::optional<double>(b.get<double>());
  }
  if (j.contains("literal_probe_normalization")) {
    c.literal_probe_normalization = j.at("literal_probe_normalization").get<bool>();
  }
}

json coarse_summary(const CoarseVerdict& c) {
  return {{"outcome", to_string(c.outcome)},
          {"triggering_step", to_string(c.triggering_step)},
          {"triggering_bucket", optional_index(c.triggering_bucket)},
          {"m1", c.sizes.m1},
          {"s1", c.sizes.s1},
          {"s2", c.sizes.s2},
          {"capped", c.sizes.capped}};
}

json moment_summary(const MomentVerdict& m) {
  json tested = json::array();
  for (const MomentBucket& b : m.tested) {
    tested.push_back({{"bucket", b.bucket},
                      {"stat", b.stat},
                      {"threshold", b.threshold},
                      {"outcome", to_string(b.outcome)}});
  }
  return {{"reject", m.reject},
          {"triggering_bucket", optional_index(m.triggering_bucket)},
          {"skipped", m.outcomes.size() - m.tested.size()},
          {"tested", std::move(tested)}};
}

}  // namespace

json to_json_value(const CoarseConfig& c) {
  return {{"delta", c.delta},
          {"c1", c.c1},
          {"c2", c.c2},
          {"c3", c.c3},
          {"mode", to_string(c.mode)},
          {"budget_factor", c.budget_factor ? json(*c.budget_factor) : json(nullptr)},
          {"literal_probe_normalization", c.literal_probe_normalization}};
}

json to_json_value(const TesterConfig& c) {
  return {{"eps", c.eps},
          {"C", c.C},
          {"C_prime", c.C_prime},
          {"delta", c.delta()},
          {"coarse", to_json_value(c.effective_coarse())},
          {"c4", c.c4},
          {"gamma", c.gamma},
          {"trials", c.trials},
          {"mode", to_string(c.mode)}};
}

json to_json_value(const LemmaConfig& c) {
  CoarseConfig coarse = c.coarse;
  coarse.delta = c.delta;
  return {{"n", c.n},
          {"delta", c.delta},
          {"scheme_eps", c.scheme_eps},
          {"C", c.C},
          {"coarse", to_json_value(coarse)},
          {"zipf_exponent", c.zipf_exponent},
          {"perturbed_eps", c.perturbed_eps},
          {"trials", c.trials},
          {"seed", c.seed},
          {"min_wilson_lo", c.min_wilson_lo}};
}

json to_json_value(const WilsonInterval& w) { return json::array({w.lo, w.hi}); }

TesterConfig tester_config_from_json(const json& j, TesterConfig base) {
  // A calibration document nests the tester config under "tester".
  if (j.is_object() && j.contains("tester") && j.contains("schema_version")) {
    return tester_config_from_json(j.at("tester"), std::move(base));
  }
  reject_unknown(j, {"eps", "C", "C_prime", "delta", "coarse", "c4", "gamma", "trials", "mode",
                     "master_seed"},
                 "tester config");
  if (j.contains("eps")) base.eps = j.at("eps").get<double>();
  if (j.contains("C")) base.C = j.at("C").get<double>();
  if (j.contains("C_prime")) base.C_prime = j.at("C_prime").get<double>();
  if (j.contains("coarse")) apply_coarse(j.at("coarse"), base.coarse);
  if (j.contains("c4")) base.c4 = j.at("c4").get<double>();
  if (j.contains("gamma")) base.gamma = j.at("gamma").get<double>();
  if (j.contains("trials")) base.trials = j.at("trials").get<unsigned>();
  if (j.contains("master_seed")) base.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (j.contains("mode")) {
    const auto m = parse_sample_mode(j.at("mode").get<std::string>());
    if (!m) throw BadParams("unknown mode " + j.at("mode").dump());
    base.mode = *m;
  }
  // "delta" is derived (eps / C_prime); accepted so echoed configs load back.
  base.validate();
  return base;
}

LemmaConfig lemma_config_from_json(const json& j, LemmaConfig base) {
  if (j.is_object() && j.contains("lemma") && j.contains("schema_version")) {
    return lemma_config_from_json(j.at("lemma"), std::move(base));
  }
  reject_unknown(j, {"n", "delta", "scheme_eps", "C", "coarse", "zipf_exponent", "perturbed_eps",
                     "trials", "seed", "min_wilson_lo"},
                 "lemma config");
  if (j.contains("n")) base.n = j.at("n").get<std::size_t>();
  if (j.contains("delta")) base.delta = j.at("delta").get<double>();
  if (j.contains("scheme_eps")) base.scheme_eps = j.at("scheme_eps").get<double>();
  if (j.contains("C")) base.C = j.at("C").get<double>();
  if (j.contains("coarse")) apply_coarse(j.at("coarse"), base.coarse);
  if (j.contains("zipf_exponent")) base.zipf_exponent = j.at("zipf_exponent").get<double>();
  if (j.contains("perturbed_eps")) base.perturbed_eps = j.at("perturbed_eps").get<double>();
  if (j.contains("trials")) base.trials = j.at("trials").get<std::uint64_t>();
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("min_wilson_lo")) base.min_wilson_lo = j.at("min_wilson_lo").get<double>();
  base.coarse.delta = base.delta;
  base.validate();
  return base;
}

json verdict_json(const Verdict& v, const TesterConfig& config, std::size_t n) {
  json j = {{"schema_version", kReportSchemaVersion},
            {"decision", to_string(v.decision)},
            {"stage", to_string(v.stage)},
            {"triggering_bucket", optional_index(v.triggering_bucket)},
            {"pipeline", to_string(v.pipeline)},
            {"n", n},
            {"q_samples_used", v.q_samples_used},
            {"p_queries_used", v.p_queries_used},
            {"probes_used", v.probes_used},
            {"k", v.k},
            {"j_star", v.j_star},
            {"j_star_clamped", v.j_star_clamped},
            {"seed", v.seed},
            {"trials", v.trials},
            {"config", to_json_value(config)}};
  json decisions = json::array();
  for (Decision d : v.trial_decisions) decisions.push_back(to_string(d));
  j["trial_decisions"] = std::move(decisions);
  j["coarse"] = v.coarse ? coarse_summary(*v.coarse) : json(nullptr);
  j["moment"] = v.moment ? moment_summary(*v.moment) : json(nullptr);
  if (v.bucket_mass_distance) j["bucket_mass_distance"] = *v.bucket_mass_distance;
  const AuditReport audit = query_audit(v, n, config);
  j["audit"] = {{"budget", audit.budget},
                {"q_ratio", audit.q_ratio},
                {"p_ratio", audit.p_ratio},
                {"budget_over_n", audit.budget_over_n}};
  return j;
}

json trial_report_json(const TrialReport& r, bool include_timing) {
  json j = {{"instance", r.descriptor},
            {"pipeline", to_string(r.pipeline)},
            {"seed", r.master_seed},
            {"trials", r.trials},
            {"accepts", r.accepts},
            {"accept_rate", r.accept_rate},
            {"accept_wilson95", to_json_value(r.accept_wilson)},
            {"reject_wilson95", to_json_value(r.reject_wilson)},
            {"mean_q_samples", r.mean_q_samples},
            {"mean_p_queries", r.mean_p_queries},
            {"audit_violations", r.audit_violations},
            {"max_q_ratio", r.max_q_ratio},
            {"max_p_ratio", r.max_p_ratio}};
  if (include_timing) j["mean_wall_ms"] = r.mean_wall_ms;
  return j;
}

json lemma_report_json(const LemmaReport& r) {
  json families = json::array();
  for (const auto& f : r.families) {
    families.push_back({{"family", f.name},
                        {"expect", to_string(f.expect)},
                        {"bucket_l1", f.bucket_l1},
                        {"trials", f.trials},
                        {"successes", f.successes},
                        {"rate", f.rate},
                        {"wilson95", to_json_value(f.wilson)},
                        {"passed", f.passed ? json(*f.passed) : json(nullptr)},
                        {"mean_q_samples", f.mean_q_samples},
                        {"mean_p_queries", f.mean_p_queries},
                        {"audit_violations", f.audit_violations}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"config", to_json_value(r.config)},
          {"k", r.k},
          {"j_star", r.j_star},
          {"m1", r.sizes.m1},
          {"s1", r.sizes.s1},
          {"s2", r.sizes.s2},
          {"families", std::move(families)},
          {"passed", r.passed}};
}

json calibration_json(const CalibrationResult& r) {
  json points = json::array();
  for (const auto& p : r.evaluated) {
    json lo = json::object();
    for (const auto& [name, value] : p.wilson_lo) lo[name] = value;
    points.push_back({{"stage", p.stage},
                      {"c1", p.c1},
                      {"c2", p.c2},
                      {"c3", p.c3},
                      {"c4", p.c4},
                      {"gamma", p.gamma},
                      {"passed", p.passed},
                      {"wilson_lo", std::move(lo)}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"tester", to_json_value(r.tester)},
          {"lemma", to_json_value(r.lemma)},
          {"defaults_unchanged", r.defaults_unchanged},
          {"evaluated", std::move(points)}};
}

std::string scaling_csv(const ScalingTable& table, bool include_timing) {
  std::ostringstream out;
  out << "# pipeline=" << to_string(table.pipeline) << " eps=" << fmt_double(table.eps)
      << " seed=" << table.seed << "\n";
  out << "n,q_samples,p_queries,wall_ms,budget\n";
  for (const auto& r : table.rows) {
    out << r.n << ',' << r.q_samples << ',' << r.p_queries << ','
        << (include_timing ? fmt_double(r.wall_ms) : std::string("0")) << ',' << r.budget << '\n';
  }
  if (table.slope) out << "# slope=" << fmt_double(*table.slope) << "\n";
  return out.str();
}

}  // namespace idtest
