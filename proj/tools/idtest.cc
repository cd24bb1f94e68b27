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

// idtest: command-line front end for the identity tester.
//
// Exit codes: 0 success (for `test`: accept), 1 negative outcome (`test`:
// reject; `lemma-check`: a family missed its target; `calibrate`: no point
// met the targets), 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idtest/bucketing.h"
#include "idtest/distribution.h"
#include "idtest/error.h"
#include "idtest/harness.h"
#include "idtest/instances.h"
#include "idtest/pmf_io.h"
#include "idtest/report.h"
#include "idtest/sample_stream.h"
#include "idtest/tester.h"

namespace {

using idtest::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by the randomized subcommands. Unset optionals leave the
// loaded configuration untouched.
struct CommonFlags {
  std::optional<double> eps;
  std::optional<double> C;
  std::optional<double> C_prime;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> trials;
  unsigned jobs = 1;
  std::string out;
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_trials = true) {
  cmd->add_option("--eps", f.eps, "distance parameter eps in (0, 2]");
  cmd->add_option("--C", f.C, "bucket constant C (eps' = eps / C)");
  cmd->add_option("--C-prime", f.C_prime, "coarse-stage divisor (delta = eps / C')");
  cmd->add_option("--mode", f.mode, "sample-size mode")
      ->check(CLI::IsMember({"faithful", "practical"}));
  cmd->add_option("--seed", f.seed, "master seed (generated and recorded when omitted)");
  if (with_trials) cmd->add_option("--trials", f.trials, "trial count");
  cmd->add_option("--jobs", f.jobs, "worker threads for trial execution")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "write the report here instead of stdout");
  cmd->add_option("--config", f.config_path, "JSON tester configuration (e.g. config/calibrated.json)");
}

std::uint64_t effective_seed(const CommonFlags& f) {
  if (f.seed) return *f.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

idtest::TesterConfig tester_config(const CommonFlags& f) {
  idtest::TesterConfig c = idtest::TesterConfig::calibrated();
  if (!f.config_path.empty()) c = idtest::tester_config_from_json(read_json_file(f.config_path), c);
  if (f.eps) c.eps = *f.eps;
  if (f.C) c.C = *f.C;
  if (f.C_prime) c.C_prime = *f.C_prime;
  if (f.mode) c.mode = *idtest::parse_sample_mode(*f.mode);
  c.validate();
  return c;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text;
}

// --- test -----------------------------------------------------------------

struct TestFlags {
  CommonFlags common;
  std::string pmf;
  std::string q;
  std::string q_file;
  std::string q_pmf;
  bool baseline = false;
};

int cmd_test(const TestFlags& f) {
  idtest::TesterConfig config = tester_config(f.common);
  if (f.common.trials) config.trials = *f.common.trials;
  config.master_seed = effective_seed(f.common);
  config.validate();

  const auto p = idtest::read_pmf(f.pmf);
  const int sources = !f.q.empty() + !f.q_file.empty() + !f.q_pmf.empty();
  if (sources != 1) throw UsageError("give exactly one of --q self, --q-file, --q-pmf");
  if (!f.q.empty() && f.q != "self") throw UsageError("--q accepts only 'self'");

  std::unique_ptr<idtest::SampleStream> source;
  const std::uint64_t q_seed =
      idtest::derive_seed(config.master_seed, idtest::StreamTag::kQSource);
  if (!f.q.empty()) {
    source = std::make_unique<idtest::AliasSampler>(idtest::build_sampler(p, q_seed));
  } else if (!f.q_pmf.empty()) {
    const auto q = idtest::read_pmf(f.q_pmf);
    if (q.size() != p.size()) throw idtest::DomainMismatch(p.size(), q.size());
    source = std::make_unique<idtest::AliasSampler>(idtest::build_sampler(q, q_seed));
  } else {
    source = std::make_unique<idtest::RecordedSampleStream>(
        p.size(), idtest::read_samples(f.q_file, p.size()));
  }

  idtest::Verdict v;
  if (f.baseline) {
    if (config.trials != 1) throw UsageError("--baseline runs a single trial");
    v = idtest::baseline_test(p, *source, config);
  } else {
    v = idtest::amplified_test(p, *source, config);
  }
  emit(idtest::verdict_json(v, config, p.size()).dump(2) + "\n", f.common.out);
  return v.decision == idtest::Decision::kAccept ? kExitOk : kExitNegative;
}

// --- generate -------------------------------------------------------------

struct GenerateFlags {
  std::string kind;
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  double eps = 0.5;
  double zipf_exponent = 1.0;
  std::string out;
  std::uint64_t samples = 0;
  bool binary = false;
};

int cmd_generate(const GenerateFlags& f) {
  const auto kind = idtest::parse_instance_kind(f.kind);
  if (!kind) throw UsageError("unknown instance kind '" + f.kind + "'");
  CommonFlags seed_only;
  seed_only.seed = f.seed;
  const std::uint64_t seed = effective_seed(seed_only);
  idtest::InstanceParams params;
  params.eps = f.eps;
  params.zipf_exponent = f.zipf_exponent;
  const auto instance = idtest::generate_instance(*kind, f.n, seed, params);

  const std::string prefix =
      f.out.empty() ? std::string(idtest::to_string(*kind)) + "-n" + std::to_string(f.n) : f.out;
  const std::string p_path = prefix + ".p.pmf";
  const std::string q_path = prefix + ".q.pmf";
  idtest::write_pmf(p_path, instance.p, f.binary);
  idtest::write_pmf(q_path, instance.q, f.binary);

  json j = {{"schema_version", idtest::kReportSchemaVersion},
            {"kind", f.kind},
            {"n", f.n},
            {"seed", seed},
            {"l1_distance", idtest::l1_distance(instance.p, instance.q)},
            {"p_file", p_path},
            {"q_file", q_path}};
  if (*kind == idtest::InstanceKind::kEpsPerturbed) j["eps"] = f.eps;
  if (*kind == idtest::InstanceKind::kZipfPair) j["zipf_exponent"] = f.zipf_exponent;
  if (f.samples > 0) {
    const std::string s_path = prefix + ".q.samples";
    auto sampler = idtest::build_sampler(
        instance.q, idtest::derive_seed(seed, idtest::StreamTag::kQSource));
    std::vector<std::size_t> drawn(f.samples);
    for (auto& s : drawn) s = sampler.draw();
    idtest::write_samples(s_path, drawn);
    j["samples_file"] = s_path;
    j["samples"] = f.samples;
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// --- bench ----------------------------------------------------------------

struct BenchFlags {
  CommonFlags common;
  std::optional<std::string> grid;
  unsigned log2_min = 10;
  unsigned log2_max = 18;
  bool baseline = false;
  bool no_timing = false;
};

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      grid.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad grid entry '" + item + "'");
    }
  }
  return grid;
}

int cmd_bench(const BenchFlags& f) {
  idtest::TesterConfig config = tester_config(f.common);
  std::vector<std::size_t> grid;
  if (f.grid) {
    grid = parse_grid(*f.grid);
  } else {
    if (f.log2_min > f.log2_max || f.log2_max > 40) throw UsageError("bad log2 grid bounds");
    for (unsigned e = f.log2_min; e <= f.log2_max; ++e) grid.push_back(std::size_t{1} << e);
  }
  if (grid.empty()) throw UsageError("grid is empty");
  const auto table = idtest::scaling_experiment(
      grid, config.eps, config, effective_seed(f.common),
      f.baseline ? idtest::Pipeline::kBaseline : idtest::Pipeline::kEfficient);
  emit(idtest::scaling_csv(table, !f.no_timing), f.common.out);
  return kExitOk;
}

// --- lemma-check ----------------------------------------------------------

struct LemmaFlags {
  CommonFlags common;
  std::optional<std::size_t> n;
  std::optional<double> delta;
  std::optional<double> scheme_eps;
};

int cmd_lemma_check(const LemmaFlags& f) {
  idtest::LemmaConfig config;
  if (!f.common.config_path.empty()) {
    const json j = read_json_file(f.common.config_path);
    config = idtest::lemma_config_from_json(j, config);
  }
  if (f.n) config.n = *f.n;
  if (f.delta) config.delta = *f.delta;
  if (f.scheme_eps) config.scheme_eps = *f.scheme_eps;
  if (f.common.C) config.C = *f.common.C;
  if (f.common.mode) config.coarse.mode = *idtest::parse_sample_mode(*f.common.mode);
  if (f.common.trials) config.trials = *f.common.trials;
  config.seed = effective_seed(f.common);
  config.jobs = f.common.jobs;
  config.coarse.delta = config.delta;
  const auto report = idtest::lemma_check(config);
  emit(idtest::lemma_report_json(report).dump(2) + "\n", f.common.out);
  return report.passed ? kExitOk : kExitNegative;
}

// --- oracle ---------------------------------------------------------------

struct OracleFlags {
  std::string a;
  std::string b;
  double eps = 0.5;
  double C = idtest::kDefaultBucketConstant;
  std::string against;
};

int cmd_oracle_l1(const OracleFlags& f) {
  const auto p = idtest::read_pmf(f.a);
  const auto q = idtest::read_pmf(f.b);
  json j = {{"schema_version", idtest::kReportSchemaVersion},
            {"n", p.size()},
            {"l1_distance", idtest::l1_distance(p, q)}};
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_oracle_buckets(const OracleFlags& f) {
  const auto p = idtest::read_pmf(f.a);
  const auto scheme = idtest::build_scheme(p.size(), f.eps, f.C);
  const auto P = idtest::exact_bucket_masses(scheme, p);
  json j = {{"schema_version", idtest::kReportSchemaVersion},
            {"n", p.size()},
            {"eps", f.eps},
            {"C", f.C},
            {"eps_prime", scheme.eps_prime()},
            {"base", scheme.base()},
            {"k", scheme.k()},
            {"j_star", scheme.j_star()},
            {"j_star_clamped", scheme.j_star_clamped()},
            {"P", P}};
  if (!f.against.empty()) {
    const auto q = idtest::read_pmf(f.against);
    const auto Q = idtest::exact_bucket_masses(scheme, p, q);
    j["Q"] = Q;
    j["bucket_l1"] = idtest::vector_l1(P, Q);
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// --- calibrate ------------------------------------------------------------

struct CalibrateFlags {
  CommonFlags common;
  std::size_t n = 400;
  std::vector<double> c1, c2, c3, c4, gamma;
  bool no_lemma = false;
};

int cmd_calibrate(const CalibrateFlags& f) {
  idtest::TesterConfig base = tester_config(f.common);
  idtest::LemmaConfig lemma;
  if (!f.common.config_path.empty()) {
    const json j = read_json_file(f.common.config_path);
    if (j.contains("lemma")) lemma = idtest::lemma_config_from_json(j.at("lemma"), lemma);
  }
  idtest::CalibrationTargets targets;
  targets.n = f.n;
  if (f.common.trials) targets.trials = *f.common.trials;
  targets.seed = effective_seed(f.common);
  targets.jobs = f.common.jobs;
  targets.check_lemma = !f.no_lemma;
  lemma.trials = targets.trials;
  lemma.seed = targets.seed;
  lemma.jobs = targets.jobs;
  idtest::SearchSpace space{f.c1, f.c2, f.c3, f.c4, f.gamma};
  try {
    const auto result = idtest::calibrate_constants(targets, space, base, lemma);
    json j = idtest::calibration_json(result);
    j["seed"] = targets.seed;
    j["trials"] = targets.trials;
    emit(j.dump(2) + "\n", f.common.out);
    return kExitOk;
  } catch (const idtest::CalibrationFailed& e) {
    std::cerr << "idtest: calibration failed: " << e.what() << "\n";
    return kExitNegative;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear identity tester for a known distribution against an unknown one"};
  app.require_subcommand(1);

  TestFlags test_flags;
  auto* test = app.add_subcommand("test", "test an unknown distribution against a known pmf");
  test->add_option("--pmf", test_flags.pmf, "known distribution p (pmf file)")->required();
  test->add_option("--q", test_flags.q, "'self': sample q from p itself");
  test->add_option("--q-file", test_flags.q_file, "recorded samples of q, one index in [1, n] per line");
  test->add_option("--q-pmf", test_flags.q_pmf, "sample q synthetically from this pmf");
  test->add_flag("--baseline", test_flags.baseline, "use the explicit O(n) partition tester");
  add_common(test, test_flags.common);

  GenerateFlags gen_flags;
  auto* gen = app.add_subcommand("generate", "write a (p, q) instance pair and print their l1 distance");
  gen->add_option("kind", gen_flags.kind, "identical-uniform | random-half | eps-perturbed | zipf-pair")
      ->required();
  gen->add_option("--n", gen_flags.n, "domain size")->required();
  gen->add_option("--seed", gen_flags.seed, "instance seed (generated and recorded when omitted)");
  gen->add_option("--eps", gen_flags.eps, "l1 distance for eps-perturbed");
  gen->add_option("--zipf-exponent", gen_flags.zipf_exponent, "exponent for zipf-pair");
  gen->add_option("--out", gen_flags.out, "output prefix; writes PREFIX.p.pmf and PREFIX.q.pmf");
  gen->add_option("--samples", gen_flags.samples, "also write PREFIX.q.samples with this many draws of q");
  gen->add_flag("--binary", gen_flags.binary, "write pmfs in the binary format");

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "scaling experiment over a grid of domain sizes (CSV)");
  bench->add_option("--grid", bench_flags.grid, "comma-separated domain sizes");
  bench->add_option("--log2-min", bench_flags.log2_min, "smallest grid exponent (default 10)");
  bench->add_option("--log2-max", bench_flags.log2_max, "largest grid exponent (default 18)");
  bench->add_flag("--baseline", bench_flags.baseline, "measure the explicit O(n) partition tester");
  bench->add_flag("--no-timing", bench_flags.no_timing, "write 0 in the wall_ms column");
  add_common(bench, bench_flags.common, false);

  LemmaFlags lemma_flags;
  auto* lemma = app.add_subcommand("lemma-check", "verify the coarse comparator against exact oracles");
  lemma->add_option("--n", lemma_flags.n, "domain size (<= 10^4)");
  lemma->add_option("--delta", lemma_flags.delta, "bucket-mass distance delta");
  lemma->add_option("--scheme-eps", lemma_flags.scheme_eps, "eps of the bucket scheme");
  add_common(lemma, lemma_flags.common);

  OracleFlags oracle_flags;
  auto* oracle = app.add_subcommand(
      "oracle", "exact O(n) oracles; the only subcommand that scans the whole domain");
  oracle->require_subcommand(1);
  auto* l1 = oracle->add_subcommand("l1", "exact l1 distance between two pmf files (O(n))");
  l1->add_option("a", oracle_flags.a, "first pmf")->required();
  l1->add_option("b", oracle_flags.b, "second pmf")->required();
  auto* buckets = oracle->add_subcommand("buckets", "k, j* and exact bucket masses P_j (O(n))");
  buckets->add_option("pmf", oracle_flags.a, "pmf file")->required();
  buckets->add_option("--eps", oracle_flags.eps, "distance parameter");
  buckets->add_option("--C", oracle_flags.C, "bucket constant");
  buckets->add_option("--against", oracle_flags.against, "also report Q_j for this pmf");

  CalibrateFlags cal_flags;
  auto* cal = app.add_subcommand("calibrate", "search for the smallest constants meeting the targets");
  cal->add_option("--n", cal_flags.n, "reference domain size (default 400)");
  cal->add_option("--c1", cal_flags.c1, "candidate c1 values")->delimiter(',');
  cal->add_option("--c2", cal_flags.c2, "candidate c2 values")->delimiter(',');
  cal->add_option("--c3", cal_flags.c3, "candidate c3 values")->delimiter(',');
  cal->add_option("--c4", cal_flags.c4, "candidate c4 values")->delimiter(',');
  cal->add_option("--gamma", cal_flags.gamma, "candidate gamma values")->delimiter(',');
  cal->add_flag("--no-lemma", cal_flags.no_lemma, "skip the coarse-stage lemma target");
  add_common(cal, cal_flags.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (test->parsed()) return cmd_test(test_flags);
    if (gen->parsed()) return cmd_generate(gen_flags);
    if (bench->parsed()) return cmd_bench(bench_flags);
    if (lemma->parsed()) return cmd_lemma_check(lemma_flags);
    if (l1->parsed()) return cmd_oracle_l1(oracle_flags);
    if (buckets->parsed()) return cmd_oracle_buckets(oracle_flags);
    if (cal->parsed()) return cmd_calibrate(cal_flags);
  } catch (const idtest::ParseError& e) {
    std::cerr << "idtest: " << e.what() << "\n";
    return kExitUsage;
  } catch (const idtest::Error& e) {
    std::cerr << "idtest: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "idtest: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "idtest: bad JSON value: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
