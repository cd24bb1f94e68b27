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

// Acceptance runner: prints one PASS/FAIL line per acceptance criterion and
// exits nonzero if any criterion fails.
//
//   idtest_acceptance --cli path/to/idtest [--jobs N] [--only 1,3]

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idtest/error.h"
#include "idtest/harness.h"
#include "idtest/instances.h"
#include "idtest/report.h"
#include "idtest/tester.h"
#include "property_suite.h"

namespace {

using namespace idtest;

constexpr std::uint64_t kTrials = 300;
constexpr double kContractLo = 0.60;

struct Outcome {
  bool passed = false;
  std::string summary;
};

// Audit violations collected from criteria 1-4 for criterion 5.
struct AuditLog {
  std::uint64_t runs = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> notes;
  bool covered_contracts = false, covered_lemma = false, covered_scaling = false;
};

std::string fmt_double(double x, int precision = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

TrialReport contract_run(InstanceKind kind, std::size_t n, std::uint64_t seed, unsigned jobs,
                         AuditLog& audit) {
  const TesterConfig config = TesterConfig::calibrated();
  InstanceParams params;
  params.eps = config.eps;
  const InstanceSpec instance = make_instance(kind, n, derive_seed(seed, StreamTag::kInstance, n), params);
  TrialReport r = run_trials(instance, config, kTrials, seed, jobs);
  audit.runs += r.trials;
  audit.violations += r.audit_violations;
  return r;
}

Outcome completeness(unsigned jobs, AuditLog& audit) {
  Outcome o{true, ""};
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t n : {400, 4096}) {
    const TrialReport r = contract_run(InstanceKind::kIdenticalUniform, n, 101, jobs, audit);
    o.passed = o.passed && r.accept_wilson.lo >= kContractLo;
    o.summary += "n=" + std::to_string(n) + " accept " + std::to_string(r.accepts) + "/" +
                 std::to_string(r.trials) + " (wilson lo " + fmt_double(r.accept_wilson.lo) + ") ";
  }
  audit.covered_contracts = true;
  o.summary += "[" + fmt_double(seconds_since(start), 1) + "s]";
  return o;
}

Outcome soundness(unsigned jobs, AuditLog& audit) {
  Outcome o{true, ""};
  const auto start = std::chrono::steady_clock::now();
  for (InstanceKind kind : {InstanceKind::kRandomHalf, InstanceKind::kEpsPerturbed}) {
    for (std::size_t n : {400, 4096}) {
      const TrialReport r = contract_run(kind, n, 202, jobs, audit);
      o.passed = o.passed && r.reject_wilson.lo >= kContractLo;
      o.summary += std::string(to_string(kind)) + " n=" + std::to_string(n) + " reject " +
                   std::to_string(r.rejects()) + "/" + std::to_string(r.trials) + " (lo " +
                   fmt_double(r.reject_wilson.lo) + ") ";
    }
  }
  o.summary += "[" + fmt_double(seconds_since(start), 1) + "s]";
  return o;
}

Outcome lemma(unsigned jobs, AuditLog& audit) {
  const auto start = std::chrono::steady_clock::now();
  LemmaConfig config;
  config.n = 400;
  config.delta = 0.1;
  config.trials = kTrials;
  config.seed = 303;
  config.jobs = jobs;
  config.min_wilson_lo = 0.85;
  const LemmaReport report = lemma_check(config);
  Outcome o{report.passed, "k=" + std::to_string(report.k) + " j*=" + std::to_string(report.j_star) + " "};
  for (const auto& f : report.families) {
    o.summary += f.name + " " + fmt_double(f.rate, 2);
    if (f.passed) o.summary += " (lo " + fmt_double(f.wilson.lo) + ")";
    o.summary += "; ";
    audit.runs += f.trials;
    audit.violations += f.audit_violations;
  }
  audit.covered_lemma = true;
  o.summary += "[" + fmt_double(seconds_since(start), 1) + "s]";
  return o;
}

Outcome sublinearity(AuditLog& audit) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::size_t> grid;
  for (unsigned e = 10; e <= 18; ++e) grid.push_back(std::size_t{1} << e);
  constexpr double kEps = 2.0;
  TesterConfig config = TesterConfig::calibrated();
  config.eps = kEps;
  Outcome o{false, "eps=2 "};
  try {
    const ScalingTable fast = scaling_experiment(grid, kEps, config, 404, Pipeline::kEfficient);
    const ScalingTable slow = scaling_experiment(grid, kEps, config, 404, Pipeline::kBaseline);
    audit.runs += fast.rows.size() + slow.rows.size();
    const double a = fast.slope.value_or(0), b = slow.slope.value_or(0);
    o.passed = a >= 0.45 && a <= 0.65 && b >= 0.95;
    o.summary += "efficient slope " + fmt_double(a) + " (want [0.45, 0.65]), baseline slope " +
                 fmt_double(b) + " (want >= 0.95) ";
  } catch (const BudgetExceeded& e) {
    ++audit.violations;
    audit.notes.push_back(e.what());
    o.summary += std::string("audit violation: ") + e.what() + " ";
  }
  audit.covered_scaling = true;
  o.summary += "[" + fmt_double(seconds_since(start), 1) + "s]";
  return o;
}

Outcome no_linear_scan(const AuditLog& audit) {
  Outcome o;
  const bool covered = audit.covered_contracts && audit.covered_lemma && audit.covered_scaling;
  o.passed = covered && audit.violations == 0;
  o.summary = std::to_string(audit.violations) + " violations over " + std::to_string(audit.runs) + " audited runs";
  if (!covered) o.summary += " (criteria 1, 3 and 4 must run first)";
  for (const auto& note : audit.notes) o.summary += "; " + note;
  return o;
}

Outcome oracle_suite() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{true, ""};
  for (const auto& r : props::run_all(606)) {
    o.passed = o.passed && r.passed;
    o.summary += r.name + (r.passed ? " ok" : " FAILED") + " (" + r.detail + "); ";
  }
  o.summary += "[" + fmt_double(seconds_since(start), 1) + "s]";
  return o;
}

struct Captured {
  int exit_code = -1;
  std::string out;
};

Captured run_command(const std::string& cmd) {
  Captured c;
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (pipe == nullptr) return c;
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  c.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Snapshot of every regular file under dir, keyed by name.
std::string directory_digest(const std::filesystem::path& dir) {
  std::set<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) names.insert(entry.path().filename().string());
  }
  std::string digest;
  for (const auto& name : names) digest += name + "\n" + slurp(dir / name) + "\n";
  return digest;
}

Outcome determinism(const std::string& cli) {
  if (cli.empty() || !std::filesystem::exists(cli)) return {false, "CLI binary not found: '" + cli + "'"};
  const auto start = std::chrono::steady_clock::now();
  const auto root = std::filesystem::temp_directory_path() /
                    ("idtest-acceptance-" + std::to_string(::getpid()));
  std::vector<std::string> outputs[2];
  std::vector<int> codes[2];
  std::string digests[2];
  std::vector<std::string> commands;
  for (int round = 0; round < 2; ++round) {
    const auto dir = root / "work";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string d = dir.string();
    commands = {
        "generate eps-perturbed --n 400 --seed 7 --eps 0.5 --samples 5000 --out " + d + "/ep",
        "generate zipf-pair --n 500 --seed 3 --zipf-exponent 1.2 --binary --out " + d + "/zp",
        "test --pmf " + d + "/ep.p.pmf --q-pmf " + d + "/ep.q.pmf --seed 11",
        "test --pmf " + d + "/ep.p.pmf --q self --trials 5 --seed 12",
        "test --pmf " + d + "/ep.p.pmf --q-file " + d + "/ep.q.samples --seed 13",
        "test --pmf " + d + "/zp.p.pmf --q-pmf " + d + "/zp.q.pmf --baseline --seed 14",
        "bench --grid 256,1024,4096 --seed 5 --no-timing",
        "oracle buckets " + d + "/zp.p.pmf --against " + d + "/zp.q.pmf --eps 0.5",
        "lemma-check --n 100 --trials 30 --seed 2",
        "calibrate --no-lemma --n 100 --trials 30 --c4 1,2 --gamma 1 --seed 9 --out " + d + "/cal.json",
    };
    for (const auto& args : commands) {
      const Captured c = run_command(cli + " " + args);
      outputs[round].push_back(c.out);
      codes[round].push_back(c.exit_code);
    }
    digests[round] = directory_digest(dir);
  }
  std::filesystem::remove_all(root);

  Outcome o{true, ""};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const bool same = outputs[0][i] == outputs[1][i] && codes[0][i] == codes[1][i];
    const bool sane = codes[0][i] == 0 || codes[0][i] == 1;
    if (!same || !sane) {
      o.passed = false;
      o.summary += "'" + commands[i] + "' " + (same ? "exit " + std::to_string(codes[0][i]) : "differs") + "; ";
    }
  }
  if (digests[0] != digests[1]) {
    o.passed = false;
    o.summary += "written files differ; ";
  }
  o.summary += std::to_string(commands.size()) + " invocations run twice [" +
               fmt_double(seconds_since(start), 1) + "s]";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idtest acceptance suite"};
  std::string cli;
  unsigned jobs = 1;
  std::vector<int> only;
  app.add_option("--cli", cli, "path to the idtest binary");
  app.add_option("--jobs", jobs, "worker threads for trial execution")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const auto wanted = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
  AuditLog audit;
  bool all = true;
  const auto report = [&](int c, const char* title, const Outcome& o) {
    all = all && o.passed;
    std::cout << "criterion " << c << " [" << title << "]: " << (o.passed ? "PASS" : "FAIL") << "  "
              << o.summary << std::endl;
  };

  if (wanted(1)) report(1, "completeness", completeness(jobs, audit));
  if (wanted(2)) report(2, "soundness", soundness(jobs, audit));
  if (wanted(3)) report(3, "coarse lemma", lemma(jobs, audit));
  if (wanted(4)) report(4, "sublinearity", sublinearity(audit));
  if (wanted(5)) report(5, "no linear scan", no_linear_scan(audit));
  if (wanted(6)) report(6, "oracle equivalence", oracle_suite());
  if (wanted(7)) report(7, "determinism", determinism(cli));
  return all ? 0 : 1;
}
