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

#include "idtest/pmf_io.h"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "idtest/error.h"

namespace idtest {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool skippable(std::string_view line) { return line.empty() || line.front() == '#'; }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

ProbabilityVector parse_pmf_binary(std::string_view bytes) {
  bytes.remove_prefix(kBinaryPmfMagic.size());
  if (bytes.size() % sizeof(double) != 0) {
    throw Error("binary pmf payload is not a whole number of 64-bit values");
  }
  std::vector<double> probs(bytes.size() / sizeof(double));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      word |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + b])) << (8 * b);
    }
    probs[i] = std::bit_cast<double>(word);
  }
  return validate_pmf(std::move(probs));
}

}  // namespace

ProbabilityVector parse_pmf_text(std::istream& in) {
  std::vector<double> probs;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (skippable(line)) continue;
    double value = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw ParseError(line_no, "malformed probability '" + std::string(line) + "'");
    }
    probs.push_back(value);
  }
  return validate_pmf(std::move(probs));
}

ProbabilityVector read_pmf(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() >= kBinaryPmfMagic.size() &&
      std::string_view(bytes).substr(0, kBinaryPmfMagic.size()) == kBinaryPmfMagic) {
    return parse_pmf_binary(bytes);
  }
  std::istringstream text(std::move(bytes));
  return parse_pmf_text(text);
}

void write_pmf_text(std::ostream& out, const ProbabilityVector& p) {
  char buf[64];
  for (double x : p.probs()) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    out.write(buf, ptr - buf);
    out.put('\n');
  }
}

void write_pmf(const std::filesystem::path& path, const ProbabilityVector& p, bool binary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  if (!binary) {
    write_pmf_text(out, p);
  } else {
    out.write(kBinaryPmfMagic.data(), static_cast<std::streamsize>(kBinaryPmfMagic.size()));
    for (double x : p.probs()) {
      const auto word = std::bit_cast<std::uint64_t>(x);
      char le[8];
      for (std::size_t b = 0; b < 8; ++b) le[b] = static_cast<char>((word >> (8 * b)) & 0xff);
      out.write(le, 8);
    }
  }
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<std::size_t> parse_samples(std::istream& in, std::size_t n) {
  std::vector<std::size_t> samples;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (skippable(line)) continue;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw ParseError(line_no, "malformed sample '" + std::string(line) + "'");
    }
    if (value < 1 || value > n) {
      throw ParseError(line_no, "sample " + std::to_string(value) + " outside [1, " +
                                    std::to_string(n) + "]");
    }
    samples.push_back(value - 1);
  }
  return samples;
}

std::vector<std::size_t> read_samples(const std::filesystem::path& path, std::size_t n) {
  auto in = open_input(path);
  return parse_samples(in, n);
}

void write_samples(const std::filesystem::path& path, std::span<const std::size_t> samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  for (std::size_t s : samples) out << (s + 1) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace idtest
