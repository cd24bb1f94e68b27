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

#ifndef IDTEST_PMF_IO_H_
#define IDTEST_PMF_IO_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "idtest/distribution.h"

namespace idtest {

// Text pmf: one decimal probability per line, the i-th data line is p_i
// (1-indexed domain). Lines whose first non-blank character is '#' and
// blank lines are ignored.
//
// Binary pmf: the 8-byte magic below followed by little-endian IEEE-754
// doubles, one per domain element.
inline constexpr std::string_view kBinaryPmfMagic{"IDTPMF\x00\x01", 8};

// Parse errors carry the 1-based physical line number.
ProbabilityVector parse_pmf_text(std::istream& in);
// Detects the binary magic, otherwise parses text.
ProbabilityVector read_pmf(const std::filesystem::path& path);

// Shortest round-trip decimal per value, so re-reading yields identical doubles.
void write_pmf_text(std::ostream& out, const ProbabilityVector& p);
void write_pmf(const std::filesystem::path& path, const ProbabilityVector& p, bool binary = false);

// Sample file: one integer index in [1, n] per line. Returned indices are
// 0-based.
std::vector<std::size_t> parse_samples(std::istream& in, std::size_t n);
std::vector<std::size_t> read_samples(const std::filesystem::path& path, std::size_t n);
void write_samples(const std::filesystem::path& path, std::span<const std::size_t> samples);

}  // namespace idtest

#endif  // IDTEST_PMF_IO_H_
