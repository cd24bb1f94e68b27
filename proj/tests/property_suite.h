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

// Randomized property checks shared by the unit tests and the acceptance
// runner. Each check compares a library routine against an independent
// brute-force oracle over many random inputs.

#ifndef IDTEST_TESTS_PROPERTY_SUITE_H_
#define IDTEST_TESTS_PROPERTY_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "idtest/distribution.h"

namespace idtest::props {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Test pmfs on n <= 1000 covering flat, skewed, sparse and random shapes.
std::vector<std::pair<std::string, ProbabilityVector>> small_test_pmfs(std::uint64_t seed);

PropertyResult bucket_partition(std::uint64_t seed, std::uint64_t draws_per_scheme);
PropertyResult exact_masses_vs_brute_force(std::uint64_t seed);
PropertyResult collision_unbiasedness(std::uint64_t seed, std::uint64_t trials);
PropertyResult heavy_mass_underestimates(std::uint64_t seed, std::uint64_t seeds);
PropertyResult probe_unbiasedness(std::uint64_t seed, std::uint64_t trials);

std::vector<PropertyResult> run_all(std::uint64_t seed);

}  // namespace idtest::props

#endif  // IDTEST_TESTS_PROPERTY_SUITE_H_
