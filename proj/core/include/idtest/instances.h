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

#ifndef IDTEST_INSTANCES_H_
#define IDTEST_INSTANCES_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "idtest/distribution.h"

namespace idtest {

enum class InstanceKind {
  kIdenticalUniform,  // p = q = uniform
  kRandomHalf,        // p uniform, q uniform on a random half of the domain
  kEpsPerturbed,      // p uniform, q moves eps/2 mass from a random half to the rest
  kZipfPair,          // p Zipf, q the same Zipf weights on randomly permuted indices
};

std::string_view to_string(InstanceKind kind);
std::optional<InstanceKind> parse_instance_kind(std::string_view name);

struct InstanceParams {
  double eps = 0.5;
  double zipf_exponent = 1.0;
};

struct Instance {
  ProbabilityVector p;
  ProbabilityVector q;
};

// Throws BadParams on n < 2, odd n for random-half, or eps outside (0, 1]
// for eps-perturbed.
Instance generate_instance(InstanceKind kind, std::size_t n, std::uint64_t seed,
                           const InstanceParams& params = {});

// Seeded Fisher-Yates permutation of {0, ..., n-1}.
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

}  // namespace idtest

#endif  // IDTEST_INSTANCES_H_
