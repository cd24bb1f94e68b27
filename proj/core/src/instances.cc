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

#include "idtest/instances.h"

#include <cmath>
#include <numeric>

#include "idtest/error.h"
#include "idtest/random.h"

namespace idtest {

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kIdenticalUniform:
      return "identical-uniform";
    case InstanceKind::kRandomHalf:
      return "random-half";
    case InstanceKind::kEpsPerturbed:
      return "eps-perturbed";
    case InstanceKind::kZipfPair:
      return "zipf-pair";
  }
  return "unknown";
}

std::optional<InstanceKind> parse_instance_kind(std::string_view name) {
  for (auto kind : {InstanceKind::kIdenticalUniform, InstanceKind::kRandomHalf,
                    InstanceKind::kEpsPerturbed, InstanceKind::kZipfPair}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

namespace {

Instance random_half(std::size_t n, std::uint64_t seed) {
  if (n % 2 != 0) throw BadParams("random-half requires an even domain size");
  const auto perm = random_permutation(n, seed);
  std::vector<double> q(n, 0.0);
  const double mass = 2.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < n / 2; ++t) q[perm[t]] = mass;
  return {uniform_pmf(n), validate_pmf(std::move(q))};
}

Instance eps_perturbed(std::size_t n, std::uint64_t seed, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw BadParams("eps-perturbed requires eps in (0, 1]");
  }
  // Donor set A loses eps/2 spread evenly; the rest gains it.
  const std::size_t donors = n / 2;
  const std::size_t receivers = n - donors;
  const double base = 1.0 / static_cast<double>(n);
  const double loss = eps / (2.0 * static_cast<double>(donors));
  const double gain = eps / (2.0 * static_cast<double>(receivers));
  if (loss > base) throw BadParams("eps-perturbed: eps too large for this domain size");
  const auto perm = random_permutation(n, seed);
  std::vector<double> q(n);
  for (std::size_t t = 0; t < n; ++t) q[perm[t]] = t < donors ? base - loss : base + gain;
  return {uniform_pmf(n), validate_pmf(std::move(q))};
}

Instance zipf_pair(std::size_t n, std::uint64_t seed, double exponent) {
  auto p = zipf_pmf(n, exponent);
  const auto perm = random_permutation(n, seed);
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[perm[i]] = p[i];
  return {std::move(p), validate_pmf(std::move(q))};
}

}  // namespace

Instance generate_instance(InstanceKind kind, std::size_t n, std::uint64_t seed,
                           const InstanceParams& params) {
  if (n < 2) throw BadParams("instance domain size must be at least 2");
  switch (kind) {
    case InstanceKind::kIdenticalUniform:
      return {uniform_pmf(n), uniform_pmf(n)};
    case InstanceKind::kRandomHalf:
      return random_half(n, seed);
    case InstanceKind::kEpsPerturbed:
      return eps_perturbed(n, seed, params.eps);
    case InstanceKind::kZipfPair:
      return zipf_pair(n, seed, params.zipf_exponent);
  }
  throw BadParams("unknown instance kind");
}

}  // namespace idtest
