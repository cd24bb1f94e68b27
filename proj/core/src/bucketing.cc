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

#include "idtest/bucketing.h"

#include <cmath>
#include <string>

#include "idtest/error.h"

namespace idtest {

namespace {
constexpr double kMaxBuckets = 5e7;
}

BucketScheme build_scheme(std::size_t n, double eps, double C) {
  if (n < 2) throw BadParams("bucket scheme needs n >= 2");
  if (!(eps > 0.0 && eps <= 2.0)) throw BadParams("eps must lie in (0, 2]");
  if (!(C >= 1.0) || !std::isfinite(C)) throw BadParams("C must be a finite value >= 1");

  BucketScheme s;
  s.n_ = n;
  s.eps_ = eps;
  s.C_ = C;
  s.eps_prime_ = eps / C;
  s.log_ratio_ = std::log1p(s.eps_prime_);

  const double nd = static_cast<double>(n);
  const double base = eps / (2.0 * nd);
  const double k_real = std::ceil(std::log(2.0 * nd / eps) / s.log_ratio_);
  if (!(k_real < kMaxBuckets)) {
    throw BadParams("bucket count " + std::to_string(k_real) + " is too large");
  }
  auto k = static_cast<std::size_t>(k_real);
  const double ratio = 1.0 + s.eps_prime_;
  s.upper_.reserve(k + 2);
  for (std::size_t j = 0; j <= k; ++j) s.upper_.push_back(base * std::pow(ratio, static_cast<double>(j)));
  // Rounding can leave the top boundary a hair under 1 when 2n/eps is an
  // exact power of the ratio.
  while (s.upper_.back() < 1.0) {
    s.upper_.push_back(base * std::pow(ratio, static_cast<double>(s.upper_.size())));
  }

  const double heavy = 1.0 / std::sqrt(nd);
  s.j_star_clamped_ = !(heavy > base && heavy <= s.upper_.back());
  s.j_star_ = s.index_of(heavy);
  return s;
}

double bucket_upper(const BucketScheme& scheme, std::size_t j) {
  if (j > scheme.k()) throw IndexOutOfRange(j, scheme.k());
  return scheme.upper_bounds()[j];
}

std::vector<double> exact_bucket_masses(const BucketScheme& scheme, const ProbabilityVector& p) {
  return exact_bucket_masses(scheme, p, p);
}

std::vector<double> exact_bucket_masses(const BucketScheme& scheme, const ProbabilityVector& p,
                                        const ProbabilityVector& weights) {
  if (p.size() != scheme.n()) throw DomainMismatch(scheme.n(), p.size());
  if (weights.size() != p.size()) throw DomainMismatch(p.size(), weights.size());
  std::vector<long double> acc(scheme.num_buckets(), 0.0L);
  for (std::size_t i = 0; i < p.size(); ++i) acc[scheme.index_of(p[i])] += weights[i];
  return {acc.begin(), acc.end()};
}

double vector_l1(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  long double total = 0;
  for (std::size_t j = 0; j < a.size(); ++j) total += std::fabs(a[j] - b[j]);
  return static_cast<double>(total);
}

}  // namespace idtest
