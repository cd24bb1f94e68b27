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

#include "idtest/sample_stream.h"

#include "idtest/error.h"

namespace idtest {

AliasTable::AliasTable(const ProbabilityVector& p) : accept_(p.size()), alias_(p.size()) {
  const std::size_t n = p.size();
  std::vector<double> scaled(n);
  std::vector<std::size_t> small;
  std::vector<std::size_t> large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = p[i] * static_cast<double>(n);
    alias_[i] = i;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    accept_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers differ from 1 only by rounding.
  for (std::size_t i : large) accept_[i] = 1.0;
  for (std::size_t i : small) accept_[i] = 1.0;
}

std::vector<double> AliasTable::induced_pmf() const {
  const double column = 1.0 / static_cast<double>(accept_.size());
  std::vector<double> pmf(accept_.size(), 0.0);
  for (std::size_t i = 0; i < accept_.size(); ++i) {
    pmf[i] += column * accept_[i];
    pmf[alias_[i]] += column * (1.0 - accept_[i]);
  }
  return pmf;
}

AliasSampler build_sampler(const ProbabilityVector& p, std::uint64_t seed) {
  return AliasSampler(std::make_shared<const AliasTable>(p), seed);
}

RecordedSampleStream::RecordedSampleStream(std::size_t domain_size,
                                           std::vector<std::size_t> samples)
    : domain_size_(domain_size), samples_(std::move(samples)) {
  for (std::size_t s : samples_) {
    if (s >= domain_size_) throw IndexOutOfRange(s, domain_size_ - 1);
  }
}

std::size_t RecordedSampleStream::next() {
  if (position_ == samples_.size()) throw SampleExhausted(samples_.size());
  return samples_[position_++];
}

}  // namespace idtest
