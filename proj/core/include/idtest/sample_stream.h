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

#ifndef IDTEST_SAMPLE_STREAM_H_
#define IDTEST_SAMPLE_STREAM_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "idtest/distribution.h"
#include "idtest/random.h"

namespace idtest {

// Sample access to an unknown distribution q on {0, ..., n-1}. The tester
// sees only draws; it never sees q's probabilities. Single consumer.
class SampleStream {
 public:
  virtual ~SampleStream() = default;

  virtual std::size_t domain_size() const = 0;

  std::size_t draw() {
    const std::size_t i = next();
    ++draws_;
    return i;
  }

  // Number of successful draws made through this stream.
  std::uint64_t draws() const { return draws_; }

 protected:
  virtual std::size_t next() = 0;

 private:
  std::uint64_t draws_ = 0;
};

// Walker/Vose alias table. O(n) to build, O(1) per draw.
class AliasTable {
 public:
  explicit AliasTable(const ProbabilityVector& p);

  std::size_t size() const { return accept_.size(); }

  std::size_t sample(Rng& rng) const {
    const auto column = static_cast<std::size_t>(rng.uniform_index(accept_.size()));
    return rng.uniform01() < accept_[column] ? column : alias_[column];
  }

  // Probability that sample() returns i, reconstructed from the tables.
  // O(n); used to check the construction.
  std::vector<double> induced_pmf() const;

 private:
  std::vector<double> accept_;
  std::vector<std::size_t> alias_;
};

// Synthetic i.i.d. source backed by a shared alias table. Reseeding is cheap,
// so many independent streams can share one O(n) construction.
class AliasSampler final : public SampleStream {
 public:
  AliasSampler(std::shared_ptr<const AliasTable> table, std::uint64_t seed)
      : table_(std::move(table)), rng_(seed) {}

  std::size_t domain_size() const override { return table_->size(); }
  std::uint64_t seed() const { return rng_.seed(); }
  const std::shared_ptr<const AliasTable>& table() const { return table_; }

  AliasSampler reseeded(std::uint64_t seed) const { return AliasSampler(table_, seed); }

 protected:
  std::size_t next() override { return table_->sample(rng_); }

 private:
  std::shared_ptr<const AliasTable> table_;
  Rng rng_;
};

AliasSampler build_sampler(const ProbabilityVector& p, std::uint64_t seed);

// Replays a fixed sequence of recorded samples (0-based indices). Throws
// SampleExhausted once the recording runs out.
class RecordedSampleStream final : public SampleStream {
 public:
  RecordedSampleStream(std::size_t domain_size, std::vector<std::size_t> samples);

  std::size_t domain_size() const override { return domain_size_; }
  std::size_t remaining() const { return samples_.size() - position_; }

 protected:
  std::size_t next() override;

 private:
  std::size_t domain_size_;
  std::vector<std::size_t> samples_;
  std::size_t position_ = 0;
};

}  // namespace idtest

#endif  // IDTEST_SAMPLE_STREAM_H_
