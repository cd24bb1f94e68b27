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

#ifndef IDTEST_RANDOM_H_
#define IDTEST_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace idtest {

__extension__ using uint128 = unsigned __int128;

// Well-known stream tags for deriving per-phase sub-seeds from a master seed.
enum class StreamTag : std::uint64_t {
  kQSource = 1,
  kUniformProbe = 2,
  kTrial = 3,
  kInstance = 4,
  kAmplification = 5,
};

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Deterministic, statistically independent sub-seed for (master, tag, index).
std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::uint64_t index = 0);

// Seedable generator. Integer and real mappings are implemented here rather
// than with <random> distributions so draw sequences are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, bound), bound >= 1. Lemire's multiply-shift with rejection.
  std::uint64_t uniform_index(std::uint64_t bound) {
    uint128 m = static_cast<uint128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<uint128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace idtest

#endif  // IDTEST_RANDOM_H_
