// Copyright 2026 The smoothgreedy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SMOOTHGREEDY_RNG_H_
#define SMOOTHGREEDY_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace smoothgreedy {

// Mixes a 64-bit word (splitmix64 finalizer).
uint64_t mix64(uint64_t x);

// A reproducible random stream derived from a master seed and a path of
// keys, e.g. (seed) -> (epoch, batch, instance, trial). Identical
// derivation paths yield identical streams. Conversions to doubles and
// indices are done here rather than through <random> distributions so that
// streams are bit-identical across standard library implementations.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, std::span<const uint64_t> keys = {});
  RngStream(uint64_t seed, std::initializer_list<uint64_t> keys)
      : RngStream(seed, std::span<const uint64_t>(keys.begin(), keys.size())) {}

  // Child stream keyed by `key`, independent of this stream's position.
  RngStream derive(uint64_t key) const;

  uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in {0, ..., n - 1}; n must be positive.
  std::size_t uniform_index(std::size_t n);
  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller.
  double normal();

  uint64_t master_seed() const { return master_seed_; }
  uint64_t derived_seed() const { return derived_seed_; }

 private:
  RngStream(uint64_t master, uint64_t derived, int);

  uint64_t master_seed_;
  uint64_t derived_seed_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_RNG_H_
