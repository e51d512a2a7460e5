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

#include "smoothgreedy/rng.h"

#include <cmath>
#include <numbers>

namespace smoothgreedy {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

uint64_t fold_key(uint64_t state, uint64_t key) {
  return mix64(state ^ mix64(key + 0x632be59bd9b4e019ULL));
}

}  // namespace

RngStream::RngStream(uint64_t seed, std::span<const uint64_t> keys)
    : master_seed_(seed), derived_seed_(mix64(seed)) {
  for (uint64_t key : keys) derived_seed_ = fold_key(derived_seed_, key);
  engine_.seed(derived_seed_);
}

RngStream::RngStream(uint64_t master, uint64_t derived, int)
    : master_seed_(master), derived_seed_(derived), engine_(derived) {}

RngStream RngStream::derive(uint64_t key) const {
  return RngStream(master_seed_, fold_key(derived_seed_, key), 0);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::uniform_index(std::size_t n) {
  // Rejection sampling keeps the draw exactly uniform.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

}  // namespace smoothgreedy
