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

#include "smoothgreedy/constraints.h"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

std::vector<Element> ConstraintSystem::addable(
    std::span<const Element> set) const {
  check_element_set(set, size());
  if (!is_feasible(set)) throw InputError(kind() + ": set is not feasible");
  std::vector<char> member(size(), 0);
  for (Element v : set) member[v] = 1;
  return addable_unchecked(set, member);
}

bool ConstraintSystem::is_maximal(std::span<const Element> set) const {
  return addable(set).empty();
}

std::vector<Element> ConstraintSystem::addable_unchecked(
    std::span<const Element> set, const std::vector<char>& member) const {
  std::vector<Element> out;
  ElementSet with(set.begin(), set.end());
  with.push_back(0);
  for (Element v = 0; v < size(); ++v) {
    if (member[v]) continue;
    with.back() = v;
    if (is_feasible(with)) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

CardinalityConstraint::CardinalityConstraint(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw ConfigError("cardinality: ground set must be nonempty");
  if (k < 1) throw ConfigError("cardinality: k must be at least 1");
}

bool CardinalityConstraint::is_feasible(std::span<const Element> set) const {
  return static_cast<int>(set.size()) <= k_;
}

int CardinalityConstraint::rank() const { return std::min(k_, n_); }

std::vector<Element> CardinalityConstraint::addable_unchecked(
    std::span<const Element> set, const std::vector<char>& member) const {
  std::vector<Element> out;
  if (static_cast<int>(set.size()) >= k_) return out;
  for (Element v = 0; v < n_; ++v) {
    if (!member[v]) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

PartitionMatroid::PartitionMatroid(std::vector<int> block_of,
                                   std::vector<int> capacities)
    : block_of_(std::move(block_of)), capacities_(std::move(capacities)) {
  if (block_of_.empty()) throw ConfigError("partition: empty ground set");
  if (capacities_.empty()) throw ConfigError("partition: no blocks");
  for (int b : block_of_) {
    if (b < 0 || b >= num_blocks()) {
      throw ConfigError("partition: block index " + std::to_string(b) +
                        " has no capacity");
    }
  }
  for (int cap : capacities_) {
    if (cap < 0) throw ConfigError("partition: negative capacity");
  }
}

bool PartitionMatroid::is_feasible(std::span<const Element> set) const {
  std::vector<int> counts(num_blocks(), 0);
  for (Element v : set) {
    if (++counts[block_of_[v]] > capacities_[block_of_[v]]) return false;
  }
  return true;
}

int PartitionMatroid::rank() const {
  std::vector<int> block_sizes(num_blocks(), 0);
  for (int b : block_of_) ++block_sizes[b];
  int total = 0;
  for (int b = 0; b < num_blocks(); ++b) {
    total += std::min(capacities_[b], block_sizes[b]);
  }
  return total;
}

std::vector<Element> PartitionMatroid::addable_unchecked(
    std::span<const Element> set, const std::vector<char>& member) const {
  std::vector<int> counts(num_blocks(), 0);
  for (Element v : set) ++counts[block_of_[v]];
  std::vector<Element> out;
  for (Element v = 0; v < size(); ++v) {
    if (!member[v] && counts[block_of_[v]] < capacities_[block_of_[v]]) {
      out.push_back(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

ExtensibleSystem::ExtensibleSystem(int n, Predicate feasible, int kappa,
                                   std::optional<int> rank)
    : n_(n), feasible_(std::move(feasible)), kappa_(kappa), rank_(0) {
  if (n < 1) throw ConfigError("extensible: ground set must be nonempty");
  if (kappa < 1) throw ConfigError("extensible: kappa must be at least 1");
  if (!feasible_(std::span<const Element>())) {
    throw ConfigError("extensible: the empty set must be feasible");
  }
  if (rank) {
    rank_ = *rank;
    return;
  }
  if (n > 20) {
    throw CapExceeded("extensible: rank must be declared when n > 20");
  }
  ElementSet set;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int bits = std::popcount(mask);
    if (bits <= rank_) continue;
    set.clear();
    for (int v = 0; v < n; ++v) {
      if (mask & (1u << v)) set.push_back(v);
    }
    if (feasible_(set)) rank_ = bits;
  }
}

bool ExtensibleSystem::is_feasible(std::span<const Element> set) const {
  return feasible_(set);
}

}  // namespace smoothgreedy
