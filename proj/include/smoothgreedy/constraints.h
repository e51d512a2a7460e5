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

#ifndef SMOOTHGREEDY_CONSTRAINTS_H_
#define SMOOTHGREEDY_CONSTRAINTS_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothgreedy/objectives.h"

namespace smoothgreedy {

// A downward-closed feasibility family (V, I) over elements 0..n-1.
class ConstraintSystem {
 public:
  virtual ~ConstraintSystem() = default;

  virtual std::string kind() const = 0;
  virtual int size() const = 0;
  virtual bool is_feasible(std::span<const Element> set) const = 0;
  // Maximum feasible set size.
  virtual int rank() const = 0;
  // Extensibility parameter; 1 for matroids.
  virtual int kappa() const = 0;

  // Elements v not in `set` with set + v feasible, in ascending order.
  // Throws InputError when `set` is malformed or infeasible.
  std::vector<Element> addable(std::span<const Element> set) const;
  bool is_maximal(std::span<const Element> set) const;

 protected:
  // Called with a validated, feasible set and its membership mask.
  virtual std::vector<Element> addable_unchecked(
      std::span<const Element> set, const std::vector<char>& member) const;
};

class CardinalityConstraint final : public ConstraintSystem {
 public:
  CardinalityConstraint(int n, int k);

  std::string kind() const override { return "cardinality"; }
  int size() const override { return n_; }
  bool is_feasible(std::span<const Element> set) const override;
  int rank() const override;
  int kappa() const override { return 1; }
  int k() const { return k_; }

 protected:
  std::vector<Element> addable_unchecked(
      std::span<const Element> set,
      const std::vector<char>& member) const override;

 private:
  int n_;
  int k_;
};

// Each element belongs to one block; a set is feasible when no block holds
// more than its capacity.
class PartitionMatroid final : public ConstraintSystem {
 public:
  PartitionMatroid(std::vector<int> block_of, std::vector<int> capacities);

  std::string kind() const override { return "partition"; }
  int size() const override { return static_cast<int>(block_of_.size()); }
  bool is_feasible(std::span<const Element> set) const override;
  int rank() const override;
  int kappa() const override { return 1; }

  const std::vector<int>& block_of() const { return block_of_; }
  const std::vector<int>& capacities() const { return capacities_; }
  int num_blocks() const { return static_cast<int>(capacities_.size()); }

 protected:
  std::vector<Element> addable_unchecked(
      std::span<const Element> set,
      const std::vector<char>& member) const override;

 private:
  std::vector<int> block_of_;
  std::vector<int> capacities_;
};

// User-defined kappa-extensible system given by a feasibility predicate.
// Kappa is declared metadata and is not verified. The rank is computed by
// exhaustive search when not declared, which requires n <= 20.
class ExtensibleSystem final : public ConstraintSystem {
 public:
  using Predicate = std::function<bool(std::span<const Element>)>;

  ExtensibleSystem(int n, Predicate feasible, int kappa,
                   std::optional<int> rank = std::nullopt);

  std::string kind() const override { return "extensible"; }
  int size() const override { return n_; }
  bool is_feasible(std::span<const Element> set) const override;
  int rank() const override { return rank_; }
  int kappa() const override { return kappa_; }

 private:
  int n_;
  Predicate feasible_;
  int kappa_;
  int rank_;
};

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_CONSTRAINTS_H_
