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

#ifndef SMOOTHGREEDY_OBJECTIVES_H_
#define SMOOTHGREEDY_OBJECTIVES_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace smoothgreedy {

using Element = int;
using ElementSet = std::vector<Element>;
using ParamVector = Eigen::VectorXd;

// Validates `set` against a ground set of size n: indices in range and no
// repeats. Throws InputError.
void check_element_set(std::span<const Element> set, int n);

// Incremental marginal-gain state owned by a single greedy run. Starts at
// the empty set; add() must only be called with elements not yet added.
class GainState {
 public:
  virtual ~GainState() = default;
  virtual double gain(Element v) const = 0;
  virtual void add(Element v) = 0;
  virtual bool contains(Element v) const = 0;
};

// A parameterized, normalized, monotone submodular set function f(X, theta).
//
// The public entry points validate their arguments (element indices and the
// parameter dimension) and forward to the unchecked hooks implemented by
// each objective. Objectives are immutable after construction and safe to
// share between threads.
class SubmodularObjective {
 public:
  virtual ~SubmodularObjective() = default;

  virtual std::string kind() const = 0;
  // Ground set size n.
  virtual int size() const = 0;
  // Dimension of theta.
  virtual int param_dim() const = 0;

  // Throws ConfigError on a dimension mismatch and InputError when theta
  // leaves the domain on which the objective is monotone submodular.
  virtual void validate_params(const ParamVector& theta) const;

  double eval(std::span<const Element> set, const ParamVector& theta) const;
  double marginal_gain(Element v, std::span<const Element> set,
                       const ParamVector& theta) const;
  ParamVector grad_theta(std::span<const Element> set,
                         const ParamVector& theta) const;
  // out += scale * grad_theta(set, theta), touching only nonzero entries.
  void accumulate_grad(std::span<const Element> set, const ParamVector& theta,
                       double scale, Eigen::Ref<Eigen::VectorXd> out) const;

  // Fresh incremental state at the empty set. `theta` must outlive it.
  virtual std::unique_ptr<GainState> start_run(
      const ParamVector& theta) const;

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  std::string label(Element v) const;

 protected:
  void check_dimension(const ParamVector& theta) const;

  virtual double value(std::span<const Element> set,
                       const ParamVector& theta) const = 0;
  virtual void add_grad(std::span<const Element> set, const ParamVector& theta,
                        double scale,
                        Eigen::Ref<Eigen::VectorXd> out) const = 0;

 private:
  std::vector<std::string> labels_;
};

// Expected number of influenced targets in a bipartite item/target graph,
//   f(X, theta) = sum_t (1 - prod_{v in X} (1 - theta[v, t])),
// with theta stored row-major as an n x |T| matrix of link probabilities.
class BipartiteInfluence final : public SubmodularObjective {
 public:
  BipartiteInfluence(int items, int targets);

  std::string kind() const override { return "bipartite_influence"; }
  int size() const override { return items_; }
  int param_dim() const override { return items_ * targets_; }
  int targets() const { return targets_; }
  int index(Element v, int t) const { return v * targets_ + t; }

  void validate_params(const ParamVector& theta) const override;
  std::unique_ptr<GainState> start_run(
      const ParamVector& theta) const override;

 protected:
  double value(std::span<const Element> set,
               const ParamVector& theta) const override;
  void add_grad(std::span<const Element> set, const ParamVector& theta,
                double scale, Eigen::Ref<Eigen::VectorXd> out) const override;

 private:
  int items_;
  int targets_;
};

// f(X, w) = sum of w_i over the union of the cover sets of X. Theta is the
// vector of universe weights.
class WeightedCoverage final : public SubmodularObjective {
 public:
  WeightedCoverage(int universe, std::vector<std::vector<int>> cover_sets,
                   ParamVector default_weights);

  std::string kind() const override { return "weighted_coverage"; }
  int size() const override { return static_cast<int>(cover_sets_.size()); }
  int param_dim() const override { return universe_; }
  int universe() const { return universe_; }
  const std::vector<std::vector<int>>& cover_sets() const {
    return cover_sets_;
  }
  const ParamVector& default_weights() const { return default_weights_; }

  void validate_params(const ParamVector& theta) const override;
  std::unique_ptr<GainState> start_run(
      const ParamVector& theta) const override;

 protected:
  double value(std::span<const Element> set,
               const ParamVector& theta) const override;
  void add_grad(std::span<const Element> set, const ParamVector& theta,
                double scale, Eigen::Ref<Eigen::VectorXd> out) const override;

 private:
  int universe_;
  std::vector<std::vector<int>> cover_sets_;
  ParamVector default_weights_;
};

// Deep submodular function with one hidden layer:
//   f(X, theta) = sum_h a_h * phi(sum_{v in X} W[h, v]),
// phi(x) = sigmoid(x) - 1/2. Theta stores W row-major (H x n) followed by
// the H output weights a. Monotone submodular whenever W, a >= 0.
class DeepSubmodular final : public SubmodularObjective {
 public:
  DeepSubmodular(int items, int hidden);

  std::string kind() const override { return "deep_submodular"; }
  int size() const override { return items_; }
  int param_dim() const override { return hidden_ * (items_ + 1); }
  int hidden() const { return hidden_; }
  int weight_index(int h, Element v) const { return h * items_ + v; }
  int output_index(int h) const { return hidden_ * items_ + h; }

  static double activation(double x);
  static double activation_derivative(double x);

  void validate_params(const ParamVector& theta) const override;
  std::unique_ptr<GainState> start_run(
      const ParamVector& theta) const override;

 protected:
  double value(std::span<const Element> set,
               const ParamVector& theta) const override;
  void add_grad(std::span<const Element> set, const ParamVector& theta,
                double scale, Eigen::Ref<Eigen::VectorXd> out) const override;

 private:
  int items_;
  int hidden_;
};

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_OBJECTIVES_H_
