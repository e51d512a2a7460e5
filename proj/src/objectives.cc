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

#include "smoothgreedy/objectives.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

void check_element_set(std::span<const Element> set, int n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Element v : set) {
    if (v < 0 || v >= n) {
      throw InputError("element index " + std::to_string(v) +
                       " outside ground set of size " + std::to_string(n));
    }
    if (seen[v]) {
      throw InputError("element " + std::to_string(v) + " repeated in set");
    }
    seen[v] = 1;
  }
}

namespace {

// Fallback used by objectives without an incremental formula.
class DifferenceGainState final : public GainState {
 public:
  DifferenceGainState(const SubmodularObjective& obj, const ParamVector& theta)
      : obj_(obj), theta_(theta), member_(obj.size(), 0) {}

  double gain(Element v) const override {
    if (member_[v]) return 0.0;
    ElementSet with(set_);
    with.push_back(v);
    return obj_.eval(with, theta_) - current_;
  }
  void add(Element v) override {
    if (member_[v]) return;
    member_[v] = 1;
    set_.push_back(v);
    current_ = obj_.eval(set_, theta_);
  }
  bool contains(Element v) const override { return member_[v] != 0; }

 private:
  const SubmodularObjective& obj_;
  const ParamVector& theta_;
  ElementSet set_;
  std::vector<char> member_;
  double current_ = 0.0;
};

void check_finite(const ParamVector& theta) {
  if (!theta.allFinite()) throw InputError("theta has non-finite entries");
}

}  // namespace

void SubmodularObjective::check_dimension(const ParamVector& theta) const {
  if (theta.size() != param_dim()) {
    throw ConfigError(kind() + ": theta has dimension " +
                      std::to_string(theta.size()) + ", expected " +
                      std::to_string(param_dim()));
  }
}

void SubmodularObjective::validate_params(const ParamVector& theta) const {
  check_dimension(theta);
  check_finite(theta);
}

double SubmodularObjective::eval(std::span<const Element> set,
                                 const ParamVector& theta) const {
  check_dimension(theta);
  check_element_set(set, size());
  if (set.empty()) return 0.0;
  return value(set, theta);
}

double SubmodularObjective::marginal_gain(Element v,
                                          std::span<const Element> set,
                                          const ParamVector& theta) const {
  check_dimension(theta);
  check_element_set(set, size());
  if (v < 0 || v >= size()) {
    throw InputError("element index " + std::to_string(v) + " out of range");
  }
  for (Element u : set) {
    if (u == v) return 0.0;
  }
  ElementSet with(set.begin(), set.end());
  with.push_back(v);
  return value(with, theta) - (set.empty() ? 0.0 : value(set, theta));
}

ParamVector SubmodularObjective::grad_theta(std::span<const Element> set,
                                            const ParamVector& theta) const {
  ParamVector out = ParamVector::Zero(param_dim());
  accumulate_grad(set, theta, 1.0, out);
  return out;
}

void SubmodularObjective::accumulate_grad(
    std::span<const Element> set, const ParamVector& theta, double scale,
    Eigen::Ref<Eigen::VectorXd> out) const {
  check_dimension(theta);
  check_element_set(set, size());
  if (out.size() != param_dim()) {
    throw ConfigError("gradient buffer has wrong dimension");
  }
  if (set.empty() || scale == 0.0) return;
  add_grad(set, theta, scale, out);
}

std::unique_ptr<GainState> SubmodularObjective::start_run(
    const ParamVector& theta) const {
  check_dimension(theta);
  return std::make_unique<DifferenceGainState>(*this, theta);
}

void SubmodularObjective::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && static_cast<int>(labels.size()) != size()) {
    throw ConfigError("label count does not match ground set size");
  }
  labels_ = std::move(labels);
}

std::string SubmodularObjective::label(Element v) const {
  if (!labels_.empty()) return labels_[v];
  return "v" + std::to_string(v + 1);
}

// ---------------------------------------------------------------------------
// BipartiteInfluence

namespace {

class InfluenceGainState final : public GainState {
 public:
  InfluenceGainState(const BipartiteInfluence& obj, const ParamVector& theta)
      : obj_(obj),
        theta_(theta),
        survival_(Eigen::VectorXd::Ones(obj.targets())),
        member_(obj.size(), 0) {}

  double gain(Element v) const override {
    if (member_[v]) return 0.0;
    const int targets = obj_.targets();
    double total = 0.0;
    for (int t = 0; t < targets; ++t) {
      total += survival_[t] * theta_[obj_.index(v, t)];
    }
    return total;
  }
  void add(Element v) override {
    if (member_[v]) return;
    member_[v] = 1;
    const int targets = obj_.targets();
    for (int t = 0; t < targets; ++t) {
      survival_[t] *= 1.0 - theta_[obj_.index(v, t)];
    }
  }
  bool contains(Element v) const override { return member_[v] != 0; }

 private:
  const BipartiteInfluence& obj_;
  const ParamVector& theta_;
  // Per-target probability that no chosen item reaches the target.
  Eigen::VectorXd survival_;
  std::vector<char> member_;
};

}  // namespace

BipartiteInfluence::BipartiteInfluence(int items, int targets)
    : items_(items), targets_(targets) {
  if (items < 1) throw ConfigError("ground set must have at least one item");
  if (targets < 1) throw ConfigError("need at least one target");
}

void BipartiteInfluence::validate_params(const ParamVector& theta) const {
  SubmodularObjective::validate_params(theta);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta[i] < 0.0 || theta[i] > 1.0) {
      throw InputError("link probability theta[" + std::to_string(i) +
                       "] = " + std::to_string(theta[i]) +
                       " outside [0, 1]");
    }
  }
}

std::unique_ptr<GainState> BipartiteInfluence::start_run(
    const ParamVector& theta) const {
  check_dimension(theta);
  return std::make_unique<InfluenceGainState>(*this, theta);
}

double BipartiteInfluence::value(std::span<const Element> set,
                                 const ParamVector& theta) const {
  double total = 0.0;
  for (int t = 0; t < targets_; ++t) {
    double survival = 1.0;
    for (Element v : set) survival *= 1.0 - theta[index(v, t)];
    total += 1.0 - survival;
  }
  return total;
}

void BipartiteInfluence::add_grad(std::span<const Element> set,
                                  const ParamVector& theta, double scale,
                                  Eigen::Ref<Eigen::VectorXd> out) const {
  // d f / d theta[v, t] = prod_{u in X, u != v} (1 - theta[u, t]), formed
  // from prefix and suffix products so that theta = 1 needs no division.
  const std::size_t m = set.size();
  std::vector<double> suffix(m + 1);
  for (int t = 0; t < targets_; ++t) {
    suffix[m] = 1.0;
    for (std::size_t i = m; i-- > 0;) {
      suffix[i] = suffix[i + 1] * (1.0 - theta[index(set[i], t)]);
    }
    double prefix = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      out[index(set[i], t)] += scale * prefix * suffix[i + 1];
      prefix *= 1.0 - theta[index(set[i], t)];
    }
  }
}

// ---------------------------------------------------------------------------
// WeightedCoverage

namespace {

class CoverageGainState final : public GainState {
 public:
  CoverageGainState(const WeightedCoverage& obj, const ParamVector& theta)
      : obj_(obj),
        theta_(theta),
        covered_(obj.universe(), 0),
        member_(obj.size(), 0) {}

  double gain(Element v) const override {
    if (member_[v]) return 0.0;
    double total = 0.0;
    for (int i : obj_.cover_sets()[v]) {
      if (!covered_[i]) total += theta_[i];
    }
    return total;
  }
  void add(Element v) override {
    if (member_[v]) return;
    member_[v] = 1;
    for (int i : obj_.cover_sets()[v]) covered_[i] = 1;
  }
  bool contains(Element v) const override { return member_[v] != 0; }

 private:
  const WeightedCoverage& obj_;
  const ParamVector& theta_;
  std::vector<char> covered_;
  std::vector<char> member_;
};

}  // namespace

WeightedCoverage::WeightedCoverage(int universe,
                                   std::vector<std::vector<int>> cover_sets,
                                   ParamVector default_weights)
    : universe_(universe),
      cover_sets_(std::move(cover_sets)),
      default_weights_(std::move(default_weights)) {
  if (cover_sets_.empty()) {
    throw ConfigError("ground set must have at least one element");
  }
  if (universe_ < 1) throw ConfigError("universe must be nonempty");
  for (auto& cover : cover_sets_) {
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    for (int i : cover) {
      if (i < 0 || i >= universe_) {
        throw InputError("cover set entry " + std::to_string(i) +
                         " outside universe");
      }
    }
  }
  if (default_weights_.size() == 0) {
    default_weights_ = ParamVector::Ones(universe_);
  }
  validate_params(default_weights_);
}

void WeightedCoverage::validate_params(const ParamVector& theta) const {
  SubmodularObjective::validate_params(theta);
  if ((theta.array() < 0.0).any()) {
    throw InputError("coverage weights must be nonnegative");
  }
}

std::unique_ptr<GainState> WeightedCoverage::start_run(
    const ParamVector& theta) const {
  check_dimension(theta);
  return std::make_unique<CoverageGainState>(*this, theta);
}

double WeightedCoverage::value(std::span<const Element> set,
                               const ParamVector& theta) const {
  std::vector<char> covered(universe_, 0);
  double total = 0.0;
  for (Element v : set) {
    for (int i : cover_sets_[v]) {
      if (!covered[i]) {
        covered[i] = 1;
        total += theta[i];
      }
    }
  }
  return total;
}

void WeightedCoverage::add_grad(std::span<const Element> set,
                                const ParamVector& /*theta*/, double scale,
                                Eigen::Ref<Eigen::VectorXd> out) const {
  std::vector<char> covered(universe_, 0);
  for (Element v : set) {
    for (int i : cover_sets_[v]) {
      if (!covered[i]) {
        covered[i] = 1;
        out[i] += scale;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// DeepSubmodular

namespace {

class DeepGainState final : public GainState {
 public:
  DeepGainState(const DeepSubmodular& obj, const ParamVector& theta)
      : obj_(obj),
        theta_(theta),
        pre_(Eigen::VectorXd::Zero(obj.hidden())),
        member_(obj.size(), 0) {}

  double gain(Element v) const override {
    if (member_[v]) return 0.0;
    double total = 0.0;
    for (int h = 0; h < obj_.hidden(); ++h) {
      const double w = theta_[obj_.weight_index(h, v)];
      if (w == 0.0) continue;
      total += theta_[obj_.output_index(h)] *
               (DeepSubmodular::activation(pre_[h] + w) -
                DeepSubmodular::activation(pre_[h]));
    }
    return total;
  }
  void add(Element v) override {
    if (member_[v]) return;
    member_[v] = 1;
    for (int h = 0; h < obj_.hidden(); ++h) {
      pre_[h] += theta_[obj_.weight_index(h, v)];
    }
  }
  bool contains(Element v) const override { return member_[v] != 0; }

 private:
  const DeepSubmodular& obj_;
  const ParamVector& theta_;
  Eigen::VectorXd pre_;
  std::vector<char> member_;
};

}  // namespace

DeepSubmodular::DeepSubmodular(int items, int hidden)
    : items_(items), hidden_(hidden) {
  if (items < 1) throw ConfigError("ground set must have at least one item");
  if (hidden < 1) throw ConfigError("hidden width must be positive");
}

double DeepSubmodular::activation(double x) {
  // sigmoid(x) - 1/2 == tanh(x / 2) / 2, which keeps precision near 0.
  return 0.5 * std::tanh(0.5 * x);
}

double DeepSubmodular::activation_derivative(double x) {
  const double t = std::tanh(0.5 * x);
  return 0.25 * (1.0 - t * t);
}

void DeepSubmodular::validate_params(const ParamVector& theta) const {
  SubmodularObjective::validate_params(theta);
  if ((theta.array() < 0.0).any()) {
    throw InputError("deep submodular weights must be nonnegative");
  }
}

std::unique_ptr<GainState> DeepSubmodular::start_run(
    const ParamVector& theta) const {
  check_dimension(theta);
  return std::make_unique<DeepGainState>(*this, theta);
}

double DeepSubmodular::value(std::span<const Element> set,
                             const ParamVector& theta) const {
  double total = 0.0;
  for (int h = 0; h < hidden_; ++h) {
    double pre = 0.0;
    for (Element v : set) pre += theta[weight_index(h, v)];
    total += theta[output_index(h)] * activation(pre);
  }
  return total;
}

void DeepSubmodular::add_grad(std::span<const Element> set,
                              const ParamVector& theta, double scale,
                              Eigen::Ref<Eigen::VectorXd> out) const {
  for (int h = 0; h < hidden_; ++h) {
    double pre = 0.0;
    for (Element v : set) pre += theta[weight_index(h, v)];
    const double a = theta[output_index(h)];
    out[output_index(h)] += scale * activation(pre);
    const double d = scale * a * activation_derivative(pre);
    for (Element v : set) out[weight_index(h, v)] += d;
  }
}

}  // namespace smoothgreedy
