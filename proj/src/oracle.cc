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

#include "smoothgreedy/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

double OutputDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& path : paths) total += path.probability;
  return total;
}

std::map<std::vector<Element>, double> OutputDistribution::sequence_masses()
    const {
  std::map<std::vector<Element>, double> out;
  for (const auto& path : paths) out[path.trace.sequence] += path.probability;
  return out;
}

std::map<ElementSet, double> OutputDistribution::set_masses() const {
  std::map<ElementSet, double> out;
  for (const auto& path : paths) out[path.trace.as_set()] += path.probability;
  return out;
}

double OutputDistribution::max_delta_k() const {
  double best = 0.0;
  for (const auto& path : paths) best = std::max(best, path.trace.delta_k);
  return best;
}

namespace {

void check_caps(const SubmodularObjective& obj,
                const ConstraintSystem& constraint,
                const EnumerationCaps& caps) {
  if (constraint.size() != obj.size()) {
    throw ConfigError("constraint and objective ground sets differ");
  }
  if (obj.size() > caps.max_n) {
    throw CapExceeded("enumeration refused: n = " + std::to_string(obj.size()) +
                      " exceeds cap " + std::to_string(caps.max_n));
  }
  if (constraint.rank() > caps.max_rank) {
    throw CapExceeded("enumeration refused: rank = " +
                      std::to_string(constraint.rank()) + " exceeds cap " +
                      std::to_string(caps.max_rank));
  }
}

// Replays the gain state for a prefix; enumeration depth is tiny.
std::unique_ptr<GainState> state_at(const SubmodularObjective& obj,
                                    const ParamVector& theta,
                                    const std::vector<Element>& prefix) {
  auto state = obj.start_run(theta);
  for (Element v : prefix) state->add(v);
  return state;
}

struct Enumerator {
  const SubmodularObjective& obj;
  const ConstraintSystem& constraint;
  const Regularizer& reg;
  const ParamVector& theta;
  int rank;
  std::vector<WeightedPath>* out;

  void expand_choices(GreedyTrace& trace, GreedyStep step, double weight,
                      const std::function<void(GreedyTrace&, double)>& next) {
    for (int i = 0; i < step.solution.size(); ++i) {
      const double p = step.solution.p[i];
      if (p <= 0.0) continue;
      GreedyTrace child = trace;
      GreedyStep chosen = step;
      chosen.chosen_index = i;
      child.log_prob += chosen.solution.log_p[i];
      child.delta = std::max(
          child.delta,
          reg.delta_bound(static_cast<int>(chosen.candidates.size())));
      child.sequence.push_back(chosen.candidates[i]);
      child.steps.push_back(std::move(chosen));
      next(child, weight * p);
    }
  }

  void finish(GreedyTrace& trace, double weight) {
    trace.delta_k = trace.delta * rank;
    out->push_back({trace, weight});
  }

  void full(GreedyTrace& trace, double weight) {
    std::vector<Element> candidates = constraint.addable(trace.sequence);
    if (candidates.empty()) {
      finish(trace, weight);
      return;
    }
    auto state = state_at(obj, theta, trace.sequence);
    GreedyStep step = make_step(std::move(candidates), *state, reg);
    expand_choices(trace, std::move(step), weight,
                   [this](GreedyTrace& t, double w) { full(t, w); });
  }

  void stochastic(GreedyTrace& trace, double weight, int sample_size) {
    if (static_cast<int>(trace.sequence.size()) == rank) {
      finish(trace, weight);
      return;
    }
    std::vector<Element> remaining;
    for (Element v = 0; v < obj.size(); ++v) {
      if (std::find(trace.sequence.begin(), trace.sequence.end(), v) ==
          trace.sequence.end()) {
        remaining.push_back(v);
      }
    }
    const int m = static_cast<int>(remaining.size());
    const int take = std::min(sample_size, m);
    // All take-subsets of `remaining` in lexicographic order.
    std::vector<int> pick(take);
    for (int i = 0; i < take; ++i) pick[i] = i;
    std::vector<std::vector<Element>> subsets;
    while (true) {
      std::vector<Element> subset(take);
      for (int i = 0; i < take; ++i) subset[i] = remaining[pick[i]];
      subsets.push_back(std::move(subset));
      int i = take - 1;
      while (i >= 0 && pick[i] == m - take + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < take; ++j) pick[j] = pick[j - 1] + 1;
    }
    const double subset_weight = 1.0 / static_cast<double>(subsets.size());
    auto state = state_at(obj, theta, trace.sequence);
    for (auto& subset : subsets) {
      GreedyStep step = make_step(std::move(subset), *state, reg);
      expand_choices(trace, std::move(step), weight * subset_weight,
                     [this, sample_size](GreedyTrace& t, double w) {
                       stochastic(t, w, sample_size);
                     });
    }
  }
};

}  // namespace

OutputDistribution enumerate_output_distribution(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const Regularizer& reg, const ParamVector& theta,
    const EnumerationCaps& caps) {
  check_caps(obj, constraint, caps);
  obj.validate_params(theta);
  OutputDistribution dist;
  Enumerator e{obj, constraint, reg, theta, constraint.rank(), &dist.paths};
  GreedyTrace root;
  e.full(root, 1.0);
  return dist;
}

OutputDistribution enumerate_stochastic_distribution(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const Regularizer& reg, const ParamVector& theta, int sample_size,
    const EnumerationCaps& caps) {
  check_caps(obj, constraint, caps);
  obj.validate_params(theta);
  const auto* card = dynamic_cast<const CardinalityConstraint*>(&constraint);
  if (card == nullptr) {
    throw ConfigError("stochastic enumeration needs a cardinality constraint");
  }
  if (sample_size < 1) throw ConfigError("subsample size must be positive");
  OutputDistribution dist;
  Enumerator e{obj, constraint, reg, theta, card->k(), &dist.paths};
  GreedyTrace root;
  e.stochastic(root, 1.0, sample_size);
  return dist;
}

Eigen::VectorXd exact_expectation(const Quantity& q,
                                  const OutputDistribution& dist) {
  Eigen::VectorXd total = Eigen::VectorXd::Zero(q.dim());
  Eigen::VectorXd value(q.dim());
  for (const auto& path : dist.paths) {
    q.evaluate(path.trace.as_set(), value);
    total += path.probability * value;
  }
  return total;
}

Eigen::MatrixXd exact_gradient(const Quantity& q,
                               const OutputDistribution& dist,
                               const SubmodularObjective& obj,
                               const Regularizer& reg,
                               const ParamVector& theta) {
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(q.dim(), obj.param_dim());
  Eigen::VectorXd value(q.dim());
  for (const auto& path : dist.paths) {
    q.evaluate(path.trace.as_set(), value);
    const Eigen::VectorXd score = grad_log_prob(path.trace, obj, reg, theta);
    total += path.probability * value * score.transpose();
  }
  return total;
}

Eigen::MatrixXd exact_gradient(const Quantity& q,
                               const SubmodularObjective& obj,
                               const ConstraintSystem& constraint,
                               const Regularizer& reg,
                               const ParamVector& theta,
                               const EnumerationCaps& caps) {
  return exact_gradient(
      q, enumerate_output_distribution(obj, constraint, reg, theta, caps), obj,
      reg, theta);
}

OptimalSet brute_force_opt(const SubmodularObjective& obj,
                           const ConstraintSystem& constraint,
                           const ParamVector& theta, int max_n) {
  const int n = obj.size();
  if (n > max_n || n > 30) {
    throw CapExceeded("brute-force optimum refused: n = " + std::to_string(n) +
                      " exceeds cap " + std::to_string(std::min(max_n, 30)));
  }
  if (constraint.size() != n) {
    throw ConfigError("constraint and objective ground sets differ");
  }
  const int rank = constraint.rank();
  OptimalSet best;
  bool found = false;
  ElementSet set;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > rank) continue;
    set.clear();
    for (int v = 0; v < n; ++v) {
      if (mask & (1u << v)) set.push_back(v);
    }
    if (!constraint.is_feasible(set)) continue;
    const double value = obj.eval(set, theta);
    if (!found || value > best.value ||
        (value == best.value && set < best.set)) {
      best.set = set;
      best.value = value;
      found = true;
    }
  }
  return best;
}

Eigen::VectorXd finite_difference(
    const std::function<double(const Eigen::VectorXd&)>& fn,
    const Eigen::VectorXd& theta, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd probe = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = fn(probe);
    probe[i] = theta[i] - h;
    const double down = fn(probe);
    probe[i] = theta[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("non-finite function value in finite difference at "
                         "component " + std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace smoothgreedy
