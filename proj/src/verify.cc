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

#include "smoothgreedy/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "smoothgreedy/errors.h"
#include "smoothgreedy/grad.h"
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/instance_io.h"
#include "smoothgreedy/learn.h"
#include "smoothgreedy/oracle.h"

namespace smoothgreedy {

// ---------------------------------------------------------------------------
// Random problems

std::unique_ptr<SubmodularObjective> random_objective(ObjectiveKind kind,
                                                      int n, RngStream& rng) {
  switch (kind) {
    case ObjectiveKind::kInfluence:
      return std::make_unique<BipartiteInfluence>(
          n, 1 + static_cast<int>(rng.uniform_index(4)));
    case ObjectiveKind::kCoverage: {
      const int universe = 3 + static_cast<int>(rng.uniform_index(4));
      std::vector<std::vector<int>> covers(n);
      for (auto& cover : covers) {
        const int count = 1 + static_cast<int>(rng.uniform_index(3));
        for (int i = 0; i < count; ++i) {
          cover.push_back(static_cast<int>(rng.uniform_index(universe)));
        }
      }
      return std::make_unique<WeightedCoverage>(universe, std::move(covers),
                                                ParamVector());
    }
    case ObjectiveKind::kDeep:
      return std::make_unique<DeepSubmodular>(
          n, 2 + static_cast<int>(rng.uniform_index(2)));
  }
  throw ConfigError("unknown objective kind");
}

ParamVector random_theta(const SubmodularObjective& obj, RngStream& rng) {
  ParamVector theta(obj.param_dim());
  const bool probabilities = dynamic_cast<const BipartiteInfluence*>(&obj);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    theta[i] = probabilities ? rng.uniform(0.05, 0.95) : rng.uniform(0.1, 1.0);
  }
  return theta;
}

RandomProblem random_cardinality_problem(ObjectiveKind kind, int n, int k,
                                         RngStream& rng) {
  RandomProblem p;
  p.objective = random_objective(kind, n, rng);
  p.constraint = std::make_unique<CardinalityConstraint>(n, k);
  p.theta = random_theta(*p.objective, rng);
  return p;
}

RandomProblem random_partition_problem(ObjectiveKind kind, int n,
                                       int max_rank, RngStream& rng) {
  const int blocks = 2 + static_cast<int>(rng.uniform_index(2));
  std::vector<int> block_of(n);
  for (int v = 0; v < n; ++v) {
    block_of[v] = v < blocks ? v : static_cast<int>(rng.uniform_index(blocks));
  }
  std::vector<int> caps(blocks);
  for (int& cap : caps) cap = 1 + static_cast<int>(rng.uniform_index(2));
  RandomProblem p;
  p.objective = random_objective(kind, n, rng);
  auto matroid = std::make_unique<PartitionMatroid>(block_of, caps);
  while (matroid->rank() > max_rank) {
    auto it = std::max_element(caps.begin(), caps.end());
    --*it;
    matroid = std::make_unique<PartitionMatroid>(block_of, caps);
  }
  p.constraint = std::move(matroid);
  p.theta = random_theta(*p.objective, rng);
  return p;
}

SimplexJacobian PerturbedRegularizer::jacobian(
    const SimplexSolution& sol) const {
  SimplexJacobian jac = base_.jacobian(sol);
  jac.matrix.array() += offset_;
  return jac;
}

double kink_distance(const SimplexSolution& sol, double epsilon) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sol.size(); ++i) {
    const double d =
        sol.p[i] > 0.0 ? sol.p[i] : sol.lambda[i] / (2.0 * epsilon);
    best = std::min(best, d);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Acceptance criteria

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kOneMinusInvE = 1.0 - 1.0 / std::numbers::e;
constexpr ObjectiveKind kAllKinds[] = {ObjectiveKind::kInfluence,
                                       ObjectiveKind::kCoverage,
                                       ObjectiveKind::kDeep};
constexpr double kEpsilons[] = {0.05, 0.2, 1.0};

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

std::vector<std::unique_ptr<Regularizer>> both_regularizers(double eps) {
  std::vector<std::unique_ptr<Regularizer>> regs;
  regs.push_back(std::make_unique<EntropyRegularizer>(eps));
  regs.push_back(std::make_unique<QuadraticRegularizer>(eps));
  return regs;
}

double relative_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = std::max(want.cwiseAbs().maxCoeff(), 1e-6);
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

double min_kink_distance(const OutputDistribution& dist, double epsilon) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& path : dist.paths) {
    for (const auto& step : path.trace.steps) {
      best = std::min(best, kink_distance(step.solution, epsilon));
    }
  }
  return best;
}

// 1. Objective values of the three maximal solutions.
CheckResult check_exact_values(const VerifyOptions&) {
  CheckResult r;
  const Instance inst = sensitivity_example();
  const double want[3] = {1.24, 1.00, 0.76};
  const ElementSet sets[3] = {{0, 1}, {0, 2}, {1, 2}};
  double worst = 0.0;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    const double got = inst.objective->eval(sets[i], inst.theta);
    worst = std::max(worst, std::abs(got - want[i]));
    detail += (i ? ", " : "") + fmt(got);
  }
  r.passed = worst <= 1e-12;
  r.margin = 1e-12 - worst;
  r.detail = "f = (" + detail + "), max error " + fmt(worst);
  return r;
}

// 2. Sign pattern and relative insensitivity of v1.
CheckResult check_sensitivity_signs(const VerifyOptions&) {
  CheckResult r;
  const Instance inst = sensitivity_example();
  const EntropyRegularizer reg(0.2);
  const Eigen::MatrixXd jac =
      exact_gradient(Quantity::indicator(3), *inst.objective,
                     *inst.constraint, reg, inst.theta);
  const int theta23 = 1 * 3 + 2;
  const double v2 = jac(1, theta23);
  const double v3 = jac(2, theta23);
  const double v1_max = jac.row(0).cwiseAbs().maxCoeff();
  const double others_max = jac.bottomRows(2).cwiseAbs().maxCoeff();
  r.passed = v2 > 0.0 && v3 < 0.0 && v1_max < others_max;
  r.margin = std::min({v2, -v3, others_max - v1_max});
  r.detail = "dP(v2)/dtheta_2_3 = " + fmt(v2) + ", dP(v3)/dtheta_2_3 = " +
             fmt(v3) + ", max|row v1| = " + fmt(v1_max) +
             ", max|rows v2,v3| = " + fmt(others_max);
  return r;
}

// 3 and 4. Approximation bounds of smoothed greedy against the optimum.
CheckResult check_greedy_bound(const VerifyOptions& options, bool partition) {
  CheckResult r;
  RngStream rng(options.seed, {partition ? 4u : 3u});
  double worst = std::numeric_limits<double>::infinity();
  int evaluated = 0;
  for (int i = 0; i < 100; ++i) {
    const ObjectiveKind kind = kAllKinds[i % 3];
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    RandomProblem p =
        partition
            ? random_partition_problem(kind, n, 4, rng)
            : random_cardinality_problem(
                  kind, n, 1 + static_cast<int>(rng.uniform_index(
                                   static_cast<std::size_t>(std::min(3, n)))),
                  rng);
    const OptimalSet opt =
        brute_force_opt(*p.objective, *p.constraint, p.theta);
    const Quantity f = Quantity::objective_value(*p.objective, p.theta);
    for (double eps : kEpsilons) {
      for (const auto& reg : both_regularizers(eps)) {
        const OutputDistribution dist = enumerate_output_distribution(
            *p.objective, *p.constraint, *reg, p.theta);
        const double expected = exact_expectation(f, dist)[0];
        const double factor = partition ? 0.5 : kOneMinusInvE;
        const double bound = factor * opt.value - dist.max_delta_k();
        worst = std::min(worst, expected - bound);
        ++evaluated;
      }
    }
  }
  r.passed = worst >= -1e-10;
  r.margin = worst;
  r.detail = std::to_string(evaluated) + " (instance, regularizer) pairs, " +
             "min E[f] - bound = " + fmt(worst);
  return r;
}

// 5. Stochastic variant bound.
CheckResult check_stochastic_bound(const VerifyOptions& options) {
  CheckResult r;
  RngStream rng(options.seed, {5u});
  double worst = std::numeric_limits<double>::infinity();
  int evaluated = 0;
  for (int i = 0; i < 60; ++i) {
    const ObjectiveKind kind = kAllKinds[i % 3];
    const int n = 3 + static_cast<int>(rng.uniform_index(3));
    RandomProblem p = random_cardinality_problem(kind, n, 2, rng);
    const OptimalSet opt =
        brute_force_opt(*p.objective, *p.constraint, p.theta);
    const Quantity f = Quantity::objective_value(*p.objective, p.theta);
    for (double sub_eps : {0.1, 0.3}) {
      const int size = stochastic_sample_size(n, 2, sub_eps);
      for (double eps : kEpsilons) {
        for (const auto& reg : both_regularizers(eps)) {
          const OutputDistribution dist = enumerate_stochastic_distribution(
              *p.objective, *p.constraint, *reg, p.theta, size);
          const double expected = exact_expectation(f, dist)[0];
          const double bound =
              (kOneMinusInvE - sub_eps) * opt.value - dist.max_delta_k();
          worst = std::min(worst, expected - bound);
          ++evaluated;
        }
      }
    }
  }
  r.passed = worst >= -1e-10;
  r.margin = worst;
  r.detail = std::to_string(evaluated) + " configurations, min E[f] - bound = " +
             fmt(worst);
  return r;
}

struct FixedProblem {
  std::string name;
  Instance instance;
  std::unique_ptr<Regularizer> reg;
};

std::vector<FixedProblem> unbiasedness_problems() {
  std::vector<FixedProblem> out;
  {
    FixedProblem p{"influence/entropy", sensitivity_example(),
                   std::make_unique<EntropyRegularizer>(0.2)};
    out.push_back(std::move(p));
  }
  {
    Instance inst;
    inst.objective = std::make_unique<WeightedCoverage>(
        3, std::vector<std::vector<int>>{{0, 1}, {1, 2}, {2}},
        ParamVector());
    inst.constraint = std::make_unique<CardinalityConstraint>(3, 2);
    inst.theta = (ParamVector(3) << 1.0, 0.5, 0.8).finished();
    out.push_back({"coverage/quadratic", std::move(inst),
                   std::make_unique<QuadraticRegularizer>(0.4)});
  }
  {
    Instance inst;
    inst.objective = std::make_unique<DeepSubmodular>(4, 1);
    inst.constraint = std::make_unique<PartitionMatroid>(
        std::vector<int>{0, 0, 1, 1}, std::vector<int>{1, 1});
    inst.theta = (ParamVector(5) << 0.3, 0.6, 0.9, 0.2, 1.5).finished();
    out.push_back({"deep/partition/entropy", std::move(inst),
                   std::make_unique<EntropyRegularizer>(0.1)});
  }
  return out;
}

// 6. Monte Carlo estimator agrees with the exact gradient.
CheckResult check_unbiasedness(const VerifyOptions& options) {
  CheckResult r;
  double worst_z = 0.0;
  int components = 0;
  std::string failures;
  for (const FixedProblem& p : unbiasedness_problems()) {
    const auto& obj = *p.instance.objective;
    const OutputDistribution dist = enumerate_output_distribution(
        obj, *p.instance.constraint, *p.reg, p.instance.theta);
    const Quantity quantities[] = {
        Quantity::objective_value(obj, p.instance.theta),
        Quantity::indicator(obj.size())};
    for (const Quantity& q : quantities) {
      const Eigen::MatrixXd exact =
          exact_gradient(q, dist, obj, *p.reg, p.instance.theta);
      for (BaselineMode mode :
           {BaselineMode::kNone, BaselineMode::kRunningMean}) {
        EstimatorConfig cfg;
        cfg.samples = 100000;
        cfg.baseline = mode;
        cfg.seed = options.seed;
        cfg.threads = options.threads;
        const GradientEstimate est = estimate_gradient(
            q, obj, *p.instance.constraint, *p.reg, p.instance.theta, cfg);
        for (Eigen::Index i = 0; i < exact.rows(); ++i) {
          for (Eigen::Index j = 0; j < exact.cols(); ++j) {
            const double diff = std::abs(est.estimate(i, j) - exact(i, j));
            const double se = est.std_error(i, j);
            ++components;
            if (diff <= 1e-12) continue;
            const double z = se > 0.0 ? diff / se
                                      : std::numeric_limits<double>::infinity();
            worst_z = std::max(worst_z, z);
            if (z > 3.0) {
              failures += " " + p.name + "/" +
                          (q.kind() == Quantity::Kind::kIndicator ? "1_S"
                                                                  : "f") +
                          "/" + to_string(mode) + "[" + std::to_string(i) +
                          "," + std::to_string(j) + "] z=" + fmt(z);
            }
          }
        }
      }
    }
  }
  r.passed = failures.empty();
  r.margin = 3.0 - worst_z;
  r.detail = std::to_string(components) +
             " components at N = 1e5, max |est - exact| / SE = " +
             fmt(worst_z) + failures;
  return r;
}

// 7. exact_gradient vs finite differences of exact_expectation, and
//    regularizer Jacobians vs finite differences of the solve.
CheckResult check_gradient_chain(const VerifyOptions& options) {
  CheckResult r;
  RngStream rng(options.seed, {7u});
  double worst_chain = 0.0;
  double worst_flat = 0.0;
  int probes = 0;
  while (probes < 20) {
    const ObjectiveKind kind = kAllKinds[probes % 3];
    const int n = 2 + static_cast<int>(rng.uniform_index(3));
    RandomProblem p =
        (probes % 2 == 0)
            ? random_cardinality_problem(
                  kind, n, 1 + static_cast<int>(rng.uniform_index(2)), rng)
            : random_partition_problem(kind, n, 3, rng);
    const double eps = kEpsilons[rng.uniform_index(3)];
    const auto base = make_regularizer(
        rng.uniform() < 0.5 ? "entropy" : "quadratic", eps);
    const OutputDistribution dist = enumerate_output_distribution(
        *p.objective, *p.constraint, *base, p.theta);
    if (base->kind() == "quadratic" && min_kink_distance(dist, eps) < 1e-3) {
      continue;  // support would change inside the difference stencil
    }
    const PerturbedRegularizer reg(*base, options.jacobian_perturbation);
    const Quantity q = (probes % 4 == 3)
                           ? Quantity::indicator(p.objective->size())
                           : Quantity::objective_value(*p.objective, p.theta);
    const Eigen::MatrixXd analytic =
        exact_gradient(q, dist, *p.objective, reg, p.theta);
    Eigen::MatrixXd numeric(q.dim(), p.objective->param_dim());
    for (int row = 0; row < q.dim(); ++row) {
      numeric.row(row) =
          finite_difference(
              [&](const Eigen::VectorXd& theta) {
                return exact_expectation(
                    q, enumerate_output_distribution(
                           *p.objective, *p.constraint, *base, theta))[row];
              },
              p.theta, 1e-5)
              .transpose();
    }
    // Relative error needs a nonzero reference; flat probes are checked
    // absolutely and do not count toward the probe budget.
    const double scale = numeric.cwiseAbs().maxCoeff();
    if (scale < 1e-3) {
      worst_flat = std::max(worst_flat,
                            (analytic - numeric).cwiseAbs().maxCoeff());
      continue;
    }
    worst_chain = std::max(worst_chain, relative_error(analytic, numeric));
    ++probes;
  }

  double worst_reg = 0.0;
  int reg_probes = 0;
  while (reg_probes < 100) {
    const int n = 1 + static_cast<int>(rng.uniform_index(6));
    const double eps = rng.uniform(0.05, 1.0);
    const auto base = make_regularizer(
        reg_probes % 2 == 0 ? "entropy" : "quadratic", eps);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = rng.uniform(-1.0, 1.0);
    const SimplexSolution sol = base->solve(g);
    if (sol.degenerate || kink_distance(sol, eps) < 1e-4) continue;
    const PerturbedRegularizer reg(*base, options.jacobian_perturbation);
    const Eigen::MatrixXd analytic = reg.jacobian(sol).matrix;
    Eigen::MatrixXd numeric(n, n);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd up = g, down = g;
      up[j] += h;
      down[j] -= h;
      numeric.col(j) = (base->solve(up).p - base->solve(down).p) / (2.0 * h);
    }
    worst_reg = std::max(worst_reg, (analytic - numeric).cwiseAbs().maxCoeff());
    ++reg_probes;
  }
  r.passed = worst_chain <= 1e-5 && worst_flat <= 1e-9 && worst_reg <= 1e-6;
  r.margin = std::min({1e-5 - worst_chain, 1e-9 - worst_flat,
                       1e-6 - worst_reg});
  r.detail = "chain: 20 probes, max rel err " + fmt(worst_chain) +
             " (flat probes max abs err " + fmt(worst_flat) + ")" +
             "; regularizer: 100 probes, max abs err " + fmt(worst_reg);
  return r;
}

// Greedy sequence and the smallest gap between the best and second-best
// marginal gain along it.
std::pair<std::vector<Element>, double> greedy_sequence_gap(
    const SubmodularObjective& obj, const ConstraintSystem& constraint,
    const ParamVector& theta) {
  auto state = obj.start_run(theta);
  std::vector<Element> seq;
  double gap = std::numeric_limits<double>::infinity();
  while (true) {
    const auto candidates = constraint.addable(seq);
    if (candidates.empty()) break;
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    Element arg = candidates.front();
    for (Element v : candidates) {
      const double g = state->gain(v);
      if (g > best) {
        second = best;
        best = g;
        arg = v;
      } else if (g > second) {
        second = g;
      }
    }
    if (candidates.size() > 1) gap = std::min(gap, best - second);
    seq.push_back(arg);
    state->add(arg);
  }
  return {seq, gap};
}

// 8. Entropy with a tiny temperature reproduces the plain greedy.
CheckResult check_temperature_limit(const VerifyOptions& options) {
  CheckResult r;
  RngStream rng(options.seed, {8u});
  const EntropyRegularizer reg(1e-6);
  double worst = 1.0;
  int instances = 0;
  auto probe = [&](const SubmodularObjective& obj,
                   const ConstraintSystem& constraint,
                   const ParamVector& theta) {
    const auto [seq, gap] = greedy_sequence_gap(obj, constraint, theta);
    if (gap < 1e-3) return;
    const auto masses =
        enumerate_output_distribution(obj, constraint, reg, theta)
            .sequence_masses();
    const auto it = masses.find(seq);
    worst = std::min(worst, it == masses.end() ? 0.0 : it->second);
    ++instances;
  };
  const Instance inst = sensitivity_example();
  probe(*inst.objective, *inst.constraint, inst.theta);
  while (instances < 25) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    RandomProblem p = random_cardinality_problem(
        kAllKinds[instances % 3], n,
        1 + static_cast<int>(rng.uniform_index(std::min(3, n))), rng);
    probe(*p.objective, *p.constraint, p.theta);
  }
  r.passed = worst >= 0.999;
  r.margin = worst - 0.999;
  r.detail = std::to_string(instances) +
             " instances with gaps >= 1e-3, min greedy-sequence mass " +
             fmt(worst);
  return r;
}

// 9. Running-mean baseline lowers the estimator variance.
CheckResult check_variance_reduction(const VerifyOptions& options) {
  CheckResult r;
  const Instance inst = sensitivity_example();
  const EntropyRegularizer reg(0.2);
  const Quantity quantities[] = {
      Quantity::indicator(3),
      Quantity::objective_value(*inst.objective, inst.theta)};
  double worst_ratio = 0.0;
  std::string detail;
  for (const Quantity& q : quantities) {
    double mean_var[2];
    int slot = 0;
    for (BaselineMode mode :
         {BaselineMode::kNone, BaselineMode::kRunningMean}) {
      std::vector<Eigen::MatrixXd> estimates;
      for (int rep = 0; rep < 30; ++rep) {
        EstimatorConfig cfg;
        cfg.samples = 100;
        cfg.baseline = mode;
        cfg.seed = options.seed + 1000 + static_cast<uint64_t>(rep);
        cfg.threads = options.threads;
        estimates.push_back(estimate_gradient(q, *inst.objective,
                                              *inst.constraint, reg,
                                              inst.theta, cfg)
                                .estimate);
      }
      Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(estimates[0].rows(),
                                                   estimates[0].cols());
      for (const auto& e : estimates) mean += e / 30.0;
      Eigen::MatrixXd var = Eigen::MatrixXd::Zero(mean.rows(), mean.cols());
      for (const auto& e : estimates) {
        var.array() += (e - mean).array().square() / 29.0;
      }
      mean_var[slot++] = var.mean();
    }
    const double ratio = mean_var[1] / mean_var[0];
    worst_ratio = std::max(worst_ratio, ratio);
    detail += std::string(detail.empty() ? "" : "; ") +
              (q.kind() == Quantity::Kind::kIndicator ? "Q = 1_S" : "Q = f") +
              ": var none " + fmt(mean_var[0]) + ", running-mean " +
              fmt(mean_var[1]);
  }
  r.passed = worst_ratio < 1.0;
  r.margin = 1.0 - worst_ratio;
  r.detail = detail;
  return r;
}

// 10. Decision-focused training beats random decisions and the untrained
//     model.
CheckResult check_decision_focused(const VerifyOptions& options) {
  CheckResult r;
  constexpr int kSeeds = 10;
  constexpr int kBudget = 5;
  double trained = 0.0, initial = 0.0, random = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    SyntheticDflConfig data_cfg;
    data_cfg.seed = options.seed + static_cast<uint64_t>(s);
    const DflData data = make_synthetic_dfl(data_cfg);
    const BipartiteInfluence objective(data_cfg.items, data_cfg.targets);
    const CardinalityConstraint constraint(data_cfg.items, kBudget);
    const EntropyRegularizer reg(0.2);
    TrainConfig cfg;
    cfg.seed = options.seed + static_cast<uint64_t>(s);
    cfg.threads = options.threads;
    const TrainResult result =
        train_decision_focused(data, objective, constraint, reg, cfg);
    trained += result.history.back().test_value / kSeeds;
    initial += result.history.front().test_value / kSeeds;
    random += random_decision_quality(data.test, objective, constraint, 200,
                                      cfg.seed) /
              kSeeds;
  }
  r.passed = trained >= 1.1 * random && trained > initial;
  r.margin = std::min(trained / random - 1.1, trained - initial);
  r.detail = "mean test value: trained " + fmt(trained) + ", untrained " +
             fmt(initial) + ", random " + fmt(random) + " (ratio " +
             fmt(trained / random) + ")";
  return r;
}

// 11. Oracle-query learning raises the true value over 20 rounds.
CheckResult check_oracle_learning(const VerifyOptions& options) {
  CheckResult r;
  constexpr int kRuns = 30;
  const CoverageInstance target = make_leadership_coverage(options.seed);
  const ParamVector weights = target.objective.default_weights();
  const SetOracle oracle = [&](std::span<const Element> set) {
    return target.objective.eval(set, weights);
  };
  const EntropyRegularizer reg(0.02);
  const DeepSubmodular model(target.objective.size(), 50);
  double worst = std::numeric_limits<double>::infinity();
  std::string detail;
  for (bool noisy : {false, true}) {
    double first = 0.0, last = 0.0;
    for (int run = 0; run < kRuns; ++run) {
      OracleLearnConfig cfg;
      cfg.rounds = 20;
      cfg.samples = 10;
      cfg.baseline = BaselineMode::kRunningMean;
      cfg.noisy = noisy;
      cfg.seed = options.seed + static_cast<uint64_t>(run);
      cfg.threads = options.threads;
      const OracleLearnResult res = learn_with_oracle_queries(
          oracle, model, target.constraint, reg, cfg);
      first += res.history.front().true_value / kRuns;
      last += res.history.back().true_value / kRuns;
    }
    worst = std::min(worst, last - first);
    detail += std::string(noisy ? "; noisy" : "noise-free") +
              ": round 0 " + fmt(first) + " -> round 20 " + fmt(last);
  }
  r.passed = worst > 0.0;
  r.margin = worst;
  r.detail = detail;
  return r;
}

// 12. Full-size subsampling reproduces the deterministic-candidate
//     distribution.
CheckResult check_stochastic_equivalence(const VerifyOptions& options) {
  CheckResult r;
  RngStream rng(options.seed, {12u});
  double worst = 0.0;
  for (int i = 0; i < 15; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform_index(4));
    const int k = 1 + static_cast<int>(rng.uniform_index(std::min(3, n)));
    RandomProblem p = random_cardinality_problem(kAllKinds[i % 3], n, k, rng);
    for (const auto& reg : both_regularizers(kEpsilons[i % 3])) {
      const auto full = enumerate_output_distribution(
                            *p.objective, *p.constraint, *reg, p.theta)
                            .sequence_masses();
      const auto sub = enumerate_stochastic_distribution(
                           *p.objective, *p.constraint, *reg, p.theta, n)
                           .sequence_masses();
      for (const auto& [seq, mass] : full) {
        const auto it = sub.find(seq);
        worst = std::max(worst,
                         std::abs(mass - (it == sub.end() ? 0.0 : it->second)));
      }
      for (const auto& [seq, mass] : sub) {
        if (!full.contains(seq)) worst = std::max(worst, mass);
      }
    }
  }
  r.passed = worst <= 1e-12;
  r.margin = 1e-12 - worst;
  r.detail = "30 distributions, max |mass difference| = " + fmt(worst);
  return r;
}

struct Criterion {
  const char* name;
  CheckResult (*run)(const VerifyOptions&);
};

const Criterion kCriteria[] = {
    {"exact objective values of the maximal solutions", check_exact_values},
    {"sensitivity sign pattern", check_sensitivity_signs},
    {"cardinality bound (1-1/e) OPT - delta K",
     [](const VerifyOptions& o) { return check_greedy_bound(o, false); }},
    {"partition matroid bound OPT/2 - delta K",
     [](const VerifyOptions& o) { return check_greedy_bound(o, true); }},
    {"stochastic bound (1-1/e-eps) OPT - delta K", check_stochastic_bound},
    {"score-function estimator unbiasedness", check_unbiasedness},
    {"gradient chain and regularizer Jacobians vs finite differences",
     check_gradient_chain},
    {"temperature limit recovers greedy", check_temperature_limit},
    {"running-mean baseline reduces variance", check_variance_reduction},
    {"decision-focused learning beats random", check_decision_focused},
    {"oracle-query learning improves true value", check_oracle_learning},
    {"stochastic variant with full subsets matches smoothed greedy",
     check_stochastic_equivalence},
};

}  // namespace

int acceptance_criteria_count() {
  return static_cast<int>(std::size(kCriteria));
}

std::string acceptance_criterion_name(int id) {
  if (id < 1 || id > acceptance_criteria_count()) {
    throw ConfigError("no acceptance criterion " + std::to_string(id));
  }
  return kCriteria[id - 1].name;
}

CheckResult run_acceptance_criterion(int id, const VerifyOptions& options) {
  const std::string name = acceptance_criterion_name(id);
  const auto start = Clock::now();
  CheckResult r;
  try {
    r = kCriteria[id - 1].run(options);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = name;
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::vector<CheckResult> run_acceptance_suite(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  for (int id = 1; id <= acceptance_criteria_count(); ++id) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) ==
            options.only.end()) {
      continue;
    }
    results.push_back(run_acceptance_criterion(id, options));
    if (options.on_result) options.on_result(results.back());
  }
  return results;
}

nlohmann::json report_to_json(const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed;
    checks.push_back({{"id", r.id},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"margin", std::isfinite(r.margin)
                                     ? nlohmann::json(r.margin)
                                     : nlohmann::json(nullptr)},
                      {"detail", r.detail},
                      {"seconds", r.seconds}});
  }
  return {{"passed", all}, {"checks", checks}};
}

}  // namespace smoothgreedy
