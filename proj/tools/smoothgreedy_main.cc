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

// Command-line driver: maximize, sensitivity, train-dfl, oracle-learn,
// verify.
//
// Exit status: 0 success, 1 failed verification, 2 bad input or
// configuration, 3 enumeration cap refusal, 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "smoothgreedy/errors.h"
#include "smoothgreedy/grad.h"
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/instance_io.h"
#include "smoothgreedy/learn.h"
#include "smoothgreedy/oracle.h"
#include "smoothgreedy/verify.h"

namespace sg = smoothgreedy;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sg::InputError("cannot write " + path);
  out << text;
}

// CSV outputs get a JSON sidecar carrying the config echo and timing.
void emit_sidecar(const std::string& csv_path, const json& meta) {
  if (csv_path.empty() || csv_path == "-") {
    std::cerr << meta.dump() << "\n";
  } else {
    emit(csv_path + ".json", meta.dump(2) + "\n");
  }
}

json set_json(const sg::SubmodularObjective& obj, const sg::ElementSet& set) {
  json labels = json::array();
  for (sg::Element v : set) labels.push_back(obj.label(v));
  return {{"elements", set}, {"labels", labels}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

struct MaximizeArgs {
  std::string instance;
  std::optional<int> k;
  std::string regularizer = "entropy";
  double epsilon = 0.2;
  int samples = 100;
  std::optional<double> stochastic_eps;
  uint64_t seed = 0;
  int threads = 0;
  bool verify_small = false;
  std::string out;
};

int run_maximize(const MaximizeArgs& a) {
  const auto start = Clock::now();
  sg::Instance inst = sg::load_instance(a.instance);
  if (a.k) {
    inst.constraint = std::make_unique<sg::CardinalityConstraint>(
        inst.objective->size(), *a.k);
  }
  const auto reg = sg::make_regularizer(a.regularizer, a.epsilon);
  if (a.samples < 1) throw sg::ConfigError("--samples must be positive");

  std::vector<sg::GreedyTrace> traces(a.samples);
  const sg::RngStream base(a.seed);
  sg::parallel_for(a.samples, a.threads, [&](int j) {
    sg::RngStream rng = base.derive(static_cast<uint64_t>(j));
    traces[j] = a.stochastic_eps
                    ? sg::stochastic_smoothed_greedy(*inst.objective,
                                                     *inst.constraint, *reg,
                                                     inst.theta,
                                                     *a.stochastic_eps, rng)
                    : sg::smoothed_greedy(*inst.objective, *inst.constraint,
                                          *reg, inst.theta, rng);
    traces[j].seed = a.seed;
    traces[j].trial = static_cast<uint64_t>(j);
  });

  double mean = 0.0;
  double best_value = -1.0;
  int best = 0;
  for (int j = 0; j < a.samples; ++j) {
    const double value = inst.objective->eval(traces[j].as_set(), inst.theta);
    mean += value / a.samples;
    if (value > best_value) {
      best_value = value;
      best = j;
    }
  }
  double delta_k = 0.0;
  for (const auto& t : traces) delta_k = std::max(delta_k, t.delta_k);

  json config = {{"instance", a.instance},
                 {"regularizer", a.regularizer},
                 {"epsilon", a.epsilon},
                 {"samples", a.samples},
                 {"seed", a.seed}};
  if (a.k) config["k"] = *a.k;
  if (a.stochastic_eps) config["stochastic_eps"] = *a.stochastic_eps;
  config["verify_small"] = a.verify_small;

  json result = {{"command", "maximize"},
                 {"config", config},
                 {"seed", a.seed},
                 {"best_set", set_json(*inst.objective, traces[best].as_set())},
                 {"best_value", best_value},
                 {"best_trace", sg::trace_to_json(traces[best])},
                 {"mean_value", mean},
                 {"delta_k", delta_k}};
  if (a.stochastic_eps) {
    const int k = inst.constraint->rank();
    result["sample_size"] = sg::stochastic_sample_size(
        inst.objective->size(), k, *a.stochastic_eps);
  }
  if (a.verify_small) {
    const sg::OptimalSet opt =
        sg::brute_force_opt(*inst.objective, *inst.constraint, inst.theta);
    double factor = 1.0 - 1.0 / std::numbers::e;
    std::string form = "(1-1/e) OPT - delta K";
    if (inst.constraint->kind() == "partition") {
      factor = 0.5;
      form = "OPT/2 - delta K";
    }
    if (a.stochastic_eps) {
      factor -= *a.stochastic_eps;
      form = "(1-1/e-eps) OPT - delta K";
    }
    json verify = {{"opt_set", set_json(*inst.objective, opt.set)},
                   {"opt_value", opt.value},
                   {"bound_form", form},
                   {"bound", factor * opt.value - delta_k}};
    if (inst.objective->size() <= sg::EnumerationCaps{}.max_n &&
        inst.constraint->rank() <= sg::EnumerationCaps{}.max_rank) {
      const auto dist =
          a.stochastic_eps
              ? sg::enumerate_stochastic_distribution(
                    *inst.objective, *inst.constraint, *reg, inst.theta,
                    result["sample_size"].get<int>())
              : sg::enumerate_output_distribution(
                    *inst.objective, *inst.constraint, *reg, inst.theta);
      const double exact = sg::exact_expectation(
          sg::Quantity::objective_value(*inst.objective, inst.theta),
          dist)[0];
      verify["exact_mean_value"] = exact;
      verify["bound_holds"] = exact >= verify["bound"].get<double>() - 1e-10;
    }
    result["verify"] = verify;
  }
  result["wall_seconds"] = seconds_since(start);
  emit(a.out, result.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct SensitivityArgs {
  std::string instance;
  std::string regularizer = "entropy";
  double epsilon = 0.2;
  int samples = 1000;
  uint64_t seed = 0;
  std::string baseline = "running-mean";
  bool exact = false;
  int threads = 0;
  std::string out;
};

int run_sensitivity(const SensitivityArgs& a) {
  const auto start = Clock::now();
  const sg::Instance inst = sg::load_instance(a.instance);
  const auto reg = sg::make_regularizer(a.regularizer, a.epsilon);
  const auto& obj = *inst.objective;

  std::vector<std::string> rows;
  for (int v = 0; v < obj.size(); ++v) rows.push_back(obj.label(v));
  const std::vector<std::string> cols = sg::theta_labels(obj);

  json config = {{"instance", a.instance},
                 {"regularizer", a.regularizer},
                 {"epsilon", a.epsilon},
                 {"exact", a.exact}};
  json meta = {{"command", "sensitivity"}};
  Eigen::MatrixXd jac;
  if (a.exact) {
    jac = sg::exact_gradient(sg::Quantity::indicator(obj.size()), obj,
                             *inst.constraint, *reg, inst.theta);
  } else {
    sg::EstimatorConfig cfg;
    cfg.samples = a.samples;
    cfg.baseline = sg::parse_baseline(a.baseline);
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    const sg::GradientEstimate est =
        sg::sensitivity_jacobian(obj, *inst.constraint, *reg, inst.theta, cfg);
    jac = est.estimate;
    config["samples"] = a.samples;
    config["seed"] = a.seed;
    config["baseline"] = a.baseline;
    meta["std_error"] = matrix_json(est.std_error);
    meta["inclusion_probability"] =
        std::vector<double>(est.mean_quantity.data(),
                            est.mean_quantity.data() + est.mean_quantity.size());
  }
  meta["config"] = config;
  meta["seed"] = a.seed;
  meta["rows"] = rows;
  meta["columns"] = cols;
  meta["wall_seconds"] = seconds_since(start);
  emit(a.out, sg::matrix_to_csv(jac, rows, cols, "element"));
  emit_sidecar(a.out, meta);
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  sg::SyntheticDflConfig data;
  sg::TrainConfig train;
  int k = 5;
  std::string regularizer = "entropy";
  double epsilon = 0.2;
  std::string baseline = "running-mean";
  std::string scope = "per-call";
  int random_draws = 200;
  std::string out;
};

int run_train_dfl(TrainArgs a) {
  const auto start = Clock::now();
  a.train.baseline = sg::parse_baseline(a.baseline);
  if (a.scope == "per-call") {
    a.train.baseline_scope = sg::BaselineScope::kPerCall;
  } else if (a.scope == "global") {
    a.train.baseline_scope = sg::BaselineScope::kGlobal;
  } else {
    throw sg::ConfigError("unknown baseline scope '" + a.scope + "'");
  }
  a.data.seed = a.train.seed;
  const sg::DflData data = sg::make_synthetic_dfl(a.data);
  const sg::BipartiteInfluence objective(a.data.items, a.data.targets);
  const sg::CardinalityConstraint constraint(a.data.items, a.k);
  const auto reg = sg::make_regularizer(a.regularizer, a.epsilon);
  const sg::TrainResult result =
      sg::train_decision_focused(data, objective, constraint, *reg, a.train);
  const double random = sg::random_decision_quality(
      data.test, objective, constraint, a.random_draws, a.train.seed);

  std::string csv = "epoch,train_value,test_value,loss_estimate,wall_seconds\n";
  for (const auto& r : result.history) {
    csv += std::to_string(r.epoch) + "," + sg::format_double(r.train_value) +
           "," + sg::format_double(r.test_value) + "," +
           sg::format_double(r.loss_estimate) + "," +
           sg::format_double(r.wall_seconds) + "\n";
  }
  const json config = {{"seed", a.train.seed},
                       {"items", a.data.items},
                       {"targets", a.data.targets},
                       {"feature_dim", a.data.feature_dim},
                       {"train", a.data.train},
                       {"test", a.data.test},
                       {"k", a.k},
                       {"regularizer", a.regularizer},
                       {"epsilon", a.epsilon},
                       {"epochs", a.train.epochs},
                       {"batch_size", a.train.batch_size},
                       {"samples", a.train.samples},
                       {"baseline", a.baseline},
                       {"baseline_scope", a.scope},
                       {"hidden", a.train.hidden},
                       {"learning_rate", a.train.adam.learning_rate},
                       {"random_draws", a.random_draws}};
  emit(a.out, csv);
  emit_sidecar(a.out, {{"command", "train-dfl"},
                       {"config", config},
                       {"seed", a.train.seed},
                       {"random_test_value", random},
                       {"wall_seconds", seconds_since(start)}});
  return 0;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  sg::OracleLearnConfig learn;
  uint64_t instance_seed = 0;
  double epsilon = 0.02;
  std::string baseline = "none";
  int random_draws = 200;
  std::string out;
};

int run_oracle_learn(OracleArgs a) {
  const auto start = Clock::now();
  a.learn.baseline = sg::parse_baseline(a.baseline);
  const sg::CoverageInstance target =
      sg::make_leadership_coverage(a.instance_seed);
  const sg::ParamVector weights = target.objective.default_weights();
  const sg::SetOracle oracle = [&](std::span<const sg::Element> set) {
    return target.objective.eval(set, weights);
  };
  const sg::DeepSubmodular model(target.objective.size(), a.learn.hidden);
  const sg::EntropyRegularizer reg(a.epsilon);
  const sg::OracleLearnResult result =
      sg::learn_with_oracle_queries(oracle, model, target.constraint, reg,
                                    a.learn);
  const double random = sg::random_set_value(oracle, target.constraint,
                                             a.random_draws, a.learn.seed);

  std::string csv = "round,model_value,true_value,wall_seconds\n";
  for (const auto& r : result.history) {
    csv += std::to_string(r.round) + "," + sg::format_double(r.model_value) +
           "," + sg::format_double(r.true_value) + "," +
           sg::format_double(r.wall_seconds) + "\n";
  }
  const json config = {{"seed", a.learn.seed},
                       {"instance_seed", a.instance_seed},
                       {"rounds", a.learn.rounds},
                       {"samples", a.learn.samples},
                       {"baseline", a.baseline},
                       {"noisy", a.learn.noisy},
                       {"hidden", a.learn.hidden},
                       {"epsilon", a.epsilon},
                       {"learning_rate", a.learn.adam.learning_rate},
                       {"random_draws", a.random_draws}};
  emit(a.out, csv);
  emit_sidecar(a.out, {{"command", "oracle-learn"},
                       {"config", config},
                       {"seed", a.learn.seed},
                       {"random_true_value", random},
                       {"wall_seconds", seconds_since(start)}});
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  sg::VerifyOptions options;
  std::string out;
};

int run_verify(VerifyArgs a) {
  const auto start = Clock::now();
  a.options.on_result = [](const sg::CheckResult& r) {
    std::fprintf(stderr, "%s  %2d  %s: %s\n", r.passed ? "PASS" : "FAIL",
                 r.id, r.name.c_str(), r.detail.c_str());
  };
  const auto results = sg::run_acceptance_suite(a.options);
  json report = sg::report_to_json(results);
  report["command"] = "verify";
  report["seed"] = a.options.seed;
  report["config"] = {{"seed", a.options.seed},
                      {"only", a.options.only},
                      {"perturb_jacobian", a.options.jacobian_perturbation}};
  report["wall_seconds"] = seconds_since(start);
  emit(a.out, report.dump(2) + "\n");
  return report["passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentiable smoothed greedy submodular maximization"};
  app.require_subcommand(1);

  MaximizeArgs max_args;
  auto* maximize =
      app.add_subcommand("maximize", "Sample smoothed greedy solutions");
  maximize->add_option("--instance", max_args.instance, "Instance JSON file")
      ->required();
  maximize->add_option("--k", max_args.k,
                       "Replace the instance constraint by |S| <= k");
  maximize->add_option("--regularizer", max_args.regularizer)
      ->check(CLI::IsMember({"entropy", "quadratic"}));
  maximize->add_option("--epsilon", max_args.epsilon);
  maximize->add_option("--samples", max_args.samples);
  maximize->add_option("--stochastic-eps", max_args.stochastic_eps,
                       "Use candidate subsampling with this accuracy");
  maximize->add_option("--seed", max_args.seed);
  maximize->add_option("--threads", max_args.threads);
  maximize->add_flag("--verify-small", max_args.verify_small,
                     "Compare against the brute-force optimum");
  maximize->add_option("--out", max_args.out, "Output file (default stdout)");

  SensitivityArgs sens_args;
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "Jacobian of inclusion probabilities w.r.t. theta");
  sensitivity->add_option("--instance", sens_args.instance)->required();
  sensitivity->add_option("--regularizer", sens_args.regularizer)
      ->check(CLI::IsMember({"entropy", "quadratic"}));
  sensitivity->add_option("--epsilon", sens_args.epsilon);
  sensitivity->add_option("--samples", sens_args.samples);
  sensitivity->add_option("--seed", sens_args.seed);
  sensitivity->add_option("--baseline", sens_args.baseline)
      ->check(CLI::IsMember({"none", "running-mean"}));
  sensitivity->add_flag("--exact", sens_args.exact,
                        "Enumerate the output distribution instead");
  sensitivity->add_option("--threads", sens_args.threads);
  sensitivity->add_option("--out", sens_args.out, "CSV file (default stdout)");

  TrainArgs train_args;
  auto* train = app.add_subcommand(
      "train-dfl", "Decision-focused training on synthetic influence data");
  train->add_option("--seed", train_args.train.seed);
  train->add_option("--items", train_args.data.items);
  train->add_option("--targets", train_args.data.targets);
  train->add_option("--feature-dim", train_args.data.feature_dim);
  train->add_option("--train", train_args.data.train);
  train->add_option("--test", train_args.data.test);
  train->add_option("--k", train_args.k);
  train->add_option("--regularizer", train_args.regularizer)
      ->check(CLI::IsMember({"entropy", "quadratic"}));
  train->add_option("--epsilon", train_args.epsilon);
  train->add_option("--epochs", train_args.train.epochs);
  train->add_option("--batch-size", train_args.train.batch_size);
  train->add_option("--samples", train_args.train.samples);
  train->add_option("--baseline", train_args.baseline)
      ->check(CLI::IsMember({"none", "running-mean"}));
  train->add_option("--baseline-scope", train_args.scope)
      ->check(CLI::IsMember({"per-call", "global"}));
  train->add_option("--hidden", train_args.train.hidden);
  train->add_option("--learning-rate", train_args.train.adam.learning_rate);
  train->add_option("--random-draws", train_args.random_draws);
  train->add_option("--threads", train_args.train.threads);
  train->add_option("--out", train_args.out, "History CSV (default stdout)");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand(
      "oracle-learn", "Learn a deep submodular model from set-value queries");
  oracle->add_option("--seed", oracle_args.learn.seed);
  oracle->add_option("--instance-seed", oracle_args.instance_seed,
                     "Seed of the target coverage instance");
  oracle->add_option("--rounds", oracle_args.learn.rounds);
  oracle->add_option("--samples", oracle_args.learn.samples);
  oracle->add_option("--baseline", oracle_args.baseline)
      ->check(CLI::IsMember({"none", "running-mean"}));
  oracle->add_flag("--noisy", oracle_args.learn.noisy,
                   "Add standard normal noise to query answers");
  oracle->add_option("--hidden", oracle_args.learn.hidden);
  oracle->add_option("--epsilon", oracle_args.epsilon);
  oracle->add_option("--learning-rate", oracle_args.learn.adam.learning_rate);
  oracle->add_option("--random-draws", oracle_args.random_draws);
  oracle->add_option("--threads", oracle_args.learn.threads);
  oracle->add_option("--out", oracle_args.out, "History CSV (default stdout)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_option("--seed", verify_args.options.seed);
  verify->add_option("--only", verify_args.options.only,
                     "Criterion ids to run");
  verify->add_option("--perturb-jacobian",
                     verify_args.options.jacobian_perturbation,
                     "Offset added to regularizer Jacobians (test hook)");
  verify->add_option("--threads", verify_args.options.threads);
  verify->add_option("--out", verify_args.out, "Report JSON (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*maximize) return run_maximize(max_args);
    if (*sensitivity) return run_sensitivity(sens_args);
    if (*train) return run_train_dfl(train_args);
    if (*oracle) return run_oracle_learn(oracle_args);
    if (*verify) return run_verify(verify_args);
  } catch (const sg::CapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const sg::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const sg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
