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

#ifndef SMOOTHGREEDY_VERIFY_H_
#define SMOOTHGREEDY_VERIFY_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "smoothgreedy/constraints.h"
#include "smoothgreedy/objectives.h"
#include "smoothgreedy/regularizers.h"
#include "smoothgreedy/rng.h"

namespace smoothgreedy {

// A small random problem for the brute-force checks.
struct RandomProblem {
  std::unique_ptr<SubmodularObjective> objective;
  std::unique_ptr<ConstraintSystem> constraint;
  ParamVector theta;
};

enum class ObjectiveKind { kInfluence, kCoverage, kDeep };

// Random objective on n elements with parameters drawn inside the open
// domain (link probabilities in [0.05, 0.95], positive weights).
std::unique_ptr<SubmodularObjective> random_objective(ObjectiveKind kind,
                                                      int n, RngStream& rng);
ParamVector random_theta(const SubmodularObjective& obj, RngStream& rng);
RandomProblem random_cardinality_problem(ObjectiveKind kind, int n, int k,
                                         RngStream& rng);
// Random partition of n elements into 2 or 3 blocks with capacities 1-2,
// keeping the rank at most max_rank.
RandomProblem random_partition_problem(ObjectiveKind kind, int n,
                                       int max_rank, RngStream& rng);

// Wraps a regularizer and shifts every Jacobian entry by `offset`. Used to
// confirm that the derivative checks catch a wrong Jacobian.
class PerturbedRegularizer final : public Regularizer {
 public:
  PerturbedRegularizer(const Regularizer& base, double offset)
      : base_(base), offset_(offset) {}

  std::string kind() const override { return base_.kind(); }
  double epsilon() const override { return base_.epsilon(); }
  SimplexSolution solve(const Eigen::VectorXd& g) const override {
    return base_.solve(g);
  }
  SimplexJacobian jacobian(const SimplexSolution& sol) const override;
  double delta_bound(int n_k) const override {
    return base_.delta_bound(n_k);
  }
  double value(const Eigen::VectorXd& p) const override {
    return base_.value(p);
  }

 private:
  const Regularizer& base_;
  double offset_;
};

// Smallest distance of a solution from a support change (p_i for support
// entries, lambda_i / (2 eps) for the rest). Large values mean finite
// differences of the solution map are well defined.
double kink_distance(const SimplexSolution& sol, double epsilon);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  // Worst-case slack of the check (>= 0 when passing), in the check's units.
  double margin = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  uint64_t seed = 20201206;
  // Test hook: shifts every regularizer Jacobian entry in the derivative
  // checks.
  double jacobian_perturbation = 0.0;
  // Criteria to run (1-based ids); empty runs all.
  std::vector<int> only;
  int threads = 0;
  std::function<void(const CheckResult&)> on_result;
};

int acceptance_criteria_count();
std::string acceptance_criterion_name(int id);
CheckResult run_acceptance_criterion(int id, const VerifyOptions& options);
std::vector<CheckResult> run_acceptance_suite(const VerifyOptions& options);

nlohmann::json report_to_json(const std::vector<CheckResult>& results);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_VERIFY_H_
