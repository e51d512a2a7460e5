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

#ifndef SMOOTHGREEDY_INSTANCE_IO_H_
#define SMOOTHGREEDY_INSTANCE_IO_H_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "smoothgreedy/constraints.h"
#include "smoothgreedy/greedy.h"
#include "smoothgreedy/objectives.h"
#include "smoothgreedy/regularizers.h"

namespace smoothgreedy {

// A validated (objective, constraint, theta) triple.
//
// Instance documents look like
//   {"objective": {"kind": "bipartite_influence", "n": 3, "targets": 3},
//    "constraint": {"kind": "cardinality", "k": 2},
//    "theta": [0.4, 0.4, 0.0, ...]}
// Objective kinds:
//   bipartite_influence  n, targets, optional labels; theta row-major (v, t)
//   weighted_coverage    universe, cover_sets; theta = universe weights
//                        (defaults to "weights" or all ones when omitted)
//   deep_submodular      n, hidden; theta = W row-major (h, v), then a
// Constraint kinds:
//   cardinality          k
//   partition            blocks (list of element lists), caps
struct Instance {
  std::unique_ptr<SubmodularObjective> objective;
  std::unique_ptr<ConstraintSystem> constraint;
  ParamVector theta;
};

// Throws InputError; JSON syntax errors carry line and column.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

nlohmann::json objective_to_json(const SubmodularObjective& obj);
nlohmann::json constraint_to_json(const ConstraintSystem& constraint);
nlohmann::json instance_to_json(const Instance& instance);
// Canonical serialization: sorted keys, two-space indent, shortest
// round-trip doubles.
std::string write_instance(const Instance& instance);

std::unique_ptr<ConstraintSystem> constraint_from_json(const nlohmann::json& j,
                                                       int n);
std::unique_ptr<SubmodularObjective> objective_from_json(
    const nlohmann::json& j);
std::unique_ptr<Regularizer> regularizer_from_json(const nlohmann::json& j);
nlohmann::json regularizer_to_json(const Regularizer& reg);

nlohmann::json trace_to_json(const GreedyTrace& trace);

// CSV with a header row of column labels; the first column holds row labels
// under `corner`.
std::string matrix_to_csv(const Eigen::MatrixXd& matrix,
                          const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& col_labels,
                          const std::string& corner = "");

// Shortest decimal representation that round-trips.
std::string format_double(double x);

// Three items, three targets, K = 2, link probabilities 0.4 / 0.2 as in the
// standard sensitivity-analysis example.
Instance sensitivity_example();

// Column labels "theta[v,t]" for a bipartite influence objective, or
// "theta[i]" otherwise.
std::vector<std::string> theta_labels(const SubmodularObjective& obj);

}  // namespace smoothgreedy

#endif  // SMOOTHGREEDY_INSTANCE_IO_H_
