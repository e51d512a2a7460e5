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

#include "smoothgreedy/instance_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "smoothgreedy/errors.h"

namespace smoothgreedy {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string(where) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

int require_int(const json& j, const char* key, const char* where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) {
    throw InputError(std::string(where) + ": field '" + key +
                     "' must be an integer");
  }
  return v.get<int>();
}

ParamVector to_vector(const json& j, const char* where) {
  if (!j.is_array()) {
    throw InputError(std::string(where) + " must be an array of numbers");
  }
  ParamVector out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw InputError(std::string(where) + "[" + std::to_string(i) +
                       "] is not a number");
    }
    out[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return out;
}

json from_vector(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::vector<std::vector<int>> to_int_lists(const json& j, const char* where) {
  if (!j.is_array()) throw InputError(std::string(where) + " must be an array");
  std::vector<std::vector<int>> out;
  for (const json& row : j) {
    if (!row.is_array()) {
      throw InputError(std::string(where) + " entries must be arrays");
    }
    std::vector<int> ints;
    for (const json& x : row) {
      if (!x.is_number_integer()) {
        throw InputError(std::string(where) + " entries must be integers");
      }
      ints.push_back(x.get<int>());
    }
    out.push_back(std::move(ints));
  }
  return out;
}

}  // namespace

std::unique_ptr<SubmodularObjective> objective_from_json(const json& j) {
  const std::string kind = require(j, "kind", "objective").get<std::string>();
  std::unique_ptr<SubmodularObjective> obj;
  if (kind == "bipartite_influence") {
    obj = std::make_unique<BipartiteInfluence>(
        require_int(j, "n", "objective"), require_int(j, "targets", "objective"));
  } else if (kind == "weighted_coverage") {
    ParamVector weights;
    if (j.contains("weights")) weights = to_vector(j.at("weights"), "weights");
    obj = std::make_unique<WeightedCoverage>(
        require_int(j, "universe", "objective"),
        to_int_lists(require(j, "cover_sets", "objective"), "cover_sets"),
        std::move(weights));
    if (j.contains("n") && j.at("n").get<int>() != obj->size()) {
      throw InputError("objective: n does not match the number of cover sets");
    }
  } else if (kind == "deep_submodular") {
    obj = std::make_unique<DeepSubmodular>(require_int(j, "n", "objective"),
                                           require_int(j, "hidden", "objective"));
  } else {
    throw InputError("objective: unknown kind '" + kind + "'");
  }
  if (j.contains("labels")) {
    obj->set_labels(j.at("labels").get<std::vector<std::string>>());
  }
  return obj;
}

json objective_to_json(const SubmodularObjective& obj) {
  json j;
  j["kind"] = obj.kind();
  j["n"] = obj.size();
  if (const auto* inf = dynamic_cast<const BipartiteInfluence*>(&obj)) {
    j["targets"] = inf->targets();
  } else if (const auto* cov = dynamic_cast<const WeightedCoverage*>(&obj)) {
    j["universe"] = cov->universe();
    j["cover_sets"] = cov->cover_sets();
    j["weights"] = from_vector(cov->default_weights());
  } else if (const auto* dsf = dynamic_cast<const DeepSubmodular*>(&obj)) {
    j["hidden"] = dsf->hidden();
  }
  if (!obj.labels().empty()) j["labels"] = obj.labels();
  return j;
}

std::unique_ptr<ConstraintSystem> constraint_from_json(const json& j, int n) {
  const std::string kind = require(j, "kind", "constraint").get<std::string>();
  if (kind == "cardinality") {
    return std::make_unique<CardinalityConstraint>(
        n, require_int(j, "k", "constraint"));
  }
  if (kind == "partition") {
    const auto blocks =
        to_int_lists(require(j, "blocks", "constraint"), "blocks");
    const json& caps_json = require(j, "caps", "constraint");
    std::vector<int> caps = caps_json.get<std::vector<int>>();
    if (caps.size() != blocks.size()) {
      throw InputError("constraint: blocks and caps differ in length");
    }
    std::vector<int> block_of(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (int v : blocks[b]) {
        if (v < 0 || v >= n) {
          throw InputError("constraint: block element out of range");
        }
        if (block_of[v] != -1) {
          throw InputError("constraint: element in two blocks");
        }
        block_of[v] = static_cast<int>(b);
      }
    }
    for (int v = 0; v < n; ++v) {
      if (block_of[v] == -1) {
        throw InputError("constraint: element " + std::to_string(v) +
                         " belongs to no block");
      }
    }
    return std::make_unique<PartitionMatroid>(std::move(block_of),
                                              std::move(caps));
  }
  throw InputError("constraint: unknown kind '" + kind + "'");
}

json constraint_to_json(const ConstraintSystem& constraint) {
  json j;
  j["kind"] = constraint.kind();
  if (const auto* card =
          dynamic_cast<const CardinalityConstraint*>(&constraint)) {
    j["k"] = card->k();
  } else if (const auto* part =
                 dynamic_cast<const PartitionMatroid*>(&constraint)) {
    std::vector<std::vector<int>> blocks(part->num_blocks());
    for (int v = 0; v < part->size(); ++v) {
      blocks[part->block_of()[v]].push_back(v);
    }
    j["blocks"] = blocks;
    j["caps"] = part->capacities();
  } else {
    throw ConfigError("constraint kind '" + constraint.kind() +
                      "' has no JSON form");
  }
  return j;
}

std::unique_ptr<Regularizer> regularizer_from_json(const json& j) {
  const std::string kind = require(j, "kind", "regularizer").get<std::string>();
  const json& eps = require(j, "epsilon", "regularizer");
  if (!eps.is_number()) throw InputError("regularizer: epsilon must be a number");
  return make_regularizer(kind, eps.get<double>());
}

json regularizer_to_json(const Regularizer& reg) {
  return {{"kind", reg.kind()}, {"epsilon", reg.epsilon()}};
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  try {
    Instance inst;
    inst.objective = objective_from_json(require(doc, "objective", "instance"));
    inst.constraint = constraint_from_json(
        require(doc, "constraint", "instance"), inst.objective->size());
    if (doc.contains("theta")) {
      inst.theta = to_vector(doc.at("theta"), "theta");
    } else if (const auto* cov =
                   dynamic_cast<const WeightedCoverage*>(inst.objective.get())) {
      inst.theta = cov->default_weights();
    } else {
      throw InputError("instance: missing field 'theta'");
    }
    inst.objective->validate_params(inst.theta);
    return inst;
  } catch (const json::exception& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(std::string("instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

json instance_to_json(const Instance& instance) {
  return {{"objective", objective_to_json(*instance.objective)},
          {"constraint", constraint_to_json(*instance.constraint)},
          {"theta", from_vector(instance.theta)}};
}

std::string write_instance(const Instance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

json trace_to_json(const GreedyTrace& trace) {
  json steps = json::array();
  for (const GreedyStep& step : trace.steps) {
    steps.push_back({{"candidates", step.candidates},
                     {"gains", from_vector(step.gains)},
                     {"probabilities", from_vector(step.solution.p)},
                     {"chosen", step.chosen()}});
  }
  return {{"sequence", trace.sequence},
          {"steps", steps},
          {"log_prob", trace.log_prob},
          {"delta", trace.delta},
          {"delta_k", trace.delta_k},
          {"seed", trace.seed},
          {"trial", trace.trial}};
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const Eigen::MatrixXd& matrix,
                          const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& col_labels,
                          const std::string& corner) {
  std::string out = corner;
  for (const auto& label : col_labels) out += "," + label;
  out += "\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    out += r < static_cast<Eigen::Index>(row_labels.size())
               ? row_labels[r]
               : std::to_string(r);
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      out += "," + format_double(matrix(r, c));
    }
    out += "\n";
  }
  return out;
}

Instance sensitivity_example() {
  Instance inst;
  inst.objective = std::make_unique<BipartiteInfluence>(3, 3);
  inst.objective->set_labels({"v1", "v2", "v3"});
  inst.constraint = std::make_unique<CardinalityConstraint>(3, 2);
  inst.theta.resize(9);
  inst.theta << 0.4, 0.4, 0.0,  //
      0.0, 0.4, 0.2,            //
      0.0, 0.0, 0.2;
  return inst;
}

std::vector<std::string> theta_labels(const SubmodularObjective& obj) {
  std::vector<std::string> labels;
  if (const auto* inf = dynamic_cast<const BipartiteInfluence*>(&obj)) {
    for (int v = 0; v < inf->size(); ++v) {
      for (int t = 0; t < inf->targets(); ++t) {
        labels.push_back("theta_" + std::to_string(v + 1) + "_" +
                         std::to_string(t + 1));
      }
    }
  } else {
    for (int i = 0; i < obj.param_dim(); ++i) {
      labels.push_back("theta_" + std::to_string(i + 1));
    }
  }
  return labels;
}

}  // namespace smoothgreedy
