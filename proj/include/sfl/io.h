// Copyright 2026 The SFL Authors.
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

// JSON encodings of instances, solutions, trees and solver traces.
//
// Instance:
//   {"n": 2, "m": 1, "metric": [[...], ...],
//    "oracle": {"kind": "uniform", "cost": 1.0},
//    "mult_weights": [...], "add_weights": [...],
//    "conn_multipliers": [...], "open_scale": 1.0}
// The oracle object is one of
//   {"kind": "uniform", "cost": c}
//   {"kind": "coverage", "universe_weights": [...], "sets": [[...], ...]}
//   {"kind": "hypercube", "dim": d}
//   {"kind": "independent_activation", "probs": [...]}
// optionally with "ground_ids" for an oracle restricted to a client subset
// ("ground_size" for uniform oracles).

#ifndef SFL_IO_H_
#define SFL_IO_H_

#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sfl/baselines.h"
#include "sfl/common.h"
#include "sfl/conf_lp.h"
#include "sfl/frt.h"
#include "sfl/instance.h"
#include "sfl/oracle.h"
#include "sfl/pipeline.h"
#include "sfl/sampling.h"

namespace sfl {

using Json = nlohmann::json;

// Instances with more points are loaded without the cubic triangle scan.
inline constexpr int kTriangleCheckMaxPoints = 1024;

inline Json OracleToJson(const SubmodularOracle& g) {
  Json j;
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, UniformFamily>) {
          j = {{"kind", "uniform"}, {"cost", fam.cost}};
        } else if constexpr (std::is_same_v<T, CoverageFamily>) {
          j = {{"kind", "coverage"},
               {"universe_weights", fam.universe_weights},
               {"sets", fam.sets}};
        } else if constexpr (std::is_same_v<T, HypercubeFamily>) {
          j = {{"kind", "hypercube"}, {"dim", fam.dim}};
        } else {
          j = {{"kind", "independent_activation"}, {"probs", fam.probs}};
        }
      },
      g.family());
  if (g.kind() == "uniform") {
    j["ground_size"] = g.ground_size();
  } else if (!g.ground_ids().empty()) {
    j["ground_ids"] = g.ground_ids();
  }
  return j;
}

inline SubmodularOracle OracleFromJson(const Json& j, int uniform_ground) {
  const std::string kind = j.at("kind").get<std::string>();
  SubmodularOracle g = SubmodularOracle::Uniform(0, 0.0);
  if (kind == "uniform") {
    const int ground = j.contains("ground_size") ? j.at("ground_size").get<int>()
                                                 : uniform_ground;
    g = SubmodularOracle::Uniform(ground, j.at("cost").get<double>());
  } else if (kind == "coverage") {
    g = SubmodularOracle::Coverage(
        j.at("universe_weights").get<std::vector<double>>(),
        j.at("sets").get<std::vector<std::vector<int>>>());
  } else if (kind == "hypercube") {
    g = SubmodularOracle::Hypercube(j.at("dim").get<int>());
  } else if (kind == "independent_activation") {
    g = SubmodularOracle::IndependentActivation(
        j.at("probs").get<std::vector<double>>());
  } else {
    throw DomainError("json: unknown oracle kind '" + kind + "'");
  }
  if (j.contains("ground_ids") && kind != "uniform") {
    g = g.Restrict(j.at("ground_ids").get<std::vector<int>>());
  }
  return g;
}

inline Json InstanceToJson(const SflInstance& inst) {
  Json j;
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["metric"] = inst.metric.Rows();
  j["oracle"] = OracleToJson(inst.oracle);
  if (inst.mult_weights) j["mult_weights"] = *inst.mult_weights;
  if (inst.add_weights) j["add_weights"] = *inst.add_weights;
  if (inst.conn_multipliers) j["conn_multipliers"] = *inst.conn_multipliers;
  if (inst.open_scale != 1.0) j["open_scale"] = inst.open_scale;
  return j;
}

inline SflInstance InstanceFromJson(const Json& j) {
  try {
    SflInstance inst;
    inst.n = j.at("n").get<int>();
    inst.m = j.at("m").get<int>();
    const auto rows = j.at("metric").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) > kTriangleCheckMaxPoints) {
      std::vector<double> flat;
      flat.reserve(rows.size() * rows.size());
      for (const auto& row : rows) {
        if (row.size() != rows.size()) {
          throw DomainError("metric: matrix is not square");
        }
        flat.insert(flat.end(), row.begin(), row.end());
      }
      inst.metric = Metric::Trusted(static_cast<int>(rows.size()), std::move(flat));
    } else {
      inst.metric = Metric::FromRows(rows);
    }
    inst.oracle = OracleFromJson(j.at("oracle"), inst.n);
    auto opt_vec = [&](const char* key) -> std::optional<std::vector<double>> {
      if (!j.contains(key)) return std::nullopt;
      return j.at(key).get<std::vector<double>>();
    };
    inst.mult_weights = opt_vec("mult_weights");
    inst.add_weights = opt_vec("add_weights");
    inst.conn_multipliers = opt_vec("conn_multipliers");
    if (j.contains("open_scale")) inst.open_scale = j.at("open_scale").get<double>();
    inst.Validate();
    return inst;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("json: malformed instance: ") + e.what());
  }
}

inline Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DomainError("cannot parse '" + path + "': " + e.what());
  }
}

inline void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

inline SflInstance ReadInstanceFile(const std::string& path) {
  return InstanceFromJson(ReadJsonFile(path));
}

inline Json FractionalToJson(const FractionalSolution& x) {
  Json cols = Json::array();
  for (const auto& c : x.columns) {
    cols.push_back({{"f", c.f}, {"R", c.R}, {"x", c.x}});
  }
  Json j = {{"columns", std::move(cols)}};
  j["objective"] = x.objective;
  return j;
}

inline FractionalSolution FractionalFromJson(const Json& j) {
  FractionalSolution x;
  for (const auto& c : j.at("columns")) {
    x.columns.push_back({c.at("f").get<int>(), c.at("R").get<ClientSet>(),
                         c.at("x").get<double>()});
  }
  x.Canonicalize();
  x.objective = j.at("objective").is_number() ? j.at("objective").get<double>()
                                              : std::numeric_limits<double>::quiet_NaN();
  return x;
}

inline Json AssignmentToJson(const PartialAssignment& s) { return s.sets; }

inline PartialAssignment AssignmentFromJson(const Json& j) {
  PartialAssignment s;
  s.sets = j.get<std::vector<ClientSet>>();
  return s;
}

inline Json CostToJson(const CostBreakdown& c) {
  return {{"conn", c.conn}, {"open", c.open}, {"total", c.total}};
}

inline Json HstToJson(const Hst& t, const FrtTrace* trace = nullptr) {
  Json leaves = Json::array();
  for (const auto& [point, node] : t.leaf_map) leaves.push_back({point, node});
  Json j = {{"depth", t.depth},
            {"parent", t.parent},
            {"level", t.level},
            {"leaf_of", std::move(leaves)}};
  if (trace != nullptr) {
    j["beta"] = trace->beta;
    j["permutation"] = trace->permutation;
  }
  return j;
}

inline Hst HstFromJson(const Json& j) {
  Hst t;
  t.depth = j.at("depth").get<int>();
  t.parent = j.at("parent").get<std::vector<int>>();
  t.level = j.at("level").get<std::vector<int>>();
  if (t.parent.size() != t.level.size() || t.parent.empty()) {
    throw DomainError("json: malformed tree");
  }
  t.children.assign(t.parent.size(), {});
  for (size_t v = 1; v < t.parent.size(); ++v) {
    const int p = t.parent[v];
    if (p < 0 || p >= static_cast<int>(v)) throw DomainError("json: malformed tree");
    t.children[p].push_back(static_cast<int>(v));
  }
  for (const auto& pair : j.at("leaf_of")) {
    t.leaf_map[pair.at(0).get<int>()] = pair.at(1).get<int>();
  }
  return t;
}

inline Json GreedyStepsToJson(const std::vector<GreedyStep>& steps) {
  Json j = Json::array();
  for (const auto& s : steps) {
    j.push_back({{"R", s.R},
                 {"f", s.f},
                 {"ratio", s.ratio},
                 {"open_delta", s.open_delta},
                 {"conn", s.conn},
                 {"tie_class", s.tie_class},
                 {"fresh", s.fresh}});
  }
  return j;
}

inline std::vector<GreedyStep> GreedyStepsFromJson(const Json& j) {
  std::vector<GreedyStep> steps;
  for (const auto& s : j) {
    GreedyStep step;
    step.R = s.at("R").get<ClientSet>();
    step.f = s.at("f").get<int>();
    step.ratio = s.at("ratio").get<double>();
    step.open_delta = s.at("open_delta").get<double>();
    step.conn = s.at("conn").get<double>();
    step.tie_class = s.at("tie_class").get<int>();
    step.fresh = s.at("fresh").get<bool>();
    steps.push_back(std::move(step));
  }
  return steps;
}

inline Json StageOneToJson(const StageOneResult& r) {
  Json sampled = Json::array();
  for (const auto& s : r.sampled) {
    sampled.push_back({{"round", s.round}, {"column", s.column}});
  }
  return {{"S1", r.S1.sets},
          {"C1", r.C1},
          {"rounds", r.rounds},
          {"seed", r.seed},
          {"sampled", std::move(sampled)}};
}

inline StageOneResult StageOneFromJson(const Json& j) {
  StageOneResult r;
  r.S1.sets = j.at("S1").get<std::vector<ClientSet>>();
  r.C1 = j.at("C1").get<ClientSet>();
  r.rounds = j.at("rounds").get<int>();
  r.seed = j.at("seed").get<uint64_t>();
  for (const auto& s : j.at("sampled")) {
    r.sampled.push_back({s.at("round").get<int>(), s.at("column").get<int>()});
  }
  return r;
}

inline Json SlacksToJson(const std::vector<Slack>& slacks) {
  Json j = Json::object();
  for (const auto& s : slacks) j[s.name] = s.value;
  return j;
}

inline Json PipelineToJson(const PipelineResult& r) {
  Json guesses = Json::array();
  for (const auto& g : r.guesses) {
    Json comps = Json::array();
    for (const auto& c : g.components) {
      comps.push_back({{"clients", c.clients},
                       {"facilities", c.facilities},
                       {"scale", c.scale},
                       {"lp_obj", c.lp_obj},
                       {"rounds", c.rounds},
                       {"stage_seed", c.stage_seed},
                       {"tree_seed", c.tree_seed},
                       {"stage_one_covered", c.stage_one_covered},
                       {"stage_one_cost", c.stage_one_cost},
                       {"residual_obj", c.residual_obj},
                       {"tree_depth", c.tree_depth},
                       {"open_x", c.open_x},
                       {"conn_x", c.conn_x},
                       {"cost_z", c.cost_z},
                       {"dla_cost", c.dla_cost},
                       {"dla_bound_factor", c.dla_bound_factor},
                       {"lift_conn", c.lift_conn},
                       {"total", c.total},
                       {"slacks", SlacksToJson(c.slacks)}});
    }
    Json gj = {{"L", g.L}, {"feasible", g.feasible}, {"components", comps}};
    if (g.feasible) gj["cost"] = CostToJson(g.cost);
    guesses.push_back(std::move(gj));
  }
  Json j = {{"assignment", AssignmentToJson(r.S)},
            {"cost", CostToJson(r.cost)},
            {"facilities_reduced", r.facilities_reduced},
            {"best_L", r.best_L},
            {"seed", r.seed},
            {"eps", r.eps},
            {"variant", VariantName(r.variant)},
            {"slacks", SlacksToJson(r.slacks)},
            {"guesses", std::move(guesses)}};
  j["lp_obj"] = r.lp_obj ? Json(*r.lp_obj) : Json(nullptr);
  return j;
}

}  // namespace sfl

#endif  // SFL_IO_H_
