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

// End-to-end approximation pipeline:
//
//   facility reduction (plain instances with m > n)
//   -> for every distance guess L: distance-range reduction, then per
//      component: configuration LP, sampling stage, residual LP solution,
//      tree embedding of the residual instance, DLA reduction, tree rounding,
//      lift and merge
//   -> the cheapest guess, mapped back to the input instance.

#ifndef SFL_PIPELINE_H_
#define SFL_PIPELINE_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfl/common.h"
#include "sfl/conf_lp.h"
#include "sfl/dla.h"
#include "sfl/frt.h"
#include "sfl/instance.h"
#include "sfl/reductions.h"
#include "sfl/sampling.h"

namespace sfl {

// The instance on the clients `keep` (ascending original ids) and every
// facility. Client k of the result is keep[k].
inline SflInstance RestrictClients(const SflInstance& inst,
                                   std::span<const int> keep) {
  std::vector<int> points(keep.begin(), keep.end());
  for (int f = 0; f < inst.m; ++f) points.push_back(inst.n + f);
  SflInstance out;
  out.n = static_cast<int>(keep.size());
  out.m = inst.m;
  out.metric = inst.metric.Sub(points);
  out.oracle = inst.oracle.Restrict(keep);
  out.mult_weights = inst.mult_weights;
  out.add_weights = inst.add_weights;
  if (inst.conn_multipliers) {
    std::vector<double> q;
    for (int c : keep) q.push_back((*inst.conn_multipliers)[c]);
    out.conn_multipliers = std::move(q);
  }
  out.open_scale = inst.open_scale;
  out.Validate();
  return out;
}

// Renames the clients of x through `local_of` (original id -> new id); every
// client of x must be mapped.
inline FractionalSolution RenameClients(const FractionalSolution& x,
                                        const std::vector<int>& local_of) {
  FractionalSolution out;
  out.objective = x.objective;
  for (const auto& col : x.columns) {
    FracColumn c{col.f, {}, col.x};
    for (int v : col.R) c.R.push_back(local_of[v]);
    Normalize(c.R);
    out.columns.push_back(std::move(c));
  }
  out.Canonicalize();
  return out;
}

struct PipelineOptions {
  uint64_t seed = 0;
  double eps = 0.1;
  std::optional<double> fix_L;
};

// Named slack of an asserted inequality (non-negative when it holds).
struct Slack {
  std::string name;
  double value = 0.0;
};

struct ComponentAudit {
  int clients = 0;
  int facilities = 0;
  double scale = 1.0;
  double lp_obj = 0.0;  // in component units
  int rounds = 0;
  uint64_t stage_seed = 0;
  uint64_t tree_seed = 0;
  int stage_one_covered = 0;
  double stage_one_cost = 0.0;
  double residual_obj = 0.0;
  int tree_depth = 0;
  double open_x = 0.0;
  double conn_x = 0.0;
  double cost_z = 0.0;
  double dla_cost = 0.0;
  double dla_bound_factor = 1.0;
  double lift_conn = 0.0;
  double total = 0.0;  // merged cost in component units
  std::vector<Slack> slacks;
};

struct GuessAudit {
  double L = 0.0;
  bool feasible = false;
  std::vector<ComponentAudit> components;
  CostBreakdown cost;  // in the input instance
};

struct PipelineResult {
  PartialAssignment S;
  CostBreakdown cost;
  std::optional<double> lp_obj;  // LP optimum of the input instance
  bool facilities_reduced = false;
  double best_L = 0.0;
  uint64_t seed = 0;
  double eps = 0.0;
  DlaVariant variant = DlaVariant::kPlain;
  std::vector<GuessAudit> guesses;
  std::vector<Slack> slacks;
};

namespace internal {

inline constexpr uint64_t kStageTag = 0x53414d50;  // sampling stage
inline constexpr uint64_t kTreeTag = 0x54524545;   // tree embedding

struct ComponentSolution {
  PartialAssignment S;  // component-local ids
  ComponentAudit audit;
};

inline ComponentSolution SolveComponent(const SflInstance& inst,
                                        DlaVariant variant,
                                        uint64_t stage_seed,
                                        uint64_t tree_seed) {
  ComponentSolution out;
  ComponentAudit& a = out.audit;
  a.clients = inst.n;
  a.facilities = inst.m;
  a.stage_seed = stage_seed;
  a.tree_seed = tree_seed;

  const ConfLpResult lp = SolveConfLp(inst, LpMode::kColgen);
  a.lp_obj = lp.x.objective;

  const StageOneResult s1 = StageOne(inst, lp.x, stage_seed);
  a.rounds = s1.rounds;
  a.stage_one_covered = static_cast<int>(s1.C1.size());
  a.stage_one_cost = Cost(inst, s1.S1).total;
  const FractionalSolution x2 = Residual(inst, lp.x, s1.C1);
  a.residual_obj = x2.objective;

  ClientSet rest;
  std::vector<int> local_of(inst.n, -1);
  for (int c = 0; c < inst.n; ++c) {
    if (!Contains(s1.C1, c)) {
      local_of[c] = static_cast<int>(rest.size());
      rest.push_back(c);
    }
  }
  PartialAssignment s2(inst.m);
  if (!rest.empty()) {
    const SflInstance sub = RestrictClients(inst, rest);
    const FractionalSolution xs = RenameClients(x2, local_of);
    std::vector<int> points(sub.n + sub.m);
    std::iota(points.begin(), points.end(), 0);
    const Hst tree = FrtEmbed(sub.metric, points, tree_seed);
    a.tree_depth = tree.depth;
    const DlaReduction red = ReduceToDla(sub, tree, xs);
    a.open_x = red.open_x;
    for (double v : red.conn_x) a.conn_x += v;
    a.cost_z = red.cost_z;
    const DlaRounding rounding = RoundDla(red.dla, red.z, variant);
    a.dla_cost = rounding.cost;
    a.dla_bound_factor = rounding.bound_factor;
    const LiftResult lift = LiftToSfl(sub, red, rounding.S);
    a.lift_conn = lift.conn_tree;

    double conn_slack = std::numeric_limits<double>::infinity();
    for (int c = 0; c < sub.n; ++c) {
      conn_slack = std::min(conn_slack, 3.0 * red.conn_x[c] - lift.client_conn[c]);
    }
    a.slacks.push_back({"dla_reduction_open", 2.0 * red.open_x - red.cost_z});
    a.slacks.push_back({"dla_rounding_cost",
                        rounding.bound_factor * red.cost_z - rounding.cost});
    a.slacks.push_back({"lift_connection", conn_slack});

    for (int f = 0; f < inst.m; ++f) {
      for (int k : lift.S.sets[f]) s2.sets[f].push_back(rest[k]);
    }
  }
  out.S = Merge(s1.S1, s2);
  SFL_CHECK_INVARIANT(out.S.IsFeasible(inst.n),
                      "pipeline: merged component assignment is infeasible");
  a.total = Cost(inst, out.S).total;
  const double merge_bound =
      a.stage_one_cost + Cost(inst, s2).total;
  a.slacks.push_back({"merge_subadditivity", merge_bound - a.total});
  SFL_CHECK_INVARIANT(a.total <= merge_bound + 1e-9 * (1.0 + merge_bound),
                      "pipeline: merge increased the cost");
  return out;
}

// One guess of L on the working instance; nullopt when the guess is
// infeasible.
inline std::optional<PartialAssignment> SolveGuess(const SflInstance& inst,
                                                   double L, double eps,
                                                   DlaVariant variant,
                                                   uint64_t seed,
                                                   uint64_t guess_index,
                                                   GuessAudit& audit) {
  audit.L = L;
  const auto reduction = ReduceDistanceRange(inst, eps, L);
  if (!reduction) return std::nullopt;
  PartialAssignment s(inst.m);
  for (size_t k = 0; k < reduction->components.size(); ++k) {
    const DistanceComponent& dc = reduction->components[k];
    const uint64_t stage_seed =
        SplitMix64::Stream(seed, kStageTag ^ guess_index, k).Next();
    const uint64_t tree_seed =
        SplitMix64::Stream(seed, kTreeTag ^ guess_index, k).Next();
    ComponentSolution part =
        SolveComponent(dc.inst, variant, stage_seed, tree_seed);
    part.audit.scale = dc.scale;
    for (int f = 0; f < dc.inst.m; ++f) {
      auto& dst = s.sets[dc.facilities[f]];
      for (int c : part.S.sets[f]) dst.push_back(dc.clients[c]);
    }
    audit.components.push_back(std::move(part.audit));
  }
  for (auto& set : s.sets) Normalize(set);
  audit.feasible = true;
  return s;
}

}  // namespace internal

inline PipelineResult PipelineSolve(const SflInstance& inst,
                                    const PipelineOptions& opt = {}) {
  inst.Validate();
  if (!(opt.eps > 0)) throw DomainError("pipeline: eps must be positive");
  if (opt.fix_L && !(*opt.fix_L > 0)) {
    throw DomainError("pipeline: fixed L must be positive");
  }
  PipelineResult out;
  out.seed = opt.seed;
  out.eps = opt.eps;
  out.variant = VariantFor(inst);
  out.S = PartialAssignment(inst.m);
  if (inst.n == 0) {
    out.cost = Cost(inst, out.S);
    out.lp_obj = 0.0;
    return out;
  }
  if (inst.m == 0) throw DomainError("pipeline: no facilities");
  if (inst.n > kMaxLpClients) {
    throw CapError("pipeline: at most " + std::to_string(kMaxLpClients) +
                   " clients");
  }

  std::optional<FacilityReduction> fred;
  if (inst.m > inst.n && inst.is_plain()) {
    fred = ReduceFacilities(inst);
    out.facilities_reduced = true;
  }
  const SflInstance& work = fred ? fred->reduced : inst;

  const std::vector<double> guesses =
      opt.fix_L ? std::vector<double>{*opt.fix_L} : DistanceGuesses(work);
  bool have = false;
  for (size_t g = 0; g < guesses.size(); ++g) {
    GuessAudit audit;
    auto s = internal::SolveGuess(work, guesses[g], opt.eps, out.variant,
                                  opt.seed, g, audit);
    if (s) {
      PartialAssignment mapped = fred ? MapBack(*fred, *s, inst.m) : *s;
      SFL_CHECK_INVARIANT(mapped.IsFeasible(inst.n),
                          "pipeline: assignment for a guess is infeasible");
      audit.cost = Cost(inst, mapped);
      if (!have || audit.cost.total < out.cost.total) {
        out.S = std::move(mapped);
        out.cost = audit.cost;
        out.best_L = guesses[g];
        have = true;
      }
    }
    out.guesses.push_back(std::move(audit));
  }
  if (!have) {
    throw DomainError("pipeline: no feasible distance guess (fixed L too small)");
  }

  out.lp_obj = SolveConfLp(inst, LpMode::kColgen).x.objective;
  out.slacks.push_back({"relaxation", out.cost.total - *out.lp_obj});
  SFL_CHECK_INVARIANT(out.cost.total >= *out.lp_obj - 1e-6,
                      "pipeline: total below the LP objective");
  return out;
}

}  // namespace sfl

#endif  // SFL_PIPELINE_H_
