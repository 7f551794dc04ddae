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

// Descendant-Leaf Assignment (DLA): facilities sit at leaves of a rooted
// tree, each client sits at a node and must be served by a facility in its
// subtree, and only opening costs are paid. This header holds the reduction
// from an SFL instance embedded in an HST, the level-by-level rounding of a
// fractional DLA solution, and the lift back to SFL.

#ifndef SFL_DLA_H_
#define SFL_DLA_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfl/common.h"
#include "sfl/conf_lp.h"
#include "sfl/frt.h"
#include "sfl/instance.h"
#include "sfl/lovasz.h"
#include "sfl/oracle.h"

namespace sfl {

enum class DlaVariant { kPlain, kMult, kAdd };

inline const char* VariantName(DlaVariant v) {
  switch (v) {
    case DlaVariant::kPlain:
      return "plain";
    case DlaVariant::kMult:
      return "mult";
    case DlaVariant::kAdd:
      return "add";
  }
  return "plain";
}

// mult weights select the multiplicative variant and add weights the additive
// one. Both together form the affine variant, which is not supported.
inline DlaVariant VariantFor(const SflInstance& inst) {
  if (inst.mult_weights && inst.add_weights) {
    throw UnsupportedVariantError(
        "instances with both multiplicative and additive weights (affine "
        "costs) are not supported");
  }
  if (inst.mult_weights) return DlaVariant::kMult;
  if (inst.add_weights) return DlaVariant::kAdd;
  return DlaVariant::kPlain;
}

struct DlaInstance {
  Hst tree;
  int n = 0;
  int m = 0;
  std::vector<int> facility_leaf;  // leaf node of each facility
  std::vector<int> client_node;    // v(c)
  // Per-facility cost h_f(R) = scale (add_f + mult_f h(R)) on non-empty R.
  SubmodularOracle oracle = SubmodularOracle::Uniform(0, 0.0);
  std::vector<double> mult;
  std::vector<double> add;
  double scale = 1.0;
  // Facilities below each node, ascending.
  std::vector<std::vector<int>> facilities_under;

  OracleWrapper H(int f) const {
    return OracleWrapper(oracle, scale * mult[f], scale * add[f]);
  }

  // F~_c: facilities at leaves of the subtree rooted at v(c).
  const std::vector<int>& Admissible(int c) const {
    return facilities_under[client_node[c]];
  }

  bool IsAdmissible(int c, int f) const {
    return tree.IsAncestor(client_node[c], facility_leaf[f]);
  }

  void BuildIndex() {
    facilities_under.assign(tree.num_nodes(), {});
    for (int f = 0; f < m; ++f) {
      for (int v : tree.PathToRoot(facility_leaf[f])) {
        facilities_under[v].push_back(f);
      }
    }
    for (int c = 0; c < n; ++c) {
      SFL_CHECK_INVARIANT(!Admissible(c).empty(),
                          "dla: client with no admissible facility");
    }
  }
};

// z[f][c]: per-facility fractional vectors over clients.
using DlaFractional = std::vector<std::vector<double>>;

inline double DlaCost(const DlaInstance& dla, const DlaFractional& z) {
  double total = 0.0;
  for (int f = 0; f < dla.m; ++f) total += Lovasz(dla.H(f), z[f]);
  return total;
}

inline double DlaCost(const DlaInstance& dla, const PartialAssignment& s) {
  double total = 0.0;
  for (int f = 0; f < dla.m; ++f) total += dla.H(f)(s.sets[f]);
  return total;
}

inline bool IsDlaFeasible(const DlaInstance& dla, const DlaFractional& z,
                          double tol = 1e-9) {
  for (int c = 0; c < dla.n; ++c) {
    double mass = 0.0;
    for (int f = 0; f < dla.m; ++f) {
      const double v = z[f][c];
      if (v < -tol || v > 1 + tol) return false;
      if (v != 0.0 && !dla.IsAdmissible(c, f)) return false;
      mass += v;
    }
    if (std::abs(mass - 1.0) > tol) return false;
  }
  return true;
}

inline bool IsDlaFeasible(const DlaInstance& dla, const PartialAssignment& s) {
  if (!s.IsFeasible(dla.n)) return false;
  for (int f = 0; f < dla.m; ++f) {
    for (int c : s.sets[f]) {
      if (!dla.IsAdmissible(c, f)) return false;
    }
  }
  return true;
}

inline constexpr double kAnchorMass = 0.5;

struct DlaReduction {
  DlaInstance dla;
  DlaFractional z;
  DlaFractional y;             // y[f][c] = sum of x over columns (f, R), c in R
  std::vector<double> conn_x;  // per client: sum_f d(c,f) mult(c) y[f][c]
  double open_x = 0.0;
  double cost_z = 0.0;
};

// Builds the DLA instance of an SFL instance whose points are embedded in
// `tree` (client c is point c, facility f is point n + f), together with the
// normalized solution z. The connection cost of `x` is measured in `tree`.
inline DlaReduction ReduceToDla(const SflInstance& inst, const Hst& tree,
                                const FractionalSolution& x) {
  if (!IsLpFeasible(x, inst.n, inst.m)) {
    throw DomainError("reduce_to_dla: infeasible fractional solution");
  }
  const int n = inst.n;
  const int m = inst.m;
  DlaReduction out;
  DlaInstance& dla = out.dla;
  dla.tree = tree;
  dla.n = n;
  dla.m = m;
  dla.oracle = inst.oracle;
  dla.scale = inst.open_scale;
  dla.mult.resize(m);
  dla.add.resize(m);
  dla.facility_leaf.resize(m);
  for (int f = 0; f < m; ++f) {
    dla.mult[f] = inst.MultWeight(f);
    dla.add[f] = inst.AddWeight(f);
    dla.facility_leaf[f] = tree.LeafOf(n + f);
  }
  dla.facilities_under.assign(tree.num_nodes(), {});
  for (int f = 0; f < m; ++f) {
    for (int v : tree.PathToRoot(dla.facility_leaf[f])) {
      dla.facilities_under[v].push_back(f);
    }
  }

  out.y.assign(m, std::vector<double>(n, 0.0));
  for (const auto& col : x.columns) {
    for (int c : col.R) out.y[col.f][c] += col.x;
  }
  out.z.assign(m, std::vector<double>(n, 0.0));
  out.conn_x.assign(n, 0.0);
  dla.client_node.assign(n, -1);
  for (int c = 0; c < n; ++c) {
    const int leaf = tree.LeafOf(c);
    for (int f = 0; f < m; ++f) {
      out.conn_x[c] += tree.NodeDistance(leaf, dla.facility_leaf[f]) *
                       inst.ConnMult(c) * out.y[f][c];
    }
    for (int v : tree.PathToRoot(leaf)) {
      double mass = 0.0;
      for (int f : dla.facilities_under[v]) mass += out.y[f][c];
      if (mass >= kAnchorMass - kEpsNum) {
        dla.client_node[c] = v;
        for (int f : dla.facilities_under[v]) {
          out.z[f][c] = std::min(1.0, out.y[f][c] / mass);
        }
        break;
      }
    }
    SFL_CHECK_INVARIANT(dla.client_node[c] >= 0,
                        "reduce_to_dla: client without an anchor");
  }
  dla.BuildIndex();

  out.open_x = FracCost(inst, x).open;
  out.cost_z = DlaCost(dla, out.z);
  SFL_CHECK_INVARIANT(
      out.cost_z <= 2.0 * out.open_x + 1e-9 * (1.0 + out.open_x),
      "reduce_to_dla: cost_DLA(z) exceeds twice the LP opening cost");
  return out;
}

// Smallest candidate theta (ascending) such that L_theta(z) is
// (alpha/32)-supported:
//
//   h^(z) - h^(min(z, theta)) >= (alpha / 32) h(L_theta(z)).
//
// Candidates are 0, every distinct entry b of z, and b + 2^-40 (b' - b) for
// consecutive distinct values b < b' of {0} and the entries of z.
template <typename SetFn>
std::optional<double> SupportedTheta(const SetFn& h, std::span<const double> z,
                                     double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("supported_theta: alpha must lie in (0, 1]");
  }
  std::vector<double> points = {0.0};
  for (double v : z) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("supported_theta: component outside [0,1]");
    }
    points.push_back(v);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<double> candidates = points;
  const double delta = std::ldexp(1.0, -40);
  for (size_t k = 0; k + 1 < points.size(); ++k) {
    candidates.push_back(points[k] + delta * (points[k + 1] - points[k]));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  const double full = Lovasz(h, z);
  for (double theta : candidates) {
    const double lhs = full - LovaszTruncated(h, z, theta);
    const ClientSet level = LevelSet(z, theta);
    const double rhs = alpha / 32.0 * h(std::span<const int>(level));
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (lhs - rhs >= -kEpsNum * scale) return theta;
  }
  return std::nullopt;
}

struct DlaStep {
  int iteration = 0;  // i: nodes at level D - i
  int node = 0;
  int facility = 0;   // f_v
  std::optional<double> theta;
  ClientSet added;
  double cost_before_merge = 0.0;
  double cost_after_merge = 0.0;
  double cost_after_commit = 0.0;
};

struct DlaRounding {
  PartialAssignment S;
  double cost = 0.0;          // cost_DLA(S)
  double cost_z = 0.0;        // cost_DLA of the input z
  double bound_factor = 1.0;  // 1 + 32 log2(D + 1)
  double alpha = 1.0;
  std::vector<DlaStep> trace;
};

// Rounds a feasible fractional DLA solution level by level, bottom-up:
// mass under each node is merged into one representative facility f_v, a
// supported level set of z^{f_v} is committed if one exists, and otherwise
// the clients with z^{f_v}_c = 1 are. Each client then keeps the smallest
// admissible facility holding it.
//
// f_v is the smallest facility id in the plain variant and the one of minimum
// weight (smallest id on ties) in the weighted variants. Supportedness is
// tested against h_{f_v} with alpha = 1 / log2(D + 1). A depth-0 tree assigns
// every client to the facility minimizing h_f(all clients).
inline DlaRounding RoundDla(const DlaInstance& dla, DlaFractional z,
                            DlaVariant variant) {
  if (!IsDlaFeasible(dla, z)) {
    throw DomainError("round_dla: infeasible fractional solution");
  }
  const int n = dla.n;
  const int m = dla.m;
  const int D = dla.tree.depth;
  DlaRounding out;
  out.S = PartialAssignment(m);
  out.cost_z = DlaCost(dla, z);
  out.bound_factor = 1.0 + 32.0 * std::log2(static_cast<double>(D) + 1.0);
  const double cost_tol = 1e-9 * (1.0 + out.cost_z);

  if (D == 0) {
    ClientSet all(n);
    for (int c = 0; c < n; ++c) all[c] = c;
    int best = 0;
    for (int f = 1; f < m; ++f) {
      if (dla.H(f)(all) < dla.H(best)(all)) best = f;
    }
    if (n > 0) out.S.sets[best] = all;
    out.alpha = 1.0;
  } else {
    out.alpha = 1.0 / std::log2(static_cast<double>(D) + 1.0);
    auto weight = [&](int f) {
      switch (variant) {
        case DlaVariant::kMult:
          return dla.mult[f];
        case DlaVariant::kAdd:
          return dla.add[f];
        case DlaVariant::kPlain:
          break;
      }
      return 0.0;
    };
    std::vector<std::vector<int>> nodes_at(D + 1);
    for (int v = 0; v < dla.tree.num_nodes(); ++v) {
      nodes_at[dla.tree.level[v]].push_back(v);
    }
    double cost = out.cost_z;
    for (int i = 0; i <= D; ++i) {
      // Invariant: every client anchored at level <= D - i still has unit
      // admissible mass or already sits in an admissible set.
      for (int c = 0; c < n; ++c) {
        if (dla.tree.level[dla.client_node[c]] > D - i) continue;
        double mass = 0.0;
        for (int f : dla.Admissible(c)) mass += z[f][c];
        bool served = false;
        for (int f : dla.Admissible(c)) served |= Contains(out.S.sets[f], c);
        SFL_CHECK_INVARIANT(
            served || std::abs(mass - 1.0) <= 1e-9,
            "round_dla: client lost its admissible mass before its level");
      }
      for (int v : nodes_at[D - i]) {
        const auto& fv_set = dla.facilities_under[v];
        if (fv_set.empty()) continue;
        DlaStep step;
        step.iteration = i;
        step.node = v;
        step.cost_before_merge = cost;
        int fv = fv_set[0];
        for (int f : fv_set) {
          if (weight(f) < weight(fv)) fv = f;
        }
        step.facility = fv;
        for (int f : fv_set) {
          if (f == fv) continue;
          for (int c = 0; c < n; ++c) {
            z[fv][c] += z[f][c];
            z[f][c] = 0.0;
          }
        }
        for (int c = 0; c < n; ++c) {
          SFL_CHECK_INVARIANT(z[fv][c] <= 1.0 + 1e-9,
                              "round_dla: merged entry exceeds one");
          if (z[fv][c] > 1.0 - 1e-9) z[fv][c] = 1.0;
        }
        cost = DlaCost(dla, z);
        step.cost_after_merge = cost;
        SFL_CHECK_INVARIANT(cost <= step.cost_before_merge + cost_tol,
                            "round_dla: merge increased cost_DLA(z)");
        step.theta = SupportedTheta(dla.H(fv), z[fv], out.alpha);
        step.added = LevelSet(z[fv], step.theta.value_or(1.0));
        for (int c : step.added) z[fv][c] = 0.0;
        out.S.sets[fv] = Union(out.S.sets[fv], step.added);
        cost = DlaCost(dla, z);
        step.cost_after_commit = cost;
        SFL_CHECK_INVARIANT(cost <= step.cost_after_merge + cost_tol,
                            "round_dla: commit increased cost_DLA(z)");
        out.trace.push_back(std::move(step));
      }
    }
    // Keep each client only at its smallest admissible facility.
    PartialAssignment pruned(m);
    for (int c = 0; c < n; ++c) {
      int chosen = -1;
      for (int f : dla.Admissible(c)) {
        if (Contains(out.S.sets[f], c)) {
          chosen = f;
          break;
        }
      }
      SFL_CHECK_INVARIANT(chosen >= 0, "round_dla: client left unassigned");
      pruned.sets[chosen].push_back(c);
    }
    out.S = std::move(pruned);
  }
  SFL_CHECK_INVARIANT(IsDlaFeasible(dla, out.S),
                      "round_dla: output is not a feasible DLA assignment");
  out.cost = DlaCost(dla, out.S);
  SFL_CHECK_INVARIANT(out.cost <= out.bound_factor * out.cost_z + cost_tol,
                      "round_dla: cost exceeds (1 + 32 log2(D+1)) cost_DLA(z)");
  return out;
}

struct LiftResult {
  PartialAssignment S;
  double conn_tree = 0.0;  // connection cost measured in the tree
  double open = 0.0;
  std::vector<double> client_conn;
};

// The DLA assignment read as an SFL assignment on the embedded instance.
// Checks d^T(c, phi(c)) <= 2 (2 Delta - 1), Delta the weight of the edges
// below v(c), and that each client's tree connection is at most three times
// its connection in x.
inline LiftResult LiftToSfl(const SflInstance& inst, const DlaReduction& red,
                            const PartialAssignment& s) {
  const DlaInstance& dla = red.dla;
  const Hst& t = dla.tree;
  LiftResult out;
  out.S = s;
  out.client_conn.assign(inst.n, 0.0);
  for (int f = 0; f < inst.m; ++f) {
    for (int c : s.sets[f]) {
      const double dt = t.NodeDistance(t.LeafOf(c), dla.facility_leaf[f]);
      const int v = dla.client_node[c];
      const double delta = std::ldexp(1.0, t.depth - t.level[v] - 1);
      SFL_CHECK_INVARIANT(dt <= 2.0 * (2.0 * delta - 1.0) + 1e-9,
                          "lift_to_sfl: connection exceeds 2(2 Delta - 1)");
      const double conn = dt * inst.ConnMult(c);
      SFL_CHECK_INVARIANT(conn <= 3.0 * red.conn_x[c] + 1e-9 * (1.0 + conn),
                          "lift_to_sfl: connection exceeds three times the "
                          "fractional connection");
      out.client_conn[c] = conn;
      out.conn_tree += conn;
    }
    out.open += inst.OpenCost(f, s.sets[f]);
  }
  return out;
}

}  // namespace sfl

#endif  // SFL_DLA_H_
