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

// The configuration LP
//
//   min  sum_{f,R} cost(f,R) x_R^f
//   s.t. sum_{f, R containing c} x_R^f = 1   for every client c
//        sum_R x_R^f = 1                      for every facility f
//        x >= 0
//
// with cost(f,R) = open_f(R) + sum_{c in R} d(c,f) conn_mult(c). Rows are
// numbered clients first, then facilities. Two solution modes are offered:
// a single simplex over every column, and column generation whose pricing
// step enumerates all client subsets per facility.

#ifndef SFL_CONF_LP_H_
#define SFL_CONF_LP_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfl/common.h"
#include "sfl/instance.h"
#include "sfl/simplex.h"

namespace sfl {

struct FracColumn {
  int f = 0;
  ClientSet R;
  double x = 0.0;

  bool operator==(const FracColumn&) const = default;
};

struct FractionalSolution {
  std::vector<FracColumn> columns;  // sorted by (f, R), no duplicates
  double objective = 0.0;

  // Sorts by (f, R), sums the weights of duplicate columns and drops zeros.
  void Canonicalize() {
    std::map<std::pair<int, ClientSet>, double> acc;
    for (auto& col : columns) {
      Normalize(col.R);
      acc[{col.f, col.R}] += col.x;
    }
    columns.clear();
    for (auto& [key, x] : acc) {
      if (x > 0.0) columns.push_back({key.first, key.second, x});
    }
  }

  // Sum over columns containing each client.
  std::vector<double> ClientMass(int n) const {
    std::vector<double> out(n, 0.0);
    for (const auto& col : columns) {
      for (int c : col.R) out[c] += col.x;
    }
    return out;
  }

  std::vector<double> FacilityMass(int m) const {
    std::vector<double> out(m, 0.0);
    for (const auto& col : columns) out[col.f] += col.x;
    return out;
  }

  int NonEmptySupport() const {
    int k = 0;
    for (const auto& col : columns) k += !col.R.empty();
    return k;
  }
};

inline constexpr double kLpFeasTol = 1e-7;

// Both constraint families hold within `tol`.
inline bool IsLpFeasible(const FractionalSolution& x, int n, int m,
                         double tol = kLpFeasTol) {
  for (const auto& col : x.columns) {
    if (col.f < 0 || col.f >= m || col.x < -tol) return false;
    for (int c : col.R) {
      if (c < 0 || c >= n) return false;
    }
  }
  for (double v : x.ClientMass(n)) {
    if (std::abs(v - 1.0) > tol) return false;
  }
  for (double v : x.FacilityMass(m)) {
    if (std::abs(v - 1.0) > tol) return false;
  }
  return true;
}

inline double ColumnCost(const SflInstance& inst, int f,
                         std::span<const int> R) {
  double cost = inst.OpenCost(f, R);
  for (int c : R) cost += inst.ConnCost(c, f);
  return cost;
}

inline CostBreakdown FracCost(const SflInstance& inst,
                              const FractionalSolution& x) {
  CostBreakdown out;
  for (const auto& col : x.columns) {
    double conn = 0.0;
    for (int c : col.R) conn += inst.ConnCost(c, col.f);
    out.conn += conn * col.x;
    out.open += inst.OpenCost(col.f, col.R) * col.x;
  }
  out.total = out.conn + out.open;
  return out;
}

// Drops clients outside `keep` from every column and merges columns that
// become identical. Facility constraints are preserved exactly.
inline FractionalSolution Restrict(const FractionalSolution& x,
                                   std::span<const int> keep) {
  FractionalSolution out;
  for (const auto& col : x.columns) {
    out.columns.push_back({col.f, Intersection(col.R, keep), col.x});
  }
  out.Canonicalize();
  out.objective = std::numeric_limits<double>::quiet_NaN();
  return out;
}

enum class LpMode { kEnumerate, kColgen };

inline constexpr int kMaxLpClients = 20;
inline constexpr int64_t kMaxEnumerateColumns = int64_t{1} << 24;

struct ConfLpResult {
  FractionalSolution x;
  std::vector<double> duals;      // alpha_c for clients, then beta_f
  double dual_objective = 0.0;
  double min_reduced_cost = 0.0;  // over every column, at the final duals
  int master_solves = 0;
  int simplex_iterations = 0;
  // Column generation: per master solve, (master objective, Lagrangian lower
  // bound on the full LP).
  std::vector<std::pair<double, double>> bounds;
};

namespace internal {

// Shared per-instance tables for pricing over all 2^n subsets.
class LpTables {
 public:
  explicit LpTables(const SflInstance& inst) : inst_(inst), n_(inst.n) {
    const uint32_t full = 1u << n_;
    g_.assign(full, 0.0);
    for (uint32_t mask = 1; mask < full; ++mask) {
      const ClientSet s = MaskToSet(mask);
      g_[mask] = inst.oracle.Eval(s);
    }
    scratch_.assign(full, 0.0);
  }

  int n() const { return n_; }
  int m() const { return inst_.m; }

  double Open(int f, uint32_t mask) const {
    if (mask == 0) return 0.0;
    const double w = inst_.MultWeight(f);
    return inst_.open_scale *
           (inst_.AddWeight(f) + (w == 0.0 ? 0.0 : w * g_[mask]));
  }

  double Cost(int f, uint32_t mask) const {
    double cost = Open(f, mask);
    for (uint32_t r = mask; r != 0; r &= r - 1) {
      cost += inst_.ConnCost(std::countr_zero(r), f);
    }
    return cost;
  }

  LpColumn Column(int f, uint32_t mask) const {
    LpColumn col;
    for (uint32_t r = mask; r != 0; r &= r - 1) {
      col.rows.push_back(std::countr_zero(r));
    }
    col.rows.push_back(n_ + f);
    col.cost = Cost(f, mask);
    return col;
  }

  // Fills scratch with reduced costs of every (f, mask) and returns a view.
  std::span<const double> ReducedCosts(int f, std::span<const double> y,
                                       bool phase_one) const {
    const uint32_t full = 1u << n_;
    std::vector<double> per_client(n_);
    for (int c = 0; c < n_; ++c) {
      per_client[c] = (phase_one ? 0.0 : inst_.ConnCost(c, f)) - y[c];
    }
    scratch_[0] = 0.0;
    for (uint32_t mask = 1; mask < full; ++mask) {
      scratch_[mask] =
          scratch_[mask & (mask - 1)] + per_client[std::countr_zero(mask)];
    }
    const double beta = y[n_ + f];
    scratch_[0] = -beta;
    for (uint32_t mask = 1; mask < full; ++mask) {
      scratch_[mask] += (phase_one ? 0.0 : Open(f, mask)) - beta;
    }
    return scratch_;
  }

 private:
  const SflInstance& inst_;
  int n_;
  std::vector<double> g_;
  mutable std::vector<double> scratch_;
};

// Every (f, mask) column, index j = f * 2^n + mask.
class EnumeratedColumns : public ColumnSource {
 public:
  explicit EnumeratedColumns(const LpTables& t) : t_(t) {}
  int64_t num_columns() const override {
    return static_cast<int64_t>(t_.m()) << t_.n();
  }
  LpColumn Column(int64_t j) const override {
    return t_.Column(static_cast<int>(j >> t_.n()),
                     static_cast<uint32_t>(j & ((int64_t{1} << t_.n()) - 1)));
  }
  std::optional<int64_t> FirstImproving(std::span<const double> y,
                                        bool phase_one,
                                        double tol) const override {
    const uint32_t full = 1u << t_.n();
    for (int f = 0; f < t_.m(); ++f) {
      const auto rc = t_.ReducedCosts(f, y, phase_one);
      for (uint32_t mask = 0; mask < full; ++mask) {
        if (rc[mask] < -tol) return (static_cast<int64_t>(f) << t_.n()) | mask;
      }
    }
    return std::nullopt;
  }

 private:
  const LpTables& t_;
};

struct Pricing {
  double min_rc = std::numeric_limits<double>::infinity();
  std::vector<double> per_facility_min;
  std::vector<uint32_t> per_facility_arg;
};

inline Pricing PriceAll(const LpTables& t, std::span<const double> y) {
  Pricing out;
  const uint32_t full = 1u << t.n();
  out.per_facility_min.assign(t.m(), 0.0);
  out.per_facility_arg.assign(t.m(), 0);
  for (int f = 0; f < t.m(); ++f) {
    const auto rc = t.ReducedCosts(f, y, false);
    double best = rc[0];
    uint32_t arg = 0;
    for (uint32_t mask = 1; mask < full; ++mask) {
      if (rc[mask] < best) {
        best = rc[mask];
        arg = mask;
      }
    }
    out.per_facility_min[f] = best;
    out.per_facility_arg[f] = arg;
    out.min_rc = std::min(out.min_rc, best);
  }
  return out;
}

inline FractionalSolution ToFractional(
    const std::vector<std::pair<int, uint32_t>>& labels,
    const SimplexResult& res) {
  FractionalSolution x;
  for (const auto& [j, v] : res.primal) {
    if (v <= 1e-12) continue;
    const auto& [f, mask] = labels[j];
    x.columns.push_back({f, MaskToSet(mask), v});
  }
  x.Canonicalize();
  x.objective = res.objective;
  return x;
}

}  // namespace internal

// Optimal Conf-LP solution, certified by its duals: the primal-dual gap is at
// most 1e-6 (1 + |objective|) and no column has reduced cost below -1e-9.
inline ConfLpResult SolveConfLp(const SflInstance& inst,
                                LpMode mode = LpMode::kColgen) {
  if (inst.n > kMaxLpClients) {
    throw CapError("conf_lp: at most " + std::to_string(kMaxLpClients) +
                   " clients");
  }
  if (mode == LpMode::kEnumerate &&
      (static_cast<int64_t>(inst.m) << inst.n) > kMaxEnumerateColumns) {
    throw CapError("conf_lp: enumerate mode limited to 2^24 columns");
  }
  if (inst.m == 0 && inst.n > 0) {
    throw DomainError("conf_lp: clients but no facilities");
  }
  const int n = inst.n;
  const int m = inst.m;
  const int rows = n + m;
  internal::LpTables tables(inst);
  ConfLpResult out;

  std::vector<std::pair<int, uint32_t>> labels;
  SimplexResult res;
  if (mode == LpMode::kEnumerate) {
    internal::EnumeratedColumns src(tables);
    RevisedSimplex simplex(src, std::vector<double>(rows, 1.0));
    res = simplex.Solve();
    labels.reserve(res.primal.size());
    // Re-label only the basic columns.
    std::vector<std::pair<int64_t, double>> primal;
    for (const auto& [j, v] : res.primal) {
      primal.emplace_back(static_cast<int64_t>(labels.size()), v);
      labels.emplace_back(static_cast<int>(j >> n),
                          static_cast<uint32_t>(j & ((int64_t{1} << n) - 1)));
    }
    res.primal = std::move(primal);
    out.master_solves = 1;
    out.simplex_iterations = res.iterations;
  } else {
    const uint32_t all = (1u << n) - 1;
    std::vector<LpColumn> cols;
    auto add = [&](int f, uint32_t mask) {
      labels.emplace_back(f, mask);
      cols.push_back(tables.Column(f, mask));
    };
    for (int f = 0; f < m; ++f) {
      add(f, 0);
      if (n > 0) add(f, all);
      for (int c = 0; c < n; ++c) {
        if ((1u << c) != all) add(f, 1u << c);
      }
    }
    while (true) {
      ExplicitColumns src(cols);
      RevisedSimplex simplex(src, std::vector<double>(rows, 1.0));
      res = simplex.Solve();
      ++out.master_solves;
      out.simplex_iterations += res.iterations;
      const auto price = internal::PriceAll(tables, res.duals);
      double dual_obj = 0.0;
      for (double v : res.duals) dual_obj += v;
      double lagrangian = dual_obj;
      for (double v : price.per_facility_min) lagrangian += std::min(0.0, v);
      out.bounds.emplace_back(res.objective, lagrangian);
      SFL_CHECK_INVARIANT(
          lagrangian <= res.objective + 1e-6 * (1.0 + std::abs(res.objective)),
          "conf_lp: weak duality violated by a column generation iterate");
      if (price.min_rc >= -kReducedCostTol) break;
      int added = 0;
      for (int f = 0; f < m; ++f) {
        if (price.per_facility_min[f] >= -kReducedCostTol) continue;
        const std::pair<int, uint32_t> label{f, price.per_facility_arg[f]};
        SFL_CHECK_INVARIANT(
            std::find(labels.begin(), labels.end(), label) == labels.end(),
            "conf_lp: pricing returned a column already in the master");
        add(f, price.per_facility_arg[f]);
        ++added;
      }
      SFL_CHECK_INVARIANT(added > 0, "conf_lp: pricing made no progress");
    }
  }

  out.x = internal::ToFractional(labels, res);
  out.duals = res.duals;
  out.dual_objective = 0.0;
  for (double v : res.duals) out.dual_objective += v;
  out.min_reduced_cost = internal::PriceAll(tables, res.duals).min_rc;
  if (m == 0) out.min_reduced_cost = 0.0;

  const double obj = out.x.objective;
  SFL_CHECK_INVARIANT(IsLpFeasible(out.x, n, m),
                      "conf_lp: solution violates LP constraints");
  SFL_CHECK_INVARIANT(
      std::abs(obj - out.dual_objective) <= 1e-6 * (1.0 + std::abs(obj)),
      "conf_lp: primal-dual gap too large");
  SFL_CHECK_INVARIANT(out.min_reduced_cost >= -kReducedCostTol,
                      "conf_lp: dual infeasible at termination");
  return out;
}

}  // namespace sfl

#endif  // SFL_CONF_LP_H_
