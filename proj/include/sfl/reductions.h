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

// Instance preprocessing: shrinking the facility set to one dummy facility per
// client, and splitting/snapping/rescaling the metric for one guess L of the
// longest connection in an optimal solution.

#ifndef SFL_REDUCTIONS_H_
#define SFL_REDUCTIONS_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "sfl/common.h"
#include "sfl/instance.h"

namespace sfl {

struct FacilityReduction {
  SflInstance reduced;            // m == n
  std::vector<int> original_of;   // dummy facility f'(c) -> f(c)
};

// One dummy facility f'(c) per client, attached to c by an edge of length
// d(c, f(c)) with f(c) the nearest original facility (smallest id on ties).
// Original facilities are removed; the new metric is the shortest-path metric
// of the resulting graph.
inline FacilityReduction ReduceFacilities(const SflInstance& inst) {
  if (!inst.is_plain()) {
    throw UnsupportedVariantError(
        "reduce_facilities: weighted instances are not supported");
  }
  if (inst.m < 1) throw DomainError("reduce_facilities: no facilities");
  const int n = inst.n;
  std::vector<int> nearest(n, 0);
  std::vector<double> attach(n, 0.0);
  for (int c = 0; c < n; ++c) {
    int best = 0;
    for (int f = 1; f < inst.m; ++f) {
      if (inst.Dist(c, f) < inst.Dist(c, best)) best = f;
    }
    nearest[c] = best;
    attach[c] = inst.Dist(c, best);
  }
  // With the originals gone, client-client shortest paths are the direct
  // edges (d is a metric) and every dummy is a leaf hanging off its client.
  const int total = 2 * n;
  std::vector<double> flat(static_cast<size_t>(total) * total, 0.0);
  auto at = [&](int a, int b) -> double& {
    return flat[static_cast<size_t>(a) * total + b];
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double dab = inst.metric(a, b);
      at(a, b) = dab;
      at(a, n + b) = dab + attach[b];
      at(n + b, a) = dab + attach[b];
      at(n + a, n + b) = a == b ? 0.0 : attach[a] + dab + attach[b];
    }
  }
  FacilityReduction out;
  out.reduced.n = n;
  out.reduced.m = n;
  out.reduced.metric = Metric::Trusted(total, std::move(flat));
  out.reduced.oracle = inst.oracle;
  out.reduced.conn_multipliers = inst.conn_multipliers;
  out.reduced.open_scale = inst.open_scale;
  out.original_of = std::move(nearest);
  out.reduced.Validate();
  return out;
}

// Sends clients served by a dummy f'(c) to f(c).
inline PartialAssignment MapBack(const FacilityReduction& red,
                                 const PartialAssignment& s, int original_m) {
  PartialAssignment out(original_m);
  for (int f = 0; f < s.num_facilities(); ++f) {
    auto& dst = out.sets[red.original_of[f]];
    dst.insert(dst.end(), s.sets[f].begin(), s.sets[f].end());
  }
  for (auto& set : out.sets) Normalize(set);
  return out;
}

struct DistanceComponent {
  SflInstance inst;              // rescaled: d_min == 2 (when d_max > 0)
  std::vector<int> clients;      // local client k -> original client id
  std::vector<int> facilities;   // local facility k -> original facility id
  double scale = 1.0;            // multiplies original distances and costs
};

struct DistanceReduction {
  double L = 0.0;
  double eps = 0.0;
  double snap_radius = 0.0;      // eps L / (2n)
  std::vector<DistanceComponent> components;
};

// Reduction for one guess L:
//   1. drop edges longer than L and split into connected components;
//   2. inside a component, use the shortest-path metric of the kept edges;
//   3. pick centres greedily in ascending point order, keeping a point as a
//      centre when it is farther than 2r (r = eps L / 2n) from every earlier
//      centre, and snap every other point onto the first centre within 2r;
//   4. rescale distances and opening costs so the smallest non-zero distance
//      is exactly 2.
// Components holding only facilities are dropped. Returns nullopt when some
// client has no facility in its component (the guess is too small).
inline std::optional<DistanceReduction> ReduceDistanceRange(
    const SflInstance& inst, double eps, double L) {
  if (!(L > 0) || !std::isfinite(L)) {
    throw DomainError("reduce_distance_range: L must be positive");
  }
  if (!(eps > 0)) throw DomainError("reduce_distance_range: eps must be positive");
  const int total = inst.n + inst.m;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<int> comp(total, -1);
  int num_comp = 0;
  for (int s = 0; s < total; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack = {s};
    comp[s] = num_comp;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < total; ++b) {
        if (comp[b] < 0 && inst.metric(a, b) <= L) {
          comp[b] = num_comp;
          stack.push_back(b);
        }
      }
    }
    ++num_comp;
  }

  DistanceReduction out;
  out.L = L;
  out.eps = eps;
  out.snap_radius = eps * L / (2.0 * std::max(inst.n, 1));
  const double snap = 2.0 * out.snap_radius;

  for (int k = 0; k < num_comp; ++k) {
    std::vector<int> points;
    for (int a = 0; a < total; ++a) {
      if (comp[a] == k) points.push_back(a);
    }
    DistanceComponent dc;
    for (int a : points) {
      if (a < inst.n) {
        dc.clients.push_back(a);
      } else {
        dc.facilities.push_back(a - inst.n);
      }
    }
    if (dc.clients.empty()) continue;
    if (dc.facilities.empty()) return std::nullopt;

    // Shortest paths over edges of length <= L (Floyd-Warshall).
    const int q = static_cast<int>(points.size());
    std::vector<double> sp(static_cast<size_t>(q) * q, inf);
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        const double d = inst.metric(points[a], points[b]);
        if (d <= L) sp[static_cast<size_t>(a) * q + b] = d;
      }
    }
    for (int w = 0; w < q; ++w) {
      for (int a = 0; a < q; ++a) {
        const double daw = sp[static_cast<size_t>(a) * q + w];
        if (std::isinf(daw)) continue;
        for (int b = 0; b < q; ++b) {
          const double cand = daw + sp[static_cast<size_t>(w) * q + b];
          double& cur = sp[static_cast<size_t>(a) * q + b];
          if (cand < cur) cur = cand;
        }
      }
    }
    auto spd = [&](int a, int b) { return sp[static_cast<size_t>(a) * q + b]; };

    std::vector<int> centres;
    std::vector<int> rep(q, -1);
    for (int a = 0; a < q; ++a) {
      bool independent = true;
      for (int c : centres) {
        if (spd(a, c) <= snap) {
          independent = false;
          break;
        }
      }
      if (independent) centres.push_back(a);
    }
    for (int a = 0; a < q; ++a) {
      for (int c : centres) {
        if (spd(a, c) <= snap) {
          rep[a] = c;
          break;
        }
      }
    }

    std::vector<double> flat(static_cast<size_t>(q) * q, 0.0);
    double dmin = inf;
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        const double d = a == b ? 0.0 : spd(rep[a], rep[b]);
        flat[static_cast<size_t>(a) * q + b] = d;
        if (d > 0) dmin = std::min(dmin, d);
      }
    }
    if (std::isfinite(dmin)) {
      dc.scale = 2.0 / dmin;
      for (double& d : flat) d = (d * 2.0) / dmin;
    }

    // Local order: component clients, then component facilities. `points` is
    // ascending so clients already precede facilities.
    SflInstance& sub = dc.inst;
    sub.n = static_cast<int>(dc.clients.size());
    sub.m = static_cast<int>(dc.facilities.size());
    sub.metric = Metric::Trusted(q, std::move(flat));
    sub.oracle = inst.oracle.Restrict(dc.clients);
    auto pick = [](const std::optional<std::vector<double>>& v,
                   const std::vector<int>& ids)
        -> std::optional<std::vector<double>> {
      if (!v) return std::nullopt;
      std::vector<double> out;
      for (int i : ids) out.push_back((*v)[i]);
      return out;
    };
    sub.mult_weights = pick(inst.mult_weights, dc.facilities);
    sub.add_weights = pick(inst.add_weights, dc.facilities);
    sub.conn_multipliers = pick(inst.conn_multipliers, dc.clients);
    sub.open_scale = inst.open_scale * dc.scale;
    sub.Validate();
    out.components.push_back(std::move(dc));
  }
  return out;
}

// Candidate guesses for L: the distinct positive client-facility distances,
// ascending; {1} when every client-facility distance vanishes.
inline std::vector<double> DistanceGuesses(const SflInstance& inst) {
  std::vector<double> out;
  for (int c = 0; c < inst.n; ++c) {
    for (int f = 0; f < inst.m; ++f) {
      const double d = inst.Dist(c, f);
      if (d > 0) out.push_back(d);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) out.push_back(1.0);
  return out;
}

}  // namespace sfl

#endif  // SFL_REDUCTIONS_H_
