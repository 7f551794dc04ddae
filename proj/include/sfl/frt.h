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

// Random embedding of a finite metric into a hierarchically well-separated
// tree (HST) by the permutation-and-radius construction of Fakcharoenphol,
// Rao and Talwar.

#ifndef SFL_FRT_H_
#define SFL_FRT_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sfl/common.h"
#include "sfl/instance.h"

namespace sfl {

// Rooted tree with the root at level 0 and every leaf at level `depth`. The
// edge from a level-l node to its parent weighs 2^(depth - l), so weights on
// every leaf-to-root path read 1, 2, 4, ..., 2^(depth - 1).
struct Hst {
  int depth = 0;
  std::vector<int> parent;                 // -1 for the root (node 0)
  std::vector<int> level;
  std::vector<std::vector<int>> children;  // ascending node ids
  std::map<int, int> leaf_map;             // point id -> leaf node

  int num_nodes() const { return static_cast<int>(parent.size()); }
  int root() const { return 0; }
  bool is_leaf(int v) const { return level[v] == depth; }

  double EdgeWeight(int v) const {
    return parent[v] < 0 ? 0.0 : std::ldexp(1.0, depth - level[v]);
  }

  int LeafOf(int point) const {
    auto it = leaf_map.find(point);
    if (it == leaf_map.end()) {
      throw DomainError("hst: unknown point " + std::to_string(point));
    }
    return it->second;
  }

  // Sum of edge weights on the path between nodes u and v.
  double NodeDistance(int u, int v) const {
    double d = 0.0;
    while (level[u] > level[v]) {
      d += EdgeWeight(u);
      u = parent[u];
    }
    while (level[v] > level[u]) {
      d += EdgeWeight(v);
      v = parent[v];
    }
    while (u != v) {
      d += EdgeWeight(u) + EdgeWeight(v);
      u = parent[u];
      v = parent[v];
    }
    return d;
  }

  // Ancestor chain of v, v first and the root last.
  std::vector<int> PathToRoot(int v) const {
    std::vector<int> out;
    for (; v >= 0; v = parent[v]) out.push_back(v);
    return out;
  }

  bool IsAncestor(int a, int v) const {
    while (v >= 0 && level[v] > level[a]) v = parent[v];
    return v == a;
  }
};

inline double TreeDistance(const Hst& t, int a, int b) {
  return t.NodeDistance(t.LeafOf(a), t.LeafOf(b));
}

struct FrtTrace {
  double beta = 1.0;
  std::vector<int> permutation;  // representatives in sampled order
};

// Embeds `points` (ids of `metric`) into an HST. Requires every non-zero
// distance among the points to exceed 1. Points at distance zero share a
// leaf. Deterministic per seed.
//
// Depth is D = ceil(log2 d_max) + 1 (0 for a single location). Level l > 0
// clusters use radius r = beta 2^(D - l - 2) with beta = 2^u, u uniform in
// [0, 1): each point joins the first representative of the permutation within
// distance r, and clusters are nested top-down inside their parent cluster.
inline Hst FrtEmbed(const Metric& metric, std::span<const int> points,
                    uint64_t seed, FrtTrace* trace = nullptr) {
  for (int p : points) {
    if (p < 0 || p >= metric.size()) {
      throw DomainError("frt_embed: point id out of range");
    }
  }
  // Collapse zero-distance points onto the first occurrence.
  std::vector<int> reps;
  std::vector<int> rep_of(points.size());
  for (size_t k = 0; k < points.size(); ++k) {
    int found = -1;
    for (size_t r = 0; r < reps.size(); ++r) {
      if (metric(points[k], reps[r]) == 0.0) {
        found = static_cast<int>(r);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(reps.size());
      reps.push_back(points[k]);
    }
    rep_of[k] = found;
  }
  const int q = static_cast<int>(reps.size());
  double dmax = 0.0;
  for (int a = 0; a < q; ++a) {
    for (int b = a + 1; b < q; ++b) {
      const double d = metric(reps[a], reps[b]);
      if (!(d > 1.0)) {
        throw DomainError("frt_embed: requires d_min > 1 (found " +
                          std::to_string(d) + ")");
      }
      dmax = std::max(dmax, d);
    }
  }

  Hst t;
  t.depth = dmax > 0 ? static_cast<int>(std::ceil(std::log2(dmax))) + 1 : 0;
  SplitMix64 rng = SplitMix64::Stream(seed, 0x46525445ULL);
  const double beta = std::exp2(rng.Uniform());
  std::vector<int> order(q);
  std::iota(order.begin(), order.end(), 0);
  Shuffle(order, rng);
  if (trace != nullptr) {
    trace->beta = beta;
    trace->permutation.clear();
    for (int r : order) trace->permutation.push_back(reps[r]);
  }

  // members[v] lists representative indices under node v.
  std::vector<std::vector<int>> members;
  auto add_node = [&](int parent, int level, std::vector<int> mem) {
    t.parent.push_back(parent);
    t.level.push_back(level);
    t.children.emplace_back();
    members.push_back(std::move(mem));
    const int id = t.num_nodes() - 1;
    if (parent >= 0) t.children[parent].push_back(id);
    return id;
  };
  std::vector<int> all(q);
  std::iota(all.begin(), all.end(), 0);
  add_node(-1, 0, all);
  std::vector<int> frontier = {0};
  for (int level = 1; level <= t.depth; ++level) {
    const double radius = beta * std::ldexp(1.0, t.depth - level - 2);
    std::vector<int> center(q, -1);
    for (int a = 0; a < q; ++a) {
      for (int r : order) {
        if (metric(reps[a], reps[r]) <= radius) {
          center[a] = r;
          break;
        }
      }
    }
    std::vector<int> next;
    for (int v : frontier) {
      // Group v's members by centre; children ordered by smallest member.
      std::map<int, std::vector<int>> groups;
      for (int a : members[v]) groups[center[a]].push_back(a);
      std::vector<std::vector<int>> parts;
      for (auto& [c, mem] : groups) parts.push_back(std::move(mem));
      std::sort(parts.begin(), parts.end());
      for (auto& mem : parts) next.push_back(add_node(v, level, std::move(mem)));
    }
    frontier = std::move(next);
  }
  for (int v : frontier) {
    SFL_CHECK_INVARIANT(members[v].size() == 1,
                        "frt_embed: leaf holds more than one location");
  }
  std::vector<int> leaf_of_rep(q, -1);
  for (int v : frontier) leaf_of_rep[members[v][0]] = v;
  for (size_t k = 0; k < points.size(); ++k) {
    t.leaf_map[points[k]] = leaf_of_rep[rep_of[k]];
  }
  return t;
}

// Non-contraction over every pair of embedded points.
inline bool IsNonContracting(const Hst& t, const Metric& metric,
                             std::span<const int> points,
                             double tol = kMetricTol) {
  for (size_t a = 0; a < points.size(); ++a) {
    for (size_t b = a + 1; b < points.size(); ++b) {
      if (TreeDistance(t, points[a], points[b]) + tol <
          metric(points[a], points[b])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace sfl

#endif  // SFL_FRT_H_
