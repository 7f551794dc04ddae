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

// Reference solvers: the cost-effectiveness greedy (full enumeration and a
// hypercube-specific candidate family), an exact set-cover dynamic program
// and exhaustive assignment enumeration.

#ifndef SFL_BASELINES_H_
#define SFL_BASELINES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "sfl/common.h"
#include "sfl/generators.h"
#include "sfl/instance.h"

namespace sfl {

inline constexpr int kMaxGreedyExactClients = 12;
inline constexpr int kMaxExactDpClients = 16;
inline constexpr double kMaxExhaustiveAssignments = 4194304.0;  // 2^22

// One greedy selection: R joins facility f, which already served T.
struct GreedyStep {
  ClientSet R;
  int f = -1;
  double ratio = 0.0;
  double open_delta = 0.0;  // open_f(R u T) - open_f(T)
  double conn = 0.0;
  int tie_class = 3;
  bool fresh = true;  // T was empty
};

struct GreedyResult {
  PartialAssignment S;
  CostBreakdown cost;
  std::vector<GreedyStep> steps;
};

struct ExactResult {
  PartialAssignment S;
  CostBreakdown cost;
};

namespace internal {

inline constexpr double kRatioTieTol = 1e-10;

// Preference among equally cost-effective candidates:
//   1: two clients at distinct locations, f away from both;
//   2: one client, f colocated with it;
//   3: anything else.
inline int TieClass(const SflInstance& inst, const ClientSet& R, int f) {
  if (R.size() == 2 && inst.metric(R[0], R[1]) > 0 && inst.Dist(R[0], f) > 0 &&
      inst.Dist(R[1], f) > 0) {
    return 1;
  }
  if (R.size() == 1 && inst.Dist(R[0], f) == 0) return 2;
  return 3;
}

inline bool RatioTied(double a, double b) {
  return std::abs(a - b) <= kRatioTieTol * std::max(1.0, std::abs(b));
}

// Strict preference of step a over step b: lower ratio, then tie class, then
// a facility that serves nobody yet, then smaller |R|, facility id and R.
inline bool Prefer(const GreedyStep& a, const GreedyStep& b) {
  if (!RatioTied(a.ratio, b.ratio)) return a.ratio < b.ratio;
  return std::forward_as_tuple(a.tie_class, b.fresh, a.R.size(), a.f, a.R) <
         std::forward_as_tuple(b.tie_class, a.fresh, b.R.size(), b.f, b.R);
}

inline GreedyStep Evaluate(const SflInstance& inst, const PartialAssignment& s,
                           double open_T, ClientSet R, int f) {
  GreedyStep step;
  const ClientSet& T = s.sets[f];
  step.open_delta = inst.OpenCost(f, Union(R, T)) - open_T;
  for (int c : R) step.conn += inst.ConnCost(c, f);
  step.ratio = (step.open_delta + step.conn) / static_cast<double>(R.size());
  step.tie_class = TieClass(inst, R, f);
  step.fresh = T.empty();
  step.f = f;
  step.R = std::move(R);
  return step;
}

inline void Apply(const GreedyStep& step, PartialAssignment& s,
                  std::vector<char>& covered) {
  s.sets[step.f] = Union(s.sets[step.f], step.R);
  for (int c : step.R) covered[c] = 1;
}

}  // namespace internal

// Repeatedly serves the uncovered set R at the facility f minimizing
// (open_f(R u T) - open_f(T) + sum_{c in R} conn(c, f)) / |R|, over every
// non-empty R and every f.
inline GreedyResult GreedyExact(const SflInstance& inst) {
  if (inst.n > kMaxGreedyExactClients) {
    throw CapError("greedy_exact: at most " +
                   std::to_string(kMaxGreedyExactClients) + " clients");
  }
  GreedyResult out;
  out.S = PartialAssignment(inst.m);
  std::vector<char> covered(inst.n, 0);
  int remaining = inst.n;
  while (remaining > 0) {
    ClientSet uncovered;
    for (int c = 0; c < inst.n; ++c) {
      if (!covered[c]) uncovered.push_back(c);
    }
    std::vector<double> open_T(inst.m);
    for (int f = 0; f < inst.m; ++f) open_T[f] = inst.OpenCost(f, out.S.sets[f]);

    GreedyStep best;
    bool have = false;
    const uint32_t full = 1u << uncovered.size();
    for (uint32_t mask = 1; mask < full; ++mask) {
      ClientSet R;
      for (size_t k = 0; k < uncovered.size(); ++k) {
        if (mask >> k & 1u) R.push_back(uncovered[k]);
      }
      for (int f = 0; f < inst.m; ++f) {
        GreedyStep cand = internal::Evaluate(inst, out.S, open_T[f], R, f);
        if (!have || internal::Prefer(cand, best)) {
          best = std::move(cand);
          have = true;
        }
      }
    }
    SFL_CHECK_INVARIANT(have, "greedy_exact: no candidate (no facilities?)");
    SFL_CHECK_INVARIANT(best.ratio >= -kEpsNum, "greedy_exact: negative ratio");
    internal::Apply(best, out.S, covered);
    remaining -= static_cast<int>(best.R.size());
    out.steps.push_back(std::move(best));
  }
  out.cost = Cost(inst, out.S);
  return out;
}

// Greedy over a restricted candidate family on hypercube instances:
//   - singletons and subsets of one vertex's clients at that vertex's facility;
//   - each matching pair at its edge facility;
//   - once a facility serves clients, subsets of one adjacent vertex's clients
//     joining it.
// Candidates live in a priority queue keyed by ratio; entries are versioned by
// the state of their facility and regenerated whenever that facility changes.
inline GreedyResult GreedyStructured(const SflInstance& inst) {
  const int dim = HypercubeDim(inst);
  if (dim == 0) {
    throw DomainError("greedy_structured: requires a hypercube instance");
  }
  const int nv = 1 << dim;
  const auto edges = HypercubeEdges(dim);

  GreedyResult out;
  out.S = PartialAssignment(inst.m);
  std::vector<char> covered(inst.n, 0);
  std::vector<int> version(inst.m, 0);

  struct Entry {
    double ratio;
    int f;
    int version;
    int64_t id;  // index into `pool`
  };
  std::vector<GreedyStep> pool;
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    return a.id > b.id;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);

  auto push = [&](ClientSet R, int f, double open_T) {
    GreedyStep step = internal::Evaluate(inst, out.S, open_T, std::move(R), f);
    queue.push({step.ratio, f, version[f], static_cast<int64_t>(pool.size())});
    pool.push_back(std::move(step));
  };
  auto push_vertex_subsets = [&](uint32_t v, int f, double open_T) {
    ClientSet here;
    for (int l = 0; l < dim; ++l) {
      const int c = static_cast<int>(v) * dim + l;
      if (!covered[c]) here.push_back(c);
    }
    const uint32_t full = 1u << here.size();
    for (uint32_t mask = 1; mask < full; ++mask) {
      ClientSet R;
      for (size_t k = 0; k < here.size(); ++k) {
        if (mask >> k & 1u) R.push_back(here[k]);
      }
      push(std::move(R), f, open_T);
    }
  };
  auto generate = [&](int f) {
    const double open_T = inst.OpenCost(f, out.S.sets[f]);
    if (f < nv) {
      push_vertex_subsets(static_cast<uint32_t>(f), f, open_T);
      return;
    }
    const auto& e = edges[f - nv];
    const int a = static_cast<int>(e.low) * dim + (e.dim_index - 1);
    const int b = static_cast<int>(e.high) * dim + (e.dim_index - 1);
    if (!covered[a] && !covered[b]) push({a, b}, f, open_T);
    if (!out.S.sets[f].empty()) {
      push_vertex_subsets(e.low, f, open_T);
      push_vertex_subsets(e.high, f, open_T);
    }
  };
  auto valid = [&](const Entry& entry) {
    if (entry.version != version[entry.f]) return false;
    for (int c : pool[entry.id].R) {
      if (covered[c]) return false;
    }
    return true;
  };

  for (int f = 0; f < inst.m; ++f) generate(f);
  int remaining = inst.n;
  while (remaining > 0) {
    // Pop the tied front of the queue and pick by the preference order.
    while (!queue.empty() && !valid(queue.top())) queue.pop();
    SFL_CHECK_INVARIANT(!queue.empty(), "greedy_structured: candidates exhausted");
    const double front = queue.top().ratio;
    std::vector<Entry> tied;
    while (!queue.empty() && internal::RatioTied(queue.top().ratio, front)) {
      if (valid(queue.top())) tied.push_back(queue.top());
      queue.pop();
    }
    size_t pick = 0;
    for (size_t k = 1; k < tied.size(); ++k) {
      if (internal::Prefer(pool[tied[k].id], pool[tied[pick].id])) pick = k;
    }
    for (size_t k = 0; k < tied.size(); ++k) {
      if (k != pick) queue.push(tied[k]);
    }
    GreedyStep best = pool[tied[pick].id];
    SFL_CHECK_INVARIANT(best.ratio >= -kEpsNum,
                        "greedy_structured: negative ratio");
    internal::Apply(best, out.S, covered);
    remaining -= static_cast<int>(best.R.size());
    ++version[best.f];
    generate(best.f);
    out.steps.push_back(std::move(best));
  }
  out.cost = Cost(inst, out.S);
  return out;
}

// Each client at its own vertex facility.
inline PartialAssignment VertexOpening(const SflInstance& inst) {
  const int dim = HypercubeDim(inst);
  if (dim == 0) throw DomainError("vertex_opening: requires a hypercube instance");
  std::vector<int> facility_of(inst.n);
  for (int c = 0; c < inst.n; ++c) facility_of[c] = c / dim;
  return PartialAssignment::FromFacilityOf(facility_of, inst.m);
}

// Weighted set cover over client subsets, where serving R costs
// min_f open_f(R) + sum_{c in R} conn(c, f). The optimal cover is computed as
// a partition; parts sharing a facility are united, which cannot raise the
// cost.
inline ExactResult ExactDp(const SflInstance& inst) {
  if (inst.n > kMaxExactDpClients) {
    throw CapError("exact_dp: at most " + std::to_string(kMaxExactDpClients) +
                   " clients");
  }
  if (inst.m == 0 && inst.n > 0) throw DomainError("exact_dp: no facilities");
  const int n = inst.n;
  const uint32_t full = 1u << n;
  std::vector<double> best(full, std::numeric_limits<double>::infinity());
  std::vector<int> best_f(full, -1);
  best[0] = 0.0;
  for (uint32_t mask = 1; mask < full; ++mask) {
    const ClientSet R = MaskToSet(mask);
    for (int f = 0; f < inst.m; ++f) {
      double cost = inst.OpenCost(f, R);
      for (int c : R) cost += inst.ConnCost(c, f);
      if (cost < best[mask]) {
        best[mask] = cost;
        best_f[mask] = f;
      }
    }
  }
  std::vector<double> dp(full, std::numeric_limits<double>::infinity());
  std::vector<uint32_t> choice(full, 0);
  dp[0] = 0.0;
  for (uint32_t mask = 1; mask < full; ++mask) {
    const uint32_t low = mask & (~mask + 1);
    const uint32_t rest = mask ^ low;
    // Submasks of `mask` that contain its lowest client.
    for (uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const uint32_t part = sub | low;
      const double v = best[part] + dp[mask ^ part];
      if (v < dp[mask]) {
        dp[mask] = v;
        choice[mask] = part;
      }
      if (sub == 0) break;
    }
  }
  ExactResult out;
  out.S = PartialAssignment(inst.m);
  for (uint32_t mask = full - 1; mask != 0; mask ^= choice[mask]) {
    const int f = best_f[choice[mask]];
    out.S.sets[f] = Union(out.S.sets[f], MaskToSet(choice[mask]));
  }
  out.cost = Cost(inst, out.S);
  SFL_CHECK_INVARIANT(out.cost.total <= dp[full - 1] + 1e-9 * (1 + dp[full - 1]),
                      "exact_dp: united partition costs more than the cover");
  return out;
}

// Minimum over all m^n client-to-facility maps.
inline ExactResult Exhaustive(const SflInstance& inst) {
  if (inst.n > 0 && inst.m == 0) throw DomainError("exhaustive: no facilities");
  if (std::pow(static_cast<double>(inst.m), inst.n) > kMaxExhaustiveAssignments) {
    throw CapError("exhaustive: m^n exceeds 2^22");
  }
  const int n = inst.n;
  std::vector<int> facility_of(n, 0);
  ExactResult out;
  out.S = PartialAssignment::FromFacilityOf(facility_of, inst.m);
  out.cost = Cost(inst, out.S);
  if (n == 0) return out;
  while (true) {
    int k = 0;
    while (k < n && ++facility_of[k] == inst.m) facility_of[k++] = 0;
    if (k == n) break;
    PartialAssignment s = PartialAssignment::FromFacilityOf(facility_of, inst.m);
    const CostBreakdown cost = Cost(inst, s);
    if (cost.total < out.cost.total) {
      out.S = std::move(s);
      out.cost = cost;
    }
  }
  return out;
}

}  // namespace sfl

#endif  // SFL_BASELINES_H_
