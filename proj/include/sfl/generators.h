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

#ifndef SFL_GENERATORS_H_
#define SFL_GENERATORS_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sfl/common.h"
#include "sfl/instance.h"
#include "sfl/oracle.h"

namespace sfl {

// Hypercube lower-bound family.
//
// Layout: client (v, l) has id v * dim + (l - 1) and sits on vertex v.
// Facility v (0 <= v < 2^dim) sits on vertex v. Edge facilities follow, one
// per hypercube edge {v, v | 2^(i-1)} with bit i-1 of v clear, enumerated by
// ascending dimension i and then ascending v. An edge in dimension i has length
// p_i = 1/(2(dim + 1 - i)); its facility sits at the midpoint.
struct HypercubeEdge {
  uint32_t low;   // endpoint with bit (dim_index - 1) clear
  uint32_t high;
  int dim_index;  // i in [1, dim]
};

inline std::vector<HypercubeEdge> HypercubeEdges(int dim) {
  std::vector<HypercubeEdge> edges;
  for (int i = 1; i <= dim; ++i) {
    const uint32_t bit = 1u << (i - 1);
    for (uint32_t v = 0; v < (1u << dim); ++v) {
      if (!(v & bit)) edges.push_back({v, v | bit, i});
    }
  }
  return edges;
}

inline constexpr int kMinHypercubeGenDim = 2;
// N = dim 2^dim + 2^dim + dim 2^(dim-1) must stay within kMaxPoints.
inline constexpr int kMaxHypercubeGenDim = 8;

inline SflInstance GenHypercube(int dim) {
  if (dim < kMinHypercubeGenDim || dim > kMaxHypercubeGenDim) {
    throw DomainError("gen_hypercube: dim must lie in [" +
                      std::to_string(kMinHypercubeGenDim) + ", " +
                      std::to_string(kMaxHypercubeGenDim) + "]");
  }
  const uint32_t nv = 1u << dim;
  const auto edges = HypercubeEdges(dim);
  std::vector<double> p(dim + 1, 0.0);
  for (int i = 1; i <= dim; ++i) p[i] = HypercubeEdgeLength(dim, i);

  auto vertex_dist = [&](uint32_t a, uint32_t b) {
    double d = 0.0;
    const uint32_t diff = a ^ b;
    for (int i = 1; i <= dim; ++i) {
      if (diff >> (i - 1) & 1u) d += p[i];
    }
    return d;
  };

  // A location is either a vertex or an edge midpoint.
  struct Location {
    bool is_edge;
    uint32_t v;  // vertex, or edge index
  };
  std::vector<Location> loc;
  const int n = dim * static_cast<int>(nv);
  const int m = static_cast<int>(nv + edges.size());
  loc.reserve(n + m);
  for (uint32_t v = 0; v < nv; ++v) {
    for (int l = 1; l <= dim; ++l) loc.push_back({false, v});
  }
  for (uint32_t v = 0; v < nv; ++v) loc.push_back({false, v});
  for (uint32_t e = 0; e < edges.size(); ++e) loc.push_back({true, e});

  auto dist = [&](const Location& a, const Location& b) {
    if (!a.is_edge && !b.is_edge) return vertex_dist(a.v, b.v);
    if (a.is_edge && b.is_edge && a.v == b.v) return 0.0;
    if (!a.is_edge) {
      const auto& e = edges[b.v];
      return std::min(vertex_dist(a.v, e.low), vertex_dist(a.v, e.high)) +
             p[e.dim_index] / 2;
    }
    if (!b.is_edge) {
      const auto& e = edges[a.v];
      return std::min(vertex_dist(b.v, e.low), vertex_dist(b.v, e.high)) +
             p[e.dim_index] / 2;
    }
    const auto& e = edges[a.v];
    const auto& f = edges[b.v];
    const double via = std::min(
        std::min(vertex_dist(e.low, f.low), vertex_dist(e.low, f.high)),
        std::min(vertex_dist(e.high, f.low), vertex_dist(e.high, f.high)));
    return via + p[e.dim_index] / 2 + p[f.dim_index] / 2;
  };

  const int total = n + m;
  std::vector<double> flat(static_cast<size_t>(total) * total);
  for (int a = 0; a < total; ++a) {
    for (int b = 0; b < total; ++b) {
      flat[static_cast<size_t>(a) * total + b] = a == b ? 0.0 : dist(loc[a], loc[b]);
    }
  }
  SflInstance inst;
  inst.n = n;
  inst.m = m;
  inst.metric = Metric::Trusted(total, std::move(flat));
  inst.oracle = SubmodularOracle::Hypercube(dim);
  inst.Validate();
  return inst;
}

inline int HypercubeDim(const SflInstance& inst) {
  const auto* h = std::get_if<HypercubeFamily>(&inst.oracle.family());
  if (h == nullptr || !inst.oracle.ground_ids().empty()) return 0;
  const int dim = h->dim;
  const int nv = 1 << dim;
  if (inst.n != dim * nv || inst.m != nv + dim * nv / 2) return 0;
  return dim;
}

enum class WeightMode { kNone, kMult, kAdd };

struct RandomInstanceOptions {
  int n = 8;
  int m = 8;
  uint64_t seed = 0;
  std::string oracle = "coverage";  // coverage | uniform | independent_activation
  WeightMode weights = WeightMode::kNone;
};

// Points uniform in the unit square (clients first), Euclidean metric.
//   coverage: universe of n + 2 elements with weights in [0.1, 0.5); each
//             client covers each element with probability 0.35 and at least one.
//   uniform:  cost 1.
//   independent_activation: q_c uniform in [0.1, 1), connection multipliers q_c.
// Optional weights: mult in [0.5, 2), add in [0, 1).
inline SflInstance GenRandomEuclidean(const RandomInstanceOptions& opt) {
  if (opt.n < 1 || opt.m < 1) throw DomainError("gen_random: need n, m >= 1");
  if (opt.n + opt.m > kMaxPoints) throw CapError("gen_random: too many points");
  SplitMix64 geo = SplitMix64::Stream(opt.seed, 1);
  SplitMix64 orc = SplitMix64::Stream(opt.seed, 2);
  SplitMix64 wts = SplitMix64::Stream(opt.seed, 3);
  const int total = opt.n + opt.m;
  std::vector<std::pair<double, double>> pts(total);
  for (auto& [x, y] : pts) {
    x = geo.Uniform();
    y = geo.Uniform();
  }
  std::vector<double> flat(static_cast<size_t>(total) * total, 0.0);
  for (int a = 0; a < total; ++a) {
    for (int b = a + 1; b < total; ++b) {
      const double d = std::hypot(pts[a].first - pts[b].first,
                                  pts[a].second - pts[b].second);
      flat[static_cast<size_t>(a) * total + b] = d;
      flat[static_cast<size_t>(b) * total + a] = d;
    }
  }
  SflInstance inst;
  inst.n = opt.n;
  inst.m = opt.m;
  inst.metric = Metric::Trusted(total, std::move(flat));
  if (opt.oracle == "coverage") {
    const int universe = opt.n + 2;
    std::vector<double> w(universe);
    for (double& x : w) x = orc.Uniform(0.1, 0.5);
    std::vector<std::vector<int>> sets(opt.n);
    for (auto& s : sets) {
      for (int e = 0; e < universe; ++e) {
        if (orc.Uniform() < 0.35) s.push_back(e);
      }
      if (s.empty()) s.push_back(static_cast<int>(orc.Below(universe)));
    }
    inst.oracle = SubmodularOracle::Coverage(std::move(w), std::move(sets));
  } else if (opt.oracle == "uniform") {
    inst.oracle = SubmodularOracle::Uniform(opt.n, 1.0);
  } else if (opt.oracle == "independent_activation") {
    std::vector<double> q(opt.n);
    for (double& x : q) x = orc.Uniform(0.1, 1.0);
    inst.oracle = SubmodularOracle::IndependentActivation(q);
    inst.conn_multipliers = q;
  } else {
    throw DomainError("gen_random: unsupported oracle kind '" + opt.oracle + "'");
  }
  if (opt.weights == WeightMode::kMult) {
    std::vector<double> w(opt.m);
    for (double& x : w) x = wts.Uniform(0.5, 2.0);
    inst.mult_weights = std::move(w);
  } else if (opt.weights == WeightMode::kAdd) {
    std::vector<double> p(opt.m);
    for (double& x : p) x = wts.Uniform(0.0, 1.0);
    inst.add_weights = std::move(p);
  }
  inst.Validate();
  return inst;
}

}  // namespace sfl

#endif  // SFL_GENERATORS_H_
