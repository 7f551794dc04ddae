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

// Problem data for Submodular Facility Location: a metric over
// clients-then-facilities, an opening-cost oracle, and optional per-facility
// multiplicative/additive weights and per-client connection multipliers.

#ifndef SFL_INSTANCE_H_
#define SFL_INSTANCE_H_

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfl/common.h"
#include "sfl/oracle.h"

namespace sfl {

inline constexpr int kMaxPoints = 4096;
inline constexpr double kMetricTol = 1e-9;

// Dense symmetric distance matrix with zero diagonal.
class Metric {
 public:
  Metric() = default;

  // Validates symmetry, zero diagonal, non-negativity and the triangle
  // inequality (absolute tolerance kMetricTol).
  static Metric FromRows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n) {
        throw DomainError("metric: matrix is not square");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    Metric m(n, std::move(flat));
    m.CheckBasic();
    m.ValidateTriangle();
    return m;
  }

  // For matrices built by shortest-path computations or embeddings of a known
  // metric; skips the O(N^3) triangle scan but keeps the O(N^2) checks.
  static Metric Trusted(int n, std::vector<double> flat) {
    Metric m(n, std::move(flat));
    m.CheckBasic();
    return m;
  }

  // Throws DomainError on the first violated triple.
  void ValidateTriangle() const {
    for (int k = 0; k < n_; ++k) {
      const double* dk = &dist_[static_cast<size_t>(k) * n_];
      for (int i = 0; i < n_; ++i) {
        const double* di = &dist_[static_cast<size_t>(i) * n_];
        const double dik = di[k];
        for (int j = 0; j < n_; ++j) {
          if (di[j] > dik + dk[j] + kMetricTol) {
            throw DomainError("metric: triangle inequality violated at (" +
                              std::to_string(i) + "," + std::to_string(k) +
                              "," + std::to_string(j) + ")");
          }
        }
      }
    }
  }

  int size() const { return n_; }
  double operator()(int a, int b) const {
    return dist_[static_cast<size_t>(a) * n_ + b];
  }
  double d_min() const { return d_min_; }
  double d_max() const { return d_max_; }
  std::span<const double> flat() const { return dist_; }

  std::vector<std::vector<double>> Rows() const {
    std::vector<std::vector<double>> rows(n_);
    for (int a = 0; a < n_; ++a) {
      rows[a].assign(dist_.begin() + static_cast<ptrdiff_t>(a) * n_,
                     dist_.begin() + static_cast<ptrdiff_t>(a + 1) * n_);
    }
    return rows;
  }

  Metric Sub(std::span<const int> points) const {
    const int k = static_cast<int>(points.size());
    std::vector<double> flat(static_cast<size_t>(k) * k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        flat[static_cast<size_t>(a) * k + b] = (*this)(points[a], points[b]);
      }
    }
    return Trusted(k, std::move(flat));
  }

  // Smallest non-zero distance among `points`, or 0 if all coincide.
  double MinNonZero(std::span<const int> points) const {
    double best = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < points.size(); ++a) {
      for (size_t b = a + 1; b < points.size(); ++b) {
        const double d = (*this)(points[a], points[b]);
        if (d > 0 && d < best) best = d;
      }
    }
    return std::isinf(best) ? 0.0 : best;
  }

 private:
  Metric(int n, std::vector<double> flat) : n_(n), dist_(std::move(flat)) {
    if (n_ > kMaxPoints) {
      throw CapError("metric: more than " + std::to_string(kMaxPoints) +
                     " points");
    }
  }

  void CheckBasic() {
    d_min_ = 0.0;
    d_max_ = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_; ++a) {
      if ((*this)(a, a) != 0.0) throw DomainError("metric: nonzero diagonal");
      for (int b = a + 1; b < n_; ++b) {
        const double d = (*this)(a, b);
        if (!(d >= 0.0) || !std::isfinite(d)) {
          throw DomainError("metric: negative or non-finite distance");
        }
        if (std::abs(d - (*this)(b, a)) > kMetricTol) {
          throw DomainError("metric: not symmetric");
        }
        d_max_ = std::max(d_max_, d);
        if (d > 0) best = std::min(best, d);
      }
    }
    d_min_ = std::isinf(best) ? 0.0 : best;
  }

  int n_ = 0;
  std::vector<double> dist_;
  double d_min_ = 0.0;
  double d_max_ = 0.0;
};

// Per-facility client sets; overlaps across facilities are allowed.
struct PartialAssignment {
  std::vector<ClientSet> sets;

  PartialAssignment() = default;
  explicit PartialAssignment(int m) : sets(m) {}

  int num_facilities() const { return static_cast<int>(sets.size()); }

  ClientSet Covered() const {
    ClientSet out;
    for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
    Normalize(out);
    return out;
  }

  // Total and disjoint over {0, ..., n - 1}.
  bool IsFeasible(int n) const {
    std::vector<int> seen(n, 0);
    for (const auto& s : sets) {
      for (int c : s) {
        if (c < 0 || c >= n || seen[c]++) return false;
      }
    }
    for (int v : seen) {
      if (v != 1) return false;
    }
    return true;
  }

  // Facility serving each client, -1 when uncovered. Requires disjoint sets.
  std::vector<int> FacilityOf(int n) const {
    std::vector<int> out(n, -1);
    for (int f = 0; f < num_facilities(); ++f) {
      for (int c : sets[f]) out[c] = f;
    }
    return out;
  }

  static PartialAssignment FromFacilityOf(std::span<const int> facility_of,
                                          int m) {
    PartialAssignment s(m);
    for (size_t c = 0; c < facility_of.size(); ++c) {
      if (facility_of[c] >= 0) s.sets[facility_of[c]].push_back(static_cast<int>(c));
    }
    return s;
  }

  bool operator==(const PartialAssignment&) const = default;
};

struct CostBreakdown {
  double conn = 0.0;
  double open = 0.0;
  double total = 0.0;
};

struct SflInstance {
  int n = 0;  // clients: metric points [0, n)
  int m = 0;  // facilities: metric points [n, n + m)
  Metric metric;
  SubmodularOracle oracle = SubmodularOracle::Uniform(0, 0.0);
  std::optional<std::vector<double>> mult_weights;
  std::optional<std::vector<double>> add_weights;
  std::optional<std::vector<double>> conn_multipliers;
  // Unit conversion applied to every opening cost. Set by distance-range
  // rescaling, which multiplies distances and opening costs by one factor.
  double open_scale = 1.0;

  int facility_point(int f) const { return n + f; }
  double Dist(int c, int f) const { return metric(c, n + f); }
  double ConnMult(int c) const {
    return conn_multipliers ? (*conn_multipliers)[c] : 1.0;
  }
  double MultWeight(int f) const { return mult_weights ? (*mult_weights)[f] : 1.0; }
  double AddWeight(int f) const { return add_weights ? (*add_weights)[f] : 0.0; }
  bool is_plain() const { return !mult_weights && !add_weights; }

  // g_f(R) in this instance's cost units.
  double OpenCost(int f, std::span<const int> R) const {
    if (R.empty()) return 0.0;
    const double w = MultWeight(f);
    return open_scale * (AddWeight(f) + (w == 0.0 ? 0.0 : w * oracle.Eval(R)));
  }

  double ConnCost(int c, int f) const { return Dist(c, f) * ConnMult(c); }

  OracleWrapper Opening(int f) const {
    return OracleWrapper(oracle, open_scale * MultWeight(f),
                         open_scale * AddWeight(f));
  }

  void Validate() const {
    if (n < 0 || m < 0) throw DomainError("instance: negative sizes");
    if (metric.size() != n + m) {
      throw DomainError("instance: metric size must be n + m");
    }
    if (oracle.ground_size() != n) {
      throw DomainError("instance: oracle ground size must equal n");
    }
    auto check_weights = [&](const std::optional<std::vector<double>>& w,
                             const char* name) {
      if (!w) return;
      if (static_cast<int>(w->size()) != m) {
        throw DomainError(std::string("instance: ") + name +
                          " must have length m");
      }
      for (double v : *w) {
        if (!(v >= 0) || !std::isfinite(v)) {
          throw DomainError(std::string("instance: negative ") + name);
        }
      }
    };
    check_weights(mult_weights, "mult_weights");
    check_weights(add_weights, "add_weights");
    if (conn_multipliers) {
      if (oracle.kind() != "independent_activation") {
        throw DomainError(
            "instance: conn_multipliers require an independent_activation "
            "oracle");
      }
      if (static_cast<int>(conn_multipliers->size()) != n) {
        throw DomainError("instance: conn_multipliers must have length n");
      }
      for (double v : *conn_multipliers) {
        if (!(v > 0 && v <= 1)) {
          throw DomainError("instance: conn_multipliers must lie in (0,1]");
        }
      }
    }
    if (!(open_scale > 0) || !std::isfinite(open_scale)) {
      throw DomainError("instance: open_scale must be positive");
    }
  }
};

inline void CheckAssignmentIds(const SflInstance& inst,
                               const PartialAssignment& s) {
  if (s.num_facilities() != inst.m) {
    throw DomainError("assignment: expected one set per facility");
  }
  for (const auto& set : s.sets) {
    for (size_t k = 0; k < set.size(); ++k) {
      if (set[k] < 0 || set[k] >= inst.n) {
        throw DomainError("assignment: client id out of range");
      }
      if (k > 0 && set[k] <= set[k - 1]) {
        throw DomainError("assignment: client sets must be sorted and unique");
      }
    }
  }
}

// conn(S) + open(S) of a (partial) assignment.
inline CostBreakdown Cost(const SflInstance& inst, const PartialAssignment& s) {
  CheckAssignmentIds(inst, s);
  CostBreakdown out;
  for (int f = 0; f < inst.m; ++f) {
    const auto& set = s.sets[f];
    for (int c : set) out.conn += inst.ConnCost(c, f);
    out.open += inst.OpenCost(f, set);
  }
  out.total = out.conn + out.open;
  return out;
}

}  // namespace sfl

#endif  // SFL_INSTANCE_H_
