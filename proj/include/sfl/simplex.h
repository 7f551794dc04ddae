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

// Revised primal simplex for equality-form LPs
//
//   min c^T x  s.t.  A x = b,  x >= 0,  b >= 0,
//
// whose columns have 0/1 entries. The column set may be implicit: a
// ColumnSource yields columns by index and performs pricing. Entering and
// leaving choices follow Bland's rule. Phase one starts from an all-artificial
// basis; artificials that remain basic at zero after phase one are pinned to
// zero during phase two.

#ifndef SFL_SIMPLEX_H_
#define SFL_SIMPLEX_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfl/common.h"

namespace sfl {

inline constexpr double kRatioTol = 1e-10;
inline constexpr double kReducedCostTol = 1e-9;

struct LpColumn {
  std::vector<int> rows;  // rows holding a 1
  double cost = 0.0;
};

class ColumnSource {
 public:
  virtual ~ColumnSource() = default;
  virtual int64_t num_columns() const = 0;
  virtual LpColumn Column(int64_t j) const = 0;

  // Smallest column index whose reduced cost under duals y is below -tol.
  // In phase one every real column costs zero.
  virtual std::optional<int64_t> FirstImproving(std::span<const double> y,
                                                bool phase_one,
                                                double tol) const {
    for (int64_t j = 0; j < num_columns(); ++j) {
      const LpColumn col = Column(j);
      double rc = phase_one ? 0.0 : col.cost;
      for (int r : col.rows) rc -= y[r];
      if (rc < -tol) return j;
    }
    return std::nullopt;
  }
};

class ExplicitColumns : public ColumnSource {
 public:
  explicit ExplicitColumns(std::vector<LpColumn> cols) : cols_(std::move(cols)) {}
  int64_t num_columns() const override {
    return static_cast<int64_t>(cols_.size());
  }
  LpColumn Column(int64_t j) const override { return cols_[j]; }

 private:
  std::vector<LpColumn> cols_;
};

struct SimplexResult {
  std::vector<std::pair<int64_t, double>> primal;  // basic real columns, x > 0
  std::vector<double> duals;                       // one per row
  double objective = 0.0;
  int iterations = 0;
};

class RevisedSimplex {
 public:
  static constexpr int kRefactorEvery = 64;
  static constexpr int kMaxIterations = 2'000'000;

  RevisedSimplex(const ColumnSource& source, std::vector<double> b)
      : src_(source), rows_(static_cast<int>(b.size())), b_(std::move(b)) {
    for (double v : b_) {
      if (!(v >= 0)) throw DomainError("simplex: right-hand side must be >= 0");
    }
  }

  SimplexResult Solve() {
    // Basis starts as the identity over artificials.
    basis_.assign(rows_, 0);
    for (int i = 0; i < rows_; ++i) basis_[i] = Artificial(i);
    binv_.assign(static_cast<size_t>(rows_) * rows_, 0.0);
    for (int i = 0; i < rows_; ++i) binv_[Idx(i, i)] = 1.0;
    xb_ = b_;

    Run(/*phase_one=*/true);
    double infeas = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (IsArtificial(basis_[i])) infeas += xb_[i];
    }
    SFL_CHECK_INVARIANT(infeas <= 1e-7 * (1.0 + rows_),
                        "simplex: LP infeasible (phase one residual " +
                            std::to_string(infeas) + ")");
    for (int i = 0; i < rows_; ++i) {
      if (IsArtificial(basis_[i])) xb_[i] = 0.0;
    }
    Run(/*phase_one=*/false);

    SimplexResult out;
    out.iterations = iterations_;
    out.duals = Duals(false);
    for (int i = 0; i < rows_; ++i) {
      if (IsArtificial(basis_[i])) continue;
      const double v = std::max(0.0, xb_[i]);
      if (v > 0.0) {
        out.primal.emplace_back(basis_[i], v);
        out.objective += v * src_.Column(basis_[i]).cost;
      }
    }
    std::sort(out.primal.begin(), out.primal.end());
    return out;
  }

 private:
  // Artificial variables sort after every real column under Bland's order.
  int64_t Artificial(int i) const { return src_.num_columns() + i; }
  bool IsArtificial(int64_t j) const { return j >= src_.num_columns(); }
  size_t Idx(int r, int c) const { return static_cast<size_t>(r) * rows_ + c; }

  double BasicCost(int i, bool phase_one) const {
    if (IsArtificial(basis_[i])) return phase_one ? 1.0 : 0.0;
    return phase_one ? 0.0 : src_.Column(basis_[i]).cost;
  }

  std::vector<double> Duals(bool phase_one) const {
    std::vector<double> cb(rows_);
    for (int i = 0; i < rows_; ++i) cb[i] = BasicCost(i, phase_one);
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (cb[i] == 0.0) continue;
      for (int r = 0; r < rows_; ++r) y[r] += cb[i] * binv_[Idx(i, r)];
    }
    return y;
  }

  void Run(bool phase_one) {
    while (true) {
      if (++iterations_ > kMaxIterations) {
        throw InvariantError("simplex: iteration limit reached");
      }
      const std::vector<double> y = Duals(phase_one);
      const auto entering = src_.FirstImproving(y, phase_one, kReducedCostTol);
      if (!entering) return;
      const LpColumn col = src_.Column(*entering);

      std::vector<double> d(rows_, 0.0);
      for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int r : col.rows) s += binv_[Idx(i, r)];
        d[i] = s;
      }
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        double ratio;
        if (!phase_one && IsArtificial(basis_[i])) {
          if (std::abs(d[i]) <= kRatioTol) continue;
          ratio = 0.0;
        } else {
          if (d[i] <= kRatioTol) continue;
          ratio = std::max(0.0, xb_[i]) / d[i];
        }
        if (ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      SFL_CHECK_INVARIANT(leave >= 0, "simplex: LP unbounded");
      Pivot(leave, *entering, d, best);
      if (++since_refactor_ >= kRefactorEvery) Refactor();
    }
  }

  void Pivot(int leave, int64_t entering, const std::vector<double>& d,
             double step) {
    const double piv = d[leave];
    for (int i = 0; i < rows_; ++i) {
      if (i == leave) continue;
      xb_[i] -= step * d[i];
      if (std::abs(xb_[i]) < 1e-13) xb_[i] = 0.0;
    }
    xb_[leave] = step;
    double* prow = &binv_[Idx(leave, 0)];
    for (int r = 0; r < rows_; ++r) prow[r] /= piv;
    for (int i = 0; i < rows_; ++i) {
      if (i == leave || d[i] == 0.0) continue;
      double* row = &binv_[Idx(i, 0)];
      for (int r = 0; r < rows_; ++r) row[r] -= d[i] * prow[r];
    }
    basis_[leave] = entering;
  }

  // Recomputes B^-1 by Gauss-Jordan elimination with partial pivoting, and
  // the basic values from it.
  void Refactor() {
    since_refactor_ = 0;
    std::vector<double> a(static_cast<size_t>(rows_) * rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (IsArtificial(basis_[i])) {
        a[Idx(static_cast<int>(basis_[i] - src_.num_columns()), i)] = 1.0;
      } else {
        for (int r : src_.Column(basis_[i]).rows) a[Idx(r, i)] = 1.0;
      }
    }
    std::vector<double> inv(static_cast<size_t>(rows_) * rows_, 0.0);
    for (int i = 0; i < rows_; ++i) inv[Idx(i, i)] = 1.0;
    for (int c = 0; c < rows_; ++c) {
      int p = c;
      for (int r = c + 1; r < rows_; ++r) {
        if (std::abs(a[Idx(r, c)]) > std::abs(a[Idx(p, c)])) p = r;
      }
      SFL_CHECK_INVARIANT(std::abs(a[Idx(p, c)]) > 1e-12,
                          "simplex: singular basis");
      if (p != c) {
        for (int k = 0; k < rows_; ++k) {
          std::swap(a[Idx(p, k)], a[Idx(c, k)]);
          std::swap(inv[Idx(p, k)], inv[Idx(c, k)]);
        }
      }
      const double piv = a[Idx(c, c)];
      for (int k = 0; k < rows_; ++k) {
        a[Idx(c, k)] /= piv;
        inv[Idx(c, k)] /= piv;
      }
      for (int r = 0; r < rows_; ++r) {
        const double f = a[Idx(r, c)];
        if (r == c || f == 0.0) continue;
        for (int k = 0; k < rows_; ++k) {
          a[Idx(r, k)] -= f * a[Idx(c, k)];
          inv[Idx(r, k)] -= f * inv[Idx(c, k)];
        }
      }
    }
    binv_ = std::move(inv);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int r = 0; r < rows_; ++r) s += binv_[Idx(i, r)] * b_[r];
      xb_[i] = std::abs(s) < 1e-13 ? 0.0 : s;
    }
  }

  const ColumnSource& src_;
  int rows_;
  std::vector<double> b_;
  std::vector<int64_t> basis_;
  std::vector<double> binv_;  // row-major B^-1
  std::vector<double> xb_;
  int iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace sfl

#endif  // SFL_SIMPLEX_H_
