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

// Monotone submodular opening-cost oracles over a ground set of clients.
//
// Four families are provided:
//   uniform                 g(R) = cost * [R != {}]
//   coverage                g(R) = sum of element weights covered by R
//   hypercube               g(R) = E_A |U(R, A)| over random dimension sets A
//   independent_activation  g(R) = 1 - prod_{c in R} (1 - q_c)
//
// A SubmodularOracle is an immutable value; copies share the family data and
// evaluation never mutates, so concurrent Eval() calls are safe.

#ifndef SFL_ORACLE_H_
#define SFL_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sfl/common.h"

namespace sfl {

struct UniformFamily {
  double cost = 1.0;
};

struct CoverageFamily {
  std::vector<double> universe_weights;
  std::vector<std::vector<int>> sets;  // sets[c] = elements covered by c
};

// Clients of a dim-dimensional hypercube instance are (v, l) with v in
// {0,1}^dim and l in [1, dim]; client id = v * dim + (l - 1). Dimension i is
// bit (i - 1) of v and is activated with probability p_i = 1/(2(dim + 1 - i)).
struct HypercubeFamily {
  int dim = 2;
};

struct IndependentActivationFamily {
  std::vector<double> probs;
};

inline constexpr int kMaxHypercubeDim = 16;

inline double HypercubeEdgeLength(int dim, int i) {
  return 1.0 / (2.0 * (dim + 1 - i));
}

class SubmodularOracle {
 public:
  using Family = std::variant<UniformFamily, CoverageFamily, HypercubeFamily,
                              IndependentActivationFamily>;

  static SubmodularOracle Uniform(int ground_size, double cost) {
    if (cost < 0) throw DomainError("uniform oracle: negative cost");
    return SubmodularOracle(UniformFamily{cost}, ground_size);
  }

  static SubmodularOracle Coverage(std::vector<double> universe_weights,
                                   std::vector<std::vector<int>> sets) {
    for (double w : universe_weights) {
      if (!(w >= 0)) throw DomainError("coverage oracle: negative weight");
    }
    for (auto& s : sets) {
      Normalize(s);
      for (int e : s) {
        if (e < 0 || e >= static_cast<int>(universe_weights.size())) {
          throw DomainError("coverage oracle: element out of range");
        }
      }
    }
    const int n = static_cast<int>(sets.size());
    return SubmodularOracle(
        CoverageFamily{std::move(universe_weights), std::move(sets)}, n);
  }

  static SubmodularOracle Hypercube(int dim) {
    if (dim < 1 || dim > kMaxHypercubeDim) {
      throw DomainError("hypercube oracle: dim out of range");
    }
    return SubmodularOracle(HypercubeFamily{dim}, dim << dim);
  }

  static SubmodularOracle IndependentActivation(std::vector<double> probs) {
    for (double q : probs) {
      if (!(q >= 0 && q <= 1)) {
        throw DomainError("independent_activation oracle: prob outside [0,1]");
      }
    }
    const int n = static_cast<int>(probs.size());
    return SubmodularOracle(IndependentActivationFamily{std::move(probs)}, n);
  }

  int ground_size() const { return ground_size_; }
  const Family& family() const { return impl_->family; }
  std::string kind() const;

  // Local-to-base client ids when this oracle is a restriction; empty for an
  // unrestricted oracle.
  const std::vector<int>& ground_ids() const { return ground_ids_; }

  // The same function viewed on the sub-ground `ids` (ids in this oracle's
  // numbering). Client k of the result is client ids[k] of this oracle.
  SubmodularOracle Restrict(std::span<const int> ids) const {
    SubmodularOracle out = *this;
    out.ground_ids_.clear();
    out.ground_ids_.reserve(ids.size());
    for (int c : ids) {
      if (c < 0 || c >= ground_size_) {
        throw DomainError("restrict: client id out of range");
      }
      out.ground_ids_.push_back(ground_ids_.empty() ? c : ground_ids_[c]);
    }
    out.ground_size_ = static_cast<int>(ids.size());
    return out;
  }

  // Exact g(R). R must be sorted and duplicate free.
  double Eval(std::span<const int> R) const {
    if (R.empty()) return 0.0;
    for (int c : R) {
      if (c < 0 || c >= ground_size_) {
        throw DomainError("oracle eval: client id out of range");
      }
    }
    if (ground_ids_.empty()) return EvalBase(R);
    std::vector<int> base;
    base.reserve(R.size());
    for (int c : R) base.push_back(ground_ids_[c]);
    Normalize(base);
    return EvalBase(base);
  }

  double operator()(std::span<const int> R) const { return Eval(R); }

  // p_i for i in [1, dim]; hypercube oracles only.
  double hypercube_p(int i) const {
    const auto& h = std::get<HypercubeFamily>(family());
    return HypercubeEdgeLength(h.dim, i);
  }

 private:
  struct Impl {
    Family family;
    std::vector<double> activation_prob;  // hypercube: P[A = mask]
  };

  SubmodularOracle(Family family, int ground_size)
      : ground_size_(ground_size) {
    auto impl = std::make_shared<Impl>();
    impl->family = std::move(family);
    if (auto* h = std::get_if<HypercubeFamily>(&impl->family)) {
      const int dim = h->dim;
      impl->activation_prob.assign(size_t{1} << dim, 1.0);
      for (uint32_t a = 0; a < (1u << dim); ++a) {
        double p = 1.0;
        for (int i = 1; i <= dim; ++i) {
          const double pi = HypercubeEdgeLength(dim, i);
          p *= (a >> (i - 1) & 1u) ? pi : 1.0 - pi;
        }
        impl->activation_prob[a] = p;
      }
    }
    impl_ = std::move(impl);
  }

  double EvalBase(std::span<const int> R) const;

  std::shared_ptr<const Impl> impl_;
  int ground_size_ = 0;
  std::vector<int> ground_ids_;
};

inline std::string SubmodularOracle::kind() const {
  struct Visitor {
    std::string operator()(const UniformFamily&) { return "uniform"; }
    std::string operator()(const CoverageFamily&) { return "coverage"; }
    std::string operator()(const HypercubeFamily&) { return "hypercube"; }
    std::string operator()(const IndependentActivationFamily&) {
      return "independent_activation";
    }
  };
  return std::visit(Visitor{}, family());
}

inline double SubmodularOracle::EvalBase(std::span<const int> R) const {
  const Family& fam = impl_->family;
  if (const auto* u = std::get_if<UniformFamily>(&fam)) {
    return u->cost;
  }
  if (const auto* cov = std::get_if<CoverageFamily>(&fam)) {
    std::vector<char> hit(cov->universe_weights.size(), 0);
    double total = 0.0;
    for (int c : R) {
      for (int e : cov->sets[c]) {
        if (!hit[e]) {
          hit[e] = 1;
          total += cov->universe_weights[e];
        }
      }
    }
    return total;
  }
  if (const auto* ia = std::get_if<IndependentActivationFamily>(&fam)) {
    double none = 1.0;
    for (int c : R) none *= 1.0 - ia->probs[c];
    return 1.0 - none;
  }
  // Hypercube: sum over all 2^dim activation sets A of P[A] * |U(R, A)|, where
  // U(R, A) is the set of vertices, with the A-coordinates collapsed, that
  // hold a client of R whose index lies in A.
  const int dim = std::get<HypercubeFamily>(fam).dim;
  const auto& prob = impl_->activation_prob;
  std::vector<uint32_t> vertex(R.size());
  std::vector<uint32_t> index_bit(R.size());
  for (size_t k = 0; k < R.size(); ++k) {
    vertex[k] = static_cast<uint32_t>(R[k] / dim);
    index_bit[k] = 1u << (R[k] % dim);
  }
  std::vector<uint32_t> collapsed;
  collapsed.reserve(R.size());
  double total = 0.0;
  for (uint32_t a = 1; a < (1u << dim); ++a) {
    collapsed.clear();
    for (size_t k = 0; k < R.size(); ++k) {
      if (index_bit[k] & a) collapsed.push_back(vertex[k] & ~a);
    }
    if (collapsed.empty()) continue;
    std::sort(collapsed.begin(), collapsed.end());
    const auto distinct = std::unique(collapsed.begin(), collapsed.end()) -
                          collapsed.begin();
    total += prob[a] * static_cast<double>(distinct);
  }
  return total;
}

// Opening cost of one facility: p_f * [R != {}] + w_f * g(R).
class OracleWrapper {
 public:
  OracleWrapper(const SubmodularOracle& base, double mult_weight,
                double add_weight)
      : base_(&base), mult_(mult_weight), add_(add_weight) {}

  double operator()(std::span<const int> R) const {
    if (R.empty()) return 0.0;
    return add_ + (mult_ == 0.0 ? 0.0 : mult_ * base_->Eval(R));
  }

  int ground_size() const { return base_->ground_size(); }
  double mult_weight() const { return mult_; }
  double add_weight() const { return add_; }

 private:
  const SubmodularOracle* base_;
  double mult_;
  double add_;
};

// {c : z_c >= theta}.
inline ClientSet LevelSet(std::span<const double> z, double theta) {
  ClientSet out;
  for (size_t c = 0; c < z.size(); ++c) {
    if (z[c] >= theta) out.push_back(static_cast<int>(c));
  }
  return out;
}

struct SubmodularityReport {
  bool ok = true;
  std::string violation;  // "normalization", "monotone" or "submodular"
  uint32_t S = 0;
  uint32_t T = 0;
};

inline constexpr int kMaxVerifyGround = 12;

// Exhaustive check of normalization, monotonicity and submodularity of a set
// function h over {0, ..., ground_size - 1}. Returns the first violating pair
// in (S, T) lexicographic mask order.
template <typename SetFn>
SubmodularityReport VerifySubmodular(const SetFn& h, int ground_size,
                                     int max_n = kMaxVerifyGround,
                                     double tol = kEpsNum) {
  if (max_n > kMaxVerifyGround || ground_size > max_n || ground_size < 0) {
    throw CapError("verify_submodular: ground set too large (max " +
                   std::to_string(std::min(max_n, kMaxVerifyGround)) + ")");
  }
  const uint32_t full = 1u << ground_size;
  std::vector<double> table(full);
  for (uint32_t mask = 0; mask < full; ++mask) {
    const ClientSet s = MaskToSet(mask);
    table[mask] = h(std::span<const int>(s));
  }
  SubmodularityReport report;
  if (std::abs(table[0]) > tol) {
    report.ok = false;
    report.violation = "normalization";
    return report;
  }
  for (uint32_t s = 0; s < full; ++s) {
    for (uint32_t t = 0; t < full; ++t) {
      const double slack_tol = tol * std::max(1.0, std::abs(table[t]));
      if ((s & t) == s && table[s] > table[t] + slack_tol) {
        report = {false, "monotone", s, t};
        return report;
      }
      if (table[s] + table[t] + slack_tol <
          table[s | t] + table[s & t]) {
        report = {false, "submodular", s, t};
        return report;
      }
    }
  }
  return report;
}

// Checks an oracle over its whole ground set, refusing grounds above max_n.
inline SubmodularityReport VerifySubmodular(const SubmodularOracle& g,
                                            int max_n) {
  if (g.ground_size() > max_n) {
    throw CapError("verify_submodular: ground size " +
                   std::to_string(g.ground_size()) + " exceeds max_n " +
                   std::to_string(max_n));
  }
  return VerifySubmodular(g, g.ground_size(), max_n);
}

}  // namespace sfl

#endif  // SFL_ORACLE_H_
