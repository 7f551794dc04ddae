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

// Randomized partial rounding of a configuration-LP solution, the residual
// LP solution on the clients it leaves uncovered, and the merge of partial
// assignments.

#ifndef SFL_SAMPLING_H_
#define SFL_SAMPLING_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sfl/common.h"
#include "sfl/conf_lp.h"
#include "sfl/instance.h"

namespace sfl {

// Union per facility, then every client stays only at the smallest facility
// id holding it. The result has pairwise disjoint sets.
inline PartialAssignment Merge(const PartialAssignment& a,
                               const PartialAssignment& b) {
  const int m = std::max(a.num_facilities(), b.num_facilities());
  PartialAssignment out(m);
  for (int f = 0; f < m; ++f) {
    const ClientSet& sa = f < a.num_facilities() ? a.sets[f] : ClientSet{};
    const ClientSet& sb = f < b.num_facilities() ? b.sets[f] : ClientSet{};
    out.sets[f] = Union(sa, sb);
  }
  ClientSet kept;
  for (int f = 0; f < m; ++f) {
    ClientSet fresh = Difference(out.sets[f], kept);
    kept = Union(kept, fresh);
    out.sets[f] = std::move(fresh);
  }
  return out;
}

// Number of sampling rounds for N = n + m points: max(1, ceil(ln ln N)).
inline int RoundsFor(int total_points) {
  if (total_points < 3) return 1;
  const double lnln = std::log(std::log(static_cast<double>(total_points)));
  return std::max(1, static_cast<int>(std::ceil(lnln)));
}

struct SampledColumn {
  int round = 0;   // 1-based
  int column = 0;  // index into the fractional solution's columns
};

struct StageOneResult {
  PartialAssignment S1;
  ClientSet C1;
  int rounds = 0;
  uint64_t seed = 0;
  std::vector<SampledColumn> sampled;
};

// Runs T rounds; in round i, the non-empty column k = (f, R) of x is taken
// independently with probability x_R^f using the substream (seed, i, k).
// The sampled sets are merged in (round, facility, column) order.
inline StageOneResult StageOne(const SflInstance& inst,
                               const FractionalSolution& x, uint64_t seed) {
  StageOneResult out;
  out.seed = seed;
  out.rounds = RoundsFor(inst.n + inst.m);
  out.S1 = PartialAssignment(inst.m);
  for (int i = 1; i <= out.rounds; ++i) {
    PartialAssignment round(inst.m);
    for (size_t k = 0; k < x.columns.size(); ++k) {
      const auto& col = x.columns[k];
      if (col.R.empty()) continue;
      SplitMix64 rng = SplitMix64::Stream(seed, static_cast<uint64_t>(i), k);
      if (rng.Uniform() < col.x) {
        round.sets[col.f] = Union(round.sets[col.f], col.R);
        out.sampled.push_back({i, static_cast<int>(k)});
      }
    }
    out.S1 = Merge(out.S1, round);
  }
  out.C1 = out.S1.Covered();
  return out;
}

// x restricted to the clients outside C1.
inline FractionalSolution Residual(const SflInstance& inst,
                                   const FractionalSolution& x,
                                   std::span<const int> covered) {
  ClientSet all(inst.n);
  for (int c = 0; c < inst.n; ++c) all[c] = c;
  const ClientSet keep = Difference(all, covered);
  FractionalSolution out = Restrict(x, keep);
  out.objective = FracCost(inst, out).total;
  return out;
}

}  // namespace sfl

#endif  // SFL_SAMPLING_H_
