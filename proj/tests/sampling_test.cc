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

#include "sfl/sampling.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sfl/conf_lp.h"
#include "sfl/generators.h"
#include "test_support.h"

namespace {

using sfl::FractionalSolution;
using sfl::PartialAssignment;

TEST(Merge, EmptySecondArgumentResolvesOverlaps) {
  PartialAssignment a(3);
  a.sets = {{0, 1}, {1, 2}, {2}};
  const auto merged = sfl::Merge(a, PartialAssignment(3));
  EXPECT_EQ(merged.sets, (std::vector<sfl::ClientSet>{{0, 1}, {2}, {}}));
}

TEST(Merge, ClientStaysAtSmallerFacility) {
  PartialAssignment a(2), b(2);
  a.sets[0] = {0};
  b.sets[1] = {0, 1};
  const auto merged = sfl::Merge(a, b);
  EXPECT_EQ(merged.sets[0], (sfl::ClientSet{0}));
  EXPECT_EQ(merged.sets[1], (sfl::ClientSet{1}));
}

TEST(Merge, IdempotentOnDisjointInput) {
  PartialAssignment a(3);
  a.sets = {{0, 3}, {}, {1}};
  EXPECT_EQ(sfl::Merge(a, a), a);
  EXPECT_EQ(sfl::Merge(a, PartialAssignment(3)), a);
}

TEST(Merge, NeverIncreasesCostAcrossOracleFamilies) {
  sfl::SplitMix64 rng(1);
  const std::vector<std::string> kinds = {"uniform", "coverage",
                                          "independent_activation"};
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.Below(6));
    const int m = 1 + static_cast<int>(rng.Below(4));
    sfl::SflInstance inst;
    if (trial % 4 == 3) {
      // Hypercube oracle on a random sub-ground of the dim-2 family.
      inst = sfl::GenRandomEuclidean({n, m, rng.Next(), "uniform"});
      std::vector<int> ids;
      for (int c = 0; c < 8 && static_cast<int>(ids.size()) < n; ++c) {
        if (rng.Uniform() < 0.7 || 8 - c == n - static_cast<int>(ids.size())) {
          ids.push_back(c);
        }
      }
      inst.oracle = sfl::SubmodularOracle::Hypercube(2).Restrict(ids);
    } else {
      inst = sfl::GenRandomEuclidean({n, m, rng.Next(), kinds[trial % 4]});
    }
    PartialAssignment a(m), b(m);
    for (int c = 0; c < n; ++c) {
      for (auto* s : {&a, &b}) {
        if (rng.Uniform() < 0.5) s->sets[rng.Below(m)].push_back(c);
      }
    }
    for (auto* s : {&a, &b}) {
      for (auto& set : s->sets) sfl::Normalize(set);
    }
    const auto merged = sfl::Merge(a, b);
    EXPECT_LE(sfl::Cost(inst, merged).total,
              sfl::Cost(inst, a).total + sfl::Cost(inst, b).total + 1e-9);
    EXPECT_EQ(merged.Covered(), sfl::Union(a.Covered(), b.Covered()));
  }
}

TEST(RoundsFor, CeilingOfDoubleLogWithFloorOne) {
  EXPECT_EQ(sfl::RoundsFor(1), 1);
  EXPECT_EQ(sfl::RoundsFor(2), 1);
  EXPECT_EQ(sfl::RoundsFor(15), 1);
  EXPECT_EQ(sfl::RoundsFor(16), 2);
  EXPECT_EQ(sfl::RoundsFor(1618), 2);
  EXPECT_EQ(sfl::RoundsFor(1619), 3);
}

TEST(StageOne, IntegralSolutionCoversEveryone) {
  const auto inst = sfl::GenRandomEuclidean({5, 3, 2});
  FractionalSolution x;
  x.columns = {{0, {0, 1}, 1.0}, {1, {}, 1.0}, {2, {2, 3, 4}, 1.0}};
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = sfl::StageOne(inst, x, seed);
    EXPECT_EQ(r.C1, (sfl::ClientSet{0, 1, 2, 3, 4}));
    EXPECT_EQ(r.S1.sets[0], (sfl::ClientSet{0, 1}));
  }
}

TEST(StageOne, SingleColumn) {
  const auto inst = sfl::GenRandomEuclidean({1, 1, 2});
  FractionalSolution x;
  x.columns = {{0, {0}, 1.0}};
  const auto r = sfl::StageOne(inst, x, 99);
  EXPECT_EQ(r.S1.sets[0], (sfl::ClientSet{0}));
  EXPECT_EQ(r.rounds, 1);
}

TEST(StageOne, ReproduciblePerSeed) {
  const auto inst = sfl::GenRandomEuclidean({8, 8, 5});
  const auto lp = sfl::SolveConfLp(inst);
  const auto a = sfl::StageOne(inst, lp.x, 17);
  const auto b = sfl::StageOne(inst, lp.x, 17);
  EXPECT_EQ(a.S1, b.S1);
  EXPECT_EQ(a.C1, a.S1.Covered());
  const auto cost = sfl::Cost(inst, a.S1);
  EXPECT_NEAR(cost.total, cost.conn + cost.open, 1e-12);
}

// Miss-rate and cost bounds on a small sample; the acceptance binary runs the full
// 2000-seed version.
TEST(StageOne, MissRateAndCostWithinBounds) {
  const auto inst = sfl::GenRandomEuclidean({8, 8, 5});
  const auto lp = sfl::SolveConfLp(inst);
  const int seeds = 400;
  const int N = inst.n + inst.m;
  std::vector<int> misses(inst.n, 0);
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto r = sfl::StageOne(inst, lp.x, s);
    for (int c = 0; c < inst.n; ++c) misses[c] += !sfl::Contains(r.C1, c);
    const double cost = sfl::Cost(inst, r.S1).total;
    sum += cost;
    sumsq += cost * cost;
  }
  const double p = 1.0 / std::log(N);
  const double sigma = std::sqrt(p * (1 - p) / seeds);
  for (int c = 0; c < inst.n; ++c) {
    EXPECT_LE(misses[c] / static_cast<double>(seeds), p + 3 * sigma);
  }
  const double mean = sum / seeds;
  const double se = std::sqrt(std::max(0.0, sumsq / seeds - mean * mean) / seeds);
  EXPECT_LE(mean, sfl::RoundsFor(N) * lp.x.objective * (1 + 3 * se / mean));
}

TEST(Residual, AllCoveredLeavesOnlyEmptyColumns) {
  const auto inst = sfl::GenRandomEuclidean({4, 2, 3});
  const auto lp = sfl::SolveConfLp(inst);
  const sfl::ClientSet all = {0, 1, 2, 3};
  const auto r = sfl::Residual(inst, lp.x, all);
  for (const auto& col : r.columns) EXPECT_TRUE(col.R.empty());
  EXPECT_EQ(r.NonEmptySupport(), 0);
}

TEST(Residual, NothingCoveredIsIdentity) {
  const auto inst = sfl::GenRandomEuclidean({4, 2, 3});
  const auto lp = sfl::SolveConfLp(inst);
  const auto r = sfl::Residual(inst, lp.x, sfl::ClientSet{});
  EXPECT_EQ(r.columns, lp.x.columns);
}

TEST(Residual, OpeningNeverIncreases) {
  const auto inst = sfl::GenRandomEuclidean({8, 8, 5});
  const auto lp = sfl::SolveConfLp(inst);
  const double open = sfl::FracCost(inst, lp.x).open;
  for (uint64_t s = 0; s < 50; ++s) {
    const auto st = sfl::StageOne(inst, lp.x, s);
    const auto r = sfl::Residual(inst, lp.x, st.C1);
    EXPECT_LE(sfl::FracCost(inst, r).open, open + 1e-12);
    double conn = 0.0;
    for (const auto& col : r.columns) {
      for (int c : col.R) {
        EXPECT_FALSE(sfl::Contains(st.C1, c));
        conn += inst.ConnCost(c, col.f) * col.x;
      }
    }
    EXPECT_NEAR(sfl::FracCost(inst, r).conn, conn, 1e-12);
  }
}

}  // namespace
