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

#include "sfl/reductions.h"

#include <gtest/gtest.h>

#include <vector>

#include "sfl/generators.h"

namespace {

using sfl::PartialAssignment;
using sfl::SflInstance;

SflInstance FromPoints(const std::vector<double>& xs, int n,
                       sfl::SubmodularOracle oracle) {
  const int total = static_cast<int>(xs.size());
  std::vector<std::vector<double>> rows(total, std::vector<double>(total));
  for (int a = 0; a < total; ++a) {
    for (int b = 0; b < total; ++b) rows[a][b] = std::abs(xs[a] - xs[b]);
  }
  SflInstance inst;
  inst.n = n;
  inst.m = total - n;
  inst.metric = sfl::Metric::FromRows(rows);
  inst.oracle = std::move(oracle);
  inst.Validate();
  return inst;
}

TEST(ReduceFacilities, ColocatedClientsKeepCostsExactly) {
  const auto inst =
      FromPoints({0, 3, 7, 0, 3, 7, 10}, 3, sfl::SubmodularOracle::Uniform(3, 1));
  const auto red = sfl::ReduceFacilities(inst);
  EXPECT_EQ(red.reduced.m, 3);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(red.reduced.Dist(c, c), 0.0);
    EXPECT_EQ(red.original_of[c], c);
  }
  PartialAssignment s(3);
  s.sets = {{0, 1}, {}, {2}};
  const auto back = sfl::MapBack(red, s, inst.m);
  EXPECT_DOUBLE_EQ(sfl::Cost(inst, back).total,
                   sfl::Cost(red.reduced, s).total);
}

TEST(ReduceFacilities, OneFacilityPerClient) {
  const auto inst =
      FromPoints({0, 1, 5, 6, 7}, 2, sfl::SubmodularOracle::Uniform(2, 1));
  EXPECT_EQ(sfl::ReduceFacilities(inst).reduced.m, 2);
}

TEST(ReduceFacilities, WeightedInstancesAreUnsupported) {
  auto inst = FromPoints({0, 1}, 1, sfl::SubmodularOracle::Uniform(1, 1));
  inst.add_weights = std::vector<double>{1.0};
  EXPECT_THROW(sfl::ReduceFacilities(inst), sfl::UnsupportedVariantError);
}

TEST(ReduceFacilities, BackMappingNeverIncreasesCost) {
  const auto inst = sfl::GenRandomEuclidean({5, 5, 4});
  const auto red = sfl::ReduceFacilities(inst);
  EXPECT_NO_THROW(red.reduced.metric.ValidateTriangle());
  std::vector<int> phi(5, 0);
  int count = 0;
  while (true) {
    const auto s = PartialAssignment::FromFacilityOf(phi, 5);
    const auto back = sfl::MapBack(red, s, inst.m);
    ASSERT_LE(sfl::Cost(inst, back).total,
              sfl::Cost(red.reduced, s).total + 1e-12);
    ++count;
    int k = 0;
    while (k < 5 && ++phi[k] == 5) phi[k++] = 0;
    if (k == 5) break;
  }
  EXPECT_EQ(count, 3125);
}

TEST(ReduceDistanceRange, LargestGuessKeepsGeometryUpToScale) {
  const auto inst = sfl::GenRandomEuclidean({4, 3, 2});
  const double L = inst.metric.d_max();
  const auto red = sfl::ReduceDistanceRange(inst, 1e-6, L);
  ASSERT_TRUE(red.has_value());
  ASSERT_EQ(red->components.size(), 1u);
  const auto& comp = red->components[0];
  EXPECT_EQ(comp.inst.n, 4);
  EXPECT_EQ(comp.inst.m, 3);
  for (int a = 0; a < 7; ++a) {
    for (int b = 0; b < 7; ++b) {
      EXPECT_NEAR(comp.inst.metric(a, b), comp.scale * inst.metric(a, b),
                  1e-9 * comp.scale);
    }
  }
  EXPECT_NEAR(comp.inst.metric.d_min(), 2.0, 1e-12);
  EXPECT_NEAR(comp.inst.open_scale, comp.scale, 1e-12);
}

TEST(ReduceDistanceRange, FarClustersSplit) {
  // Clients 0,1 and facilities 2,3; two clusters 100 apart.
  const auto inst = FromPoints({0, 100, 1, 101}, 2,
                               sfl::SubmodularOracle::Uniform(2, 1));
  const auto red = sfl::ReduceDistanceRange(inst, 0.1, 1.0);
  ASSERT_TRUE(red.has_value());
  ASSERT_EQ(red->components.size(), 2u);
  EXPECT_EQ(red->components[0].clients, (std::vector<int>{0}));
  EXPECT_EQ(red->components[0].facilities, (std::vector<int>{0}));
  EXPECT_EQ(red->components[1].clients, (std::vector<int>{1}));
  EXPECT_EQ(red->components[1].facilities, (std::vector<int>{1}));
  EXPECT_EQ(red->components[1].inst.oracle.ground_ids(),
            (std::vector<int>{1}));
}

TEST(ReduceDistanceRange, GuessTooSmallIsInfeasible) {
  const auto inst =
      FromPoints({0, 5}, 1, sfl::SubmodularOracle::Uniform(1, 1));
  EXPECT_FALSE(sfl::ReduceDistanceRange(inst, 0.1, 1.0).has_value());
}

TEST(ReduceDistanceRange, RejectsNonPositiveParameters) {
  const auto inst =
      FromPoints({0, 5}, 1, sfl::SubmodularOracle::Uniform(1, 1));
  EXPECT_THROW(sfl::ReduceDistanceRange(inst, 0.1, 0.0), sfl::DomainError);
  EXPECT_THROW(sfl::ReduceDistanceRange(inst, 0.1, -1.0), sfl::DomainError);
  EXPECT_THROW(sfl::ReduceDistanceRange(inst, 0.0, 1.0), sfl::DomainError);
}

TEST(ReduceDistanceRange, DistanceBoundsOnRandomInstances) {
  const double eps = 0.1;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = sfl::GenRandomEuclidean({6, 6, seed});
    const int N = inst.n + inst.m;
    for (double L : sfl::DistanceGuesses(inst)) {
      const auto red = sfl::ReduceDistanceRange(inst, eps, L);
      if (!red) continue;
      int clients = 0;
      for (const auto& comp : red->components) {
        clients += comp.inst.n;
        EXPECT_EQ(comp.inst.oracle.kind(), inst.oracle.kind());
        if (comp.inst.metric.d_max() == 0.0) continue;
        EXPECT_NEAR(comp.inst.metric.d_min(), 2.0, 1e-12);
        EXPECT_LE(comp.inst.metric.d_max(), 2.0 * inst.n * N / eps + 1e-9);
        EXPECT_NO_THROW(comp.inst.metric.ValidateTriangle());
      }
      EXPECT_EQ(clients, inst.n);
    }
  }
}

TEST(DistanceGuesses, DistinctPositiveClientFacilityDistances) {
  const auto inst = FromPoints({0, 1, 1, 2, 0}, 2,
                               sfl::SubmodularOracle::Uniform(2, 1));
  // d(c0,.) = 1,2,0 ; d(c1,.) = 0,1,1.
  EXPECT_EQ(sfl::DistanceGuesses(inst), (std::vector<double>{1.0, 2.0}));
  const auto colocated =
      FromPoints({0, 0}, 1, sfl::SubmodularOracle::Uniform(1, 1));
  EXPECT_EQ(sfl::DistanceGuesses(colocated), (std::vector<double>{1.0}));
}

}  // namespace
