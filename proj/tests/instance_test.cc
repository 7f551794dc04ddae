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

#include "sfl/instance.h"

#include <gtest/gtest.h>

#include <limits>
#include <vector>

#include "sfl/generators.h"

namespace {

using sfl::Metric;
using sfl::PartialAssignment;
using sfl::SflInstance;

SflInstance OneClientOneFacility(double d, double open_cost) {
  SflInstance inst;
  inst.n = 1;
  inst.m = 1;
  inst.metric = Metric::FromRows({{0, d}, {d, 0}});
  inst.oracle = sfl::SubmodularOracle::Uniform(1, open_cost);
  inst.Validate();
  return inst;
}

TEST(Metric, RejectsMalformedMatrices) {
  EXPECT_THROW(Metric::FromRows({{0, 1}, {1}}), sfl::DomainError);
  EXPECT_THROW(Metric::FromRows({{1, 1}, {1, 0}}), sfl::DomainError);
  EXPECT_THROW(Metric::FromRows({{0, -1}, {-1, 0}}), sfl::DomainError);
  EXPECT_THROW(Metric::FromRows({{0, 1}, {2, 0}}), sfl::DomainError);
  EXPECT_THROW(Metric::FromRows({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}),
               sfl::DomainError);
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Metric::FromRows({{0, inf}, {inf, 0}}), sfl::DomainError);
}

TEST(Metric, CachesExtremeDistances) {
  const auto m = Metric::FromRows({{0, 0, 3}, {0, 0, 3}, {3, 3, 0}});
  EXPECT_EQ(m.d_min(), 3.0);
  EXPECT_EQ(m.d_max(), 3.0);
}

TEST(Metric, RefusesTooManyPoints) {
  EXPECT_THROW(Metric::Trusted(sfl::kMaxPoints + 1,
                               std::vector<double>(size_t{4097} * 4097, 0.0)),
               sfl::CapError);
}

TEST(Cost, EmptyAssignmentIsFree) {
  const auto inst = OneClientOneFacility(2.0, 1.0);
  const auto c = sfl::Cost(inst, PartialAssignment(1));
  EXPECT_EQ(c.conn, 0.0);
  EXPECT_EQ(c.open, 0.0);
  EXPECT_EQ(c.total, 0.0);
}

TEST(Cost, SingleClientAtDistanceTwo) {
  const auto inst = OneClientOneFacility(2.0, 1.0);
  PartialAssignment s(1);
  s.sets[0] = {0};
  const auto c = sfl::Cost(inst, s);
  EXPECT_EQ(c.conn, 2.0);
  EXPECT_EQ(c.open, 1.0);
  EXPECT_EQ(c.total, 3.0);
}

TEST(Cost, InvalidIdsAreDomainErrors) {
  const auto inst = OneClientOneFacility(2.0, 1.0);
  PartialAssignment s(1);
  s.sets[0] = {1};
  EXPECT_THROW(sfl::Cost(inst, s), sfl::DomainError);
  EXPECT_THROW(sfl::Cost(inst, PartialAssignment(2)), sfl::DomainError);
}

TEST(Cost, VertexOpeningOnThreeDimensionalHypercube) {
  const auto inst = sfl::GenHypercube(3);
  PartialAssignment s(inst.m);
  for (int v = 0; v < 8; ++v) s.sets[v] = {3 * v, 3 * v + 1, 3 * v + 2};
  const auto c = sfl::Cost(inst, s);
  EXPECT_EQ(c.conn, 0.0);
  EXPECT_NEAR(c.open, 5.5, 1e-12);
  EXPECT_LE(c.total, 8.0);
}

TEST(Cost, WeightsAndConnectionMultipliers) {
  SflInstance inst;
  inst.n = 2;
  inst.m = 1;
  inst.metric = Metric::FromRows({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}});
  inst.oracle = sfl::SubmodularOracle::IndependentActivation({0.5, 0.5});
  inst.conn_multipliers = std::vector<double>{0.5, 0.5};
  inst.mult_weights = std::vector<double>{2.0};
  inst.add_weights = std::vector<double>{0.25};
  inst.Validate();
  PartialAssignment s(1);
  s.sets[0] = {0, 1};
  const auto c = sfl::Cost(inst, s);
  EXPECT_DOUBLE_EQ(c.conn, 1.0);
  EXPECT_DOUBLE_EQ(c.open, 0.25 + 2.0 * 0.75);
}

TEST(Instance, ValidationErrors) {
  auto inst = OneClientOneFacility(1.0, 1.0);
  inst.mult_weights = std::vector<double>{1.0, 2.0};
  EXPECT_THROW(inst.Validate(), sfl::DomainError);
  inst.mult_weights.reset();
  inst.conn_multipliers = std::vector<double>{0.5};
  EXPECT_THROW(inst.Validate(), sfl::DomainError);
  inst.oracle = sfl::SubmodularOracle::IndependentActivation({0.5});
  EXPECT_NO_THROW(inst.Validate());
  inst.conn_multipliers = std::vector<double>{0.0};
  EXPECT_THROW(inst.Validate(), sfl::DomainError);
  inst.conn_multipliers.reset();
  inst.oracle = sfl::SubmodularOracle::Uniform(2, 1.0);
  EXPECT_THROW(inst.Validate(), sfl::DomainError);
}

TEST(PartialAssignment, FeasibilityRequiresDisjointCover) {
  PartialAssignment s(2);
  s.sets[0] = {0, 1};
  s.sets[1] = {2};
  EXPECT_TRUE(s.IsFeasible(3));
  s.sets[1] = {1, 2};
  EXPECT_FALSE(s.IsFeasible(3));
  s.sets[1] = {};
  EXPECT_FALSE(s.IsFeasible(3));
  EXPECT_EQ(s.Covered(), (sfl::ClientSet{0, 1}));
}

TEST(GenHypercube, SizesAndEdgeLengths) {
  const auto d2 = sfl::GenHypercube(2);
  EXPECT_EQ(d2.n, 8);
  EXPECT_EQ(d2.m, 8);
  EXPECT_DOUBLE_EQ(d2.oracle.hypercube_p(1), 0.25);
  EXPECT_DOUBLE_EQ(d2.oracle.hypercube_p(2), 0.5);
  const auto d3 = sfl::GenHypercube(3);
  EXPECT_EQ(d3.n, 24);
  EXPECT_EQ(d3.m, 20);
  // Vertex facilities 000 and the vertex differing in dimension 1.
  EXPECT_NEAR(d3.metric(d3.n + 0, d3.n + 1), 1.0 / 6.0, 1e-15);
}

TEST(GenHypercube, RejectsDimensionsOutsideRange) {
  EXPECT_THROW(sfl::GenHypercube(1), sfl::DomainError);
  EXPECT_THROW(sfl::GenHypercube(sfl::kMaxHypercubeGenDim + 1),
               sfl::DomainError);
}

TEST(GenHypercube, EdgeFacilitiesSitAtMidpoints) {
  const int dim = 3;
  const auto inst = sfl::GenHypercube(dim);
  const auto edges = sfl::HypercubeEdges(dim);
  const int nv = 1 << dim;
  for (size_t e = 0; e < edges.size(); ++e) {
    const int fe = inst.n + nv + static_cast<int>(e);
    const double half = inst.oracle.hypercube_p(edges[e].dim_index) / 2;
    EXPECT_NEAR(inst.metric(fe, inst.n + edges[e].low), half, 1e-15);
    EXPECT_NEAR(inst.metric(fe, inst.n + edges[e].high), half, 1e-15);
  }
}

// Shortest paths on the explicit graph: vertex nodes, midpoint nodes joined
// to both endpoints by half-length edges, clients joined to their vertex by
// zero-length edges.
TEST(GenHypercube, MetricEqualsGraphShortestPaths) {
  for (int dim = 2; dim <= 3; ++dim) {
    const auto inst = sfl::GenHypercube(dim);
    const int nv = 1 << dim;
    const auto edges = sfl::HypercubeEdges(dim);
    const int total = inst.n + inst.m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(total, std::vector<double>(total, inf));
    auto join = [&](int a, int b, double w) {
      d[a][b] = std::min(d[a][b], w);
      d[b][a] = std::min(d[b][a], w);
    };
    for (int a = 0; a < total; ++a) d[a][a] = 0.0;
    for (int c = 0; c < inst.n; ++c) join(c, inst.n + c / dim, 0.0);
    for (size_t e = 0; e < edges.size(); ++e) {
      const int fe = inst.n + nv + static_cast<int>(e);
      const double half = 1.0 / (2.0 * (dim + 1 - edges[e].dim_index)) / 2;
      join(fe, inst.n + edges[e].low, half);
      join(fe, inst.n + edges[e].high, half);
    }
    for (int k = 0; k < total; ++k) {
      for (int i = 0; i < total; ++i) {
        for (int j = 0; j < total; ++j) {
          d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
      }
    }
    for (int i = 0; i < total; ++i) {
      for (int j = 0; j < total; ++j) {
        ASSERT_NEAR(inst.metric(i, j), d[i][j], 1e-12) << i << "," << j;
      }
    }
    EXPECT_NO_THROW(inst.metric.ValidateTriangle());
  }
}

TEST(GenRandomEuclidean, SmallestInstanceIsValid) {
  const auto inst = sfl::GenRandomEuclidean({1, 1, 0});
  EXPECT_EQ(inst.n, 1);
  EXPECT_EQ(inst.m, 1);
  EXPECT_EQ(inst.metric.size(), 2);
}

TEST(GenRandomEuclidean, DeterministicPerSeedAndMetric) {
  sfl::RandomInstanceOptions opt{8, 8, 1};
  const auto a = sfl::GenRandomEuclidean(opt);
  const auto b = sfl::GenRandomEuclidean(opt);
  ASSERT_EQ(a.metric.flat().size(), b.metric.flat().size());
  for (size_t i = 0; i < a.metric.flat().size(); ++i) {
    EXPECT_EQ(a.metric.flat()[i], b.metric.flat()[i]);
  }
  for (uint32_t mask = 0; mask < 256; ++mask) {
    const auto s = sfl::MaskToSet(mask);
    EXPECT_EQ(a.oracle(s), b.oracle(s));
  }
  EXPECT_NO_THROW(a.metric.ValidateTriangle());
}

TEST(GenRandomEuclidean, OracleFamiliesAndWeights) {
  sfl::RandomInstanceOptions opt{5, 4, 3, "independent_activation",
                                 sfl::WeightMode::kMult};
  const auto ia = sfl::GenRandomEuclidean(opt);
  EXPECT_EQ(ia.oracle.kind(), "independent_activation");
  EXPECT_TRUE(ia.conn_multipliers.has_value());
  EXPECT_TRUE(ia.mult_weights.has_value());
  opt.oracle = "uniform";
  opt.weights = sfl::WeightMode::kAdd;
  const auto un = sfl::GenRandomEuclidean(opt);
  EXPECT_EQ(un.oracle.kind(), "uniform");
  EXPECT_TRUE(un.add_weights.has_value());
  opt.oracle = "hypercube";
  EXPECT_THROW(sfl::GenRandomEuclidean(opt), sfl::DomainError);
}

}  // namespace
