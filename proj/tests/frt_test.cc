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

#include "sfl/frt.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "sfl/generators.h"
#include "sfl/reductions.h"

namespace {

using sfl::Hst;
using sfl::Metric;

Metric Line(const std::vector<double>& xs) {
  std::vector<std::vector<double>> rows(xs.size(),
                                        std::vector<double>(xs.size()));
  for (size_t a = 0; a < xs.size(); ++a) {
    for (size_t b = 0; b < xs.size(); ++b) rows[a][b] = std::abs(xs[a] - xs[b]);
  }
  return Metric::FromRows(rows);
}

std::vector<int> Iota(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Complete binary tree of the given depth, leaves mapped to points 0, 1, ...
Hst BinaryTree(int depth) {
  Hst t;
  t.depth = depth;
  t.parent = {-1};
  t.level = {0};
  t.children = {{}};
  std::vector<int> frontier = {0};
  for (int level = 1; level <= depth; ++level) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int k = 0; k < 2; ++k) {
        t.parent.push_back(v);
        t.level.push_back(level);
        t.children.emplace_back();
        t.children[v].push_back(t.num_nodes() - 1);
        next.push_back(t.num_nodes() - 1);
      }
    }
    frontier = next;
  }
  for (size_t k = 0; k < frontier.size(); ++k) {
    t.leaf_map[static_cast<int>(k)] = frontier[k];
  }
  return t;
}

TEST(TreeDistance, HandComputedPaths) {
  const Hst t = BinaryTree(3);
  EXPECT_EQ(sfl::TreeDistance(t, 0, 0), 0.0);
  EXPECT_EQ(sfl::TreeDistance(t, 0, 1), 2.0);
  EXPECT_EQ(sfl::TreeDistance(t, 0, 7), 14.0);
  EXPECT_THROW(sfl::TreeDistance(t, 0, 8), sfl::DomainError);
}

TEST(FrtEmbed, SinglePoint) {
  const auto metric = Line({0.0});
  const auto t = sfl::FrtEmbed(metric, Iota(1), 0);
  EXPECT_EQ(t.depth, 0);
  EXPECT_EQ(t.num_nodes(), 1);
  EXPECT_EQ(t.LeafOf(0), 0);
}

TEST(FrtEmbed, ColocatedPointsShareALeaf) {
  const auto metric = Line({0.0, 0.0, 4.0});
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = sfl::FrtEmbed(metric, Iota(3), seed);
    EXPECT_EQ(t.LeafOf(0), t.LeafOf(1));
    EXPECT_NE(t.LeafOf(0), t.LeafOf(2));
    EXPECT_EQ(t.depth, 3);  // ceil(log2 4) + 1
    EXPECT_GE(sfl::TreeDistance(t, 0, 2), 4.0);
  }
}

TEST(FrtEmbed, RequiresMinimumDistanceAboveOne) {
  const auto metric = Line({0.0, 1.0, 3.0});
  EXPECT_THROW(sfl::FrtEmbed(metric, Iota(3), 0), sfl::DomainError);
  EXPECT_THROW(sfl::FrtEmbed(metric, std::vector<int>{5}, 0),
               sfl::DomainError);
}

TEST(FrtEmbed, ShapeLaminarityAndNonContraction) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = sfl::GenRandomEuclidean({6, 6, seed});
    const auto red = sfl::ReduceDistanceRange(inst, 0.1, inst.metric.d_max());
    ASSERT_TRUE(red.has_value());
    const auto& metric = red->components[0].inst.metric;
    const auto points = Iota(metric.size());
    const auto t = sfl::FrtEmbed(metric, points, seed);
    // Every leaf at depth D, one parent per non-root node, weights 2^(D-l).
    for (int v = 0; v < t.num_nodes(); ++v) {
      if (t.children[v].empty()) EXPECT_EQ(t.level[v], t.depth);
      for (int c : t.children[v]) {
        EXPECT_EQ(t.parent[c], v);
        EXPECT_EQ(t.level[c], t.level[v] + 1);
        EXPECT_EQ(t.EdgeWeight(c), std::ldexp(1.0, t.depth - t.level[c]));
      }
    }
    EXPECT_EQ(t.depth,
              static_cast<int>(std::ceil(std::log2(metric.d_max()))) + 1);
    // Each level partitions the points: every point has exactly one ancestor
    // per level.
    for (int p : points) {
      const auto path = t.PathToRoot(t.LeafOf(p));
      EXPECT_EQ(static_cast<int>(path.size()), t.depth + 1);
    }
    EXPECT_TRUE(sfl::IsNonContracting(t, metric, points));
  }
}

TEST(FrtEmbed, DeterministicPerSeed) {
  const auto metric = Line({0, 2, 5, 9, 17});
  const auto a = sfl::FrtEmbed(metric, Iota(5), 42);
  const auto b = sfl::FrtEmbed(metric, Iota(5), 42);
  EXPECT_EQ(a.parent, b.parent);
  EXPECT_EQ(a.leaf_map, b.leaf_map);
}

TEST(FrtEmbed, UniformMetricStretch) {
  std::vector<std::vector<double>> rows(8, std::vector<double>(8, 2.0));
  for (int a = 0; a < 8; ++a) rows[a][a] = 0.0;
  const auto metric = Metric::FromRows(rows);
  double sum = 0.0;
  int pairs = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const auto t = sfl::FrtEmbed(metric, Iota(8), seed);
    for (int a = 0; a < 8; ++a) {
      for (int b = a + 1; b < 8; ++b) {
        const double d = sfl::TreeDistance(t, a, b);
        ASSERT_GE(d, 2.0);
        sum += d / 2.0;
        ++pairs;
      }
    }
  }
  EXPECT_LE(sum / pairs, 8.0 * std::log2(8.0));
}

}  // namespace
