// Copyright 2026 The xplain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "xplain/error.hpp"
#include "xplain/rng.hpp"
#include "xplain/scenario.hpp"
#include "xplain/subspace_gen.hpp"

namespace xplain::subspace {
namespace {

double step_gap(const std::vector<double>& x) { return x[0] >= 0.4 && x[0] <= 0.6 ? 1.0 : 0.0; }

// [lo, hi] of a 1-D polytope.
std::pair<double, double> interval(const Polytope& p) {
  double lo = -1e300, hi = 1e300;
  auto apply = [&](const std::vector<std::vector<double>>& a, const std::vector<double>& c) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i][0] > 0) hi = std::min(hi, c[i] / a[i][0]);
      if (a[i][0] < 0) lo = std::max(lo, c[i] / a[i][0]);
    }
  };
  apply(p.a, p.c);
  apply(p.t, p.v);
  return {lo, hi};
}

TEST(Grow, StepFunctionBox) {
  const Box space{{0}, {1}};
  const auto r = grow_rough_subspace({0.5}, 1.0, space, step_gap, {}, 4);
  EXPECT_GE(r.box.lo[0], 0.4 - 0.05);
  EXPECT_LE(r.box.hi[0], 0.6 + 0.05);
  EXPECT_LE(r.box.lo[0], 0.45);
  EXPECT_GE(r.box.hi[0], 0.55);
  for (const Direction& d : r.directions) {
    EXPECT_TRUE(d.frozen);
    EXPECT_GE(d.density, 0.0);
    EXPECT_LE(d.density, 1.0);
  }
}

TEST(Grow, ConstantGapFillsSpace) {
  const Box space{{0, -2}, {1, 3}};
  const auto r = grow_rough_subspace({0.3, 0.1}, 2.0, space, [](const auto&) { return 2.0; },
                                     {}, 4);
  EXPECT_EQ(r.box.lo, space.lo);
  EXPECT_EQ(r.box.hi, space.hi);
}

TEST(Grow, SamplesStayInSpaceAndCountsAdd) {
  const Box space{{0, 0}, {1, 1}};
  GrowParams p;
  p.n_shell = 50;
  auto g = [](const std::vector<double>& x) { return x[0] < 0.5 && x[1] < 0.5 ? 1.0 : 0.0; };
  const auto r = grow_rough_subspace({0.2, 0.2}, 1.0, space, g, p, 9);
  for (const Sample& s : r.samples) EXPECT_TRUE(space.contains(s.x));
  std::size_t shells = 0;
  for (const Direction& d : r.directions) shells += d.steps;
  EXPECT_GE(r.samples.size(), p.n_shell * (1 + shells));
  EXPECT_LE(r.box.hi[0], 0.55 + 1e-12);
  EXPECT_LE(r.box.hi[1], 0.55 + 1e-12);
  EXPECT_EQ(r.box.lo[0], 0.0);
}

TEST(Grow, LowerDensityThresholdNeverShrinksBox) {
  const Box space{{0}, {1}};
  auto ramp = [](const std::vector<double>& x) { return x[0] < 0.5 ? 1.0 : 2.0 * (1.0 - x[0]); };
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    double prev_lo = 2.0, prev_hi = -1.0;
    for (double rho : {0.9, 0.7, 0.5, 0.3, 0.1}) {
      GrowParams p;
      p.rho_min = rho;
      p.gamma = 0.9;
      const auto r = grow_rough_subspace({0.3}, 1.0, space, ramp, p, seed);
      EXPECT_LE(r.box.lo[0], prev_lo);
      EXPECT_GE(r.box.hi[0], prev_hi);
      prev_lo = r.box.lo[0];
      prev_hi = r.box.hi[0];
    }
  }
}

TEST(Grow, FirstFitSeedGivesExpectedBox) {
  const Scenario s = load_scenario(std::string(XPLAIN_SOURCE_DIR) + "/scenarios/ff4.json");
  const auto gap = make_gap_fn(s, heur::GapMode::kAbsolute);
  const std::vector<double> seed{0.01, 0.49, 0.51, 0.51};
  for (std::uint64_t rs = 0; rs < 4; ++rs) {
    const auto r = grow_rough_subspace(seed, gap(seed), {s.lo, s.hi}, gap, {}, rs);
    // B0 stays the small ball. Near the seed OPT pairs it with a 0.51 ball,
    // so the bad set ends around B0 = 0.49 + one shell.
    EXPECT_EQ(r.box.lo[0], 0.0);
    EXPECT_LE(r.box.hi[0], 0.49 + 0.05);
    for (std::size_t i = 1; i < 4; ++i) {
      EXPECT_NEAR(r.box.lo[i], 0.49, 0.05);
      EXPECT_NEAR(r.box.hi[i], 0.51, 0.05);
    }
  }
}

TEST(Grow, RejectsSeedOutsideSpace) {
  EXPECT_THROW(grow_rough_subspace({2.0}, 1.0, Box{{0}, {1}}, step_gap, {}, 1), Error);
}

// ---------------------------------------------------------------------------

double sum_and_ball_gap(const std::vector<double>& x, Rng& noise) {
  const double sum = x[0] + x[1] + x[2] + x[3];
  return sum >= 1.5 && x[1] <= 0.5 ? 25.0 : noise.uniform(0.0, 3.0);
}

TEST(Tree, RecoversSumAndBallThresholds) {
  Rng rng(17);
  std::vector<std::vector<double>> f;
  std::vector<double> y;
  for (int k = 0; k < 2000; ++k) {
    std::vector<double> x(4);
    for (double& v : x) v = rng.uniform();
    y.push_back(sum_and_ball_gap(x, rng));
    f.push_back(tree_features(x));
  }
  const RegressionTree tree = fit_regression_tree(f, y, {});
  const PathRows rows = extract_path_predicates(tree, {0.3, 0.4, 0.5, 0.6});
  bool sum_row = false, ball_row = false;
  for (std::size_t i = 0; i < rows.t.size(); ++i) {
    if (rows.t[i] == std::vector<double>{-1, -1, -1, -1}) {
      sum_row = true;
      EXPECT_NEAR(-rows.v[i], 1.5, 0.05);
    }
    if (rows.t[i] == std::vector<double>{0, 1, 0, 0}) {
      ball_row = true;
      EXPECT_NEAR(rows.v[i], 0.5, 0.05);
    }
  }
  EXPECT_TRUE(sum_row);
  EXPECT_TRUE(ball_row);
  EXPECT_DOUBLE_EQ(tree.nodes[tree.leaf_of(tree_features({0.3, 0.4, 0.5, 0.6}))].mean, 25.0);
}

TEST(Tree, StepThresholdIn1D) {
  Rng rng(5);
  std::vector<std::vector<double>> f;
  std::vector<double> y;
  for (int k = 0; k < 2000; ++k) {
    const double x = rng.uniform();
    f.push_back({x});
    y.push_back(x > 0.3 ? 1.0 : 0.0);
  }
  const RegressionTree tree = fit_regression_tree(f, y, {});
  EXPECT_EQ(tree.nodes[0].feature, 0);
  EXPECT_NEAR(tree.nodes[0].threshold, 0.3, 0.02);
  EXPECT_EQ(tree.leaves(), 2u);
}

TEST(Tree, ConstantTargetsGiveSingleLeaf) {
  const RegressionTree tree = fit_regression_tree({{1, 2}, {3, 4}, {5, 6}}, {7, 7, 7}, {});
  EXPECT_EQ(tree.nodes.size(), 1u);
  EXPECT_EQ(tree.nodes[0].mean, 7.0);
  EXPECT_TRUE(extract_path_predicates(tree, {1}).t.empty());
  EXPECT_THROW(fit_regression_tree({}, {}, {}), Error);
}

TEST(Tree, LeavesRespectMinLeafAndPartitionSamples) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> f;
    std::vector<double> y;
    for (int k = 0; k < 500; ++k) {
      std::vector<double> x{rng.uniform(), rng.uniform()};
      y.push_back(std::sin(6 * x[0]) + x[1] * x[1] + rng.uniform(0, 0.1));
      f.push_back(tree_features(x));
    }
    TreeParams p;
    p.min_leaf = 20;
    const RegressionTree tree = fit_regression_tree(f, y, p);
    EXPECT_LE(tree.depth(), p.max_depth);
    std::vector<std::size_t> routed(tree.nodes.size(), 0);
    for (const auto& row : f) ++routed[tree.leaf_of(row)];
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      if (tree.nodes[k].feature >= 0) continue;
      EXPECT_EQ(routed[k], tree.nodes[k].count);
      EXPECT_GE(tree.nodes[k].count, p.min_leaf);
    }
  }
}

TEST(Tree, HandBuiltPathRows) {
  // Root: sum <= 1.5; right child: x1 <= 0.5 leading to the bad leaf.
  RegressionTree tree;
  tree.num_features = 5;
  tree.nodes = {{4, 1.5, 1, 2, 0, 0}, {-1, 0, -1, -1, 1, 0}, {1, 0.5, 3, 4, 0, 0},
                {-1, 0, -1, -1, 25, 0}, {-1, 0, -1, -1, 2, 0}};
  const PathRows rows = extract_path_predicates(tree, {0.01, 0.49, 0.51, 0.51});
  ASSERT_EQ(rows.t.size(), 2u);
  EXPECT_EQ(rows.t[0], (std::vector<double>{-1, -1, -1, -1}));
  EXPECT_EQ(rows.v[0], -1.5);
  EXPECT_EQ(rows.t[1], (std::vector<double>{0, 1, 0, 0}));
  EXPECT_EQ(rows.v[1], 0.5);

  RegressionTree stump;
  stump.num_features = 2;
  stump.nodes = {{0, 0.3, 1, 2, 0, 0}, {-1, 0, -1, -1, 0, 0}, {-1, 0, -1, -1, 1, 0}};
  const PathRows one = extract_path_predicates(stump, {0.1});
  ASSERT_EQ(one.t.size(), 1u);
  EXPECT_EQ(one.t[0], (std::vector<double>{1}));
  EXPECT_EQ(one.v[0], 0.3);
}

TEST(Tree, RepeatedSplitsKeepTightest) {
  RegressionTree tree;
  tree.num_features = 2;
  tree.nodes = {{0, 0.8, 1, 4, 0, 0}, {0, 0.5, 2, 3, 0, 0}, {-1, 0, -1, -1, 0, 0},
                {-1, 0, -1, -1, 0, 0}, {-1, 0, -1, -1, 0, 0}};
  const PathRows rows = extract_path_predicates(tree, {0.2});
  ASSERT_EQ(rows.t.size(), 1u);
  EXPECT_EQ(rows.v[0], 0.5);
}

// ---------------------------------------------------------------------------

GenerateParams quick() {
  GenerateParams p;
  p.analyzer.min_gap = 0.5;
  return p;
}

TEST(Generate, StepSubspaceCoversTrueSet) {
  const analysis::InputSpace space{{{0}, {1}}, {"x"}};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GenerateResult r = generate_subspaces(space, step_gap, quick(), seed);
    ASSERT_EQ(r.subspaces.size(), 1u) << "seed " << seed;
    const auto [lo, hi] = interval(r.subspaces[0].polytope);
    const double covered = std::max(0.0, std::min(hi, 0.6) - std::max(lo, 0.4));
    EXPECT_GE(covered, 0.9 * 0.2);
    EXPECT_LE(hi - lo, 1.1 * 0.2);
    EXPECT_TRUE(membership(r.subspaces[0].seed, r.subspaces[0]));
    EXPECT_TRUE(r.exhausted);
  }
}

TEST(Generate, TwoStepsGiveTwoDisjointSubspaces) {
  const analysis::InputSpace space{{{0}, {1}}, {"x"}};
  auto g = [](const std::vector<double>& x) {
    return (x[0] >= 0.1 && x[0] <= 0.2) || (x[0] >= 0.7 && x[0] <= 0.8) ? 1.0 : 0.0;
  };
  const GenerateResult r = generate_subspaces(space, g, quick(), 3);
  ASSERT_EQ(r.subspaces.size(), 2u);
  const auto a = interval(r.subspaces[0].polytope);
  const auto b = interval(r.subspaces[1].polytope);
  EXPECT_TRUE(a.second < b.first || b.second < a.first);
  // Later seeds sit outside earlier subspaces.
  EXPECT_FALSE(membership(r.subspaces[1].seed, r.subspaces[0]));
}

TEST(Generate, ZeroGapGivesNothing) {
  const analysis::InputSpace space{{{0, 0}, {1, 1}}, {"a", "b"}};
  const GenerateResult r = generate_subspaces(space, [](const auto&) { return 0.0; }, quick(), 1);
  EXPECT_TRUE(r.subspaces.empty());
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.attempts, 1u);
}

TEST(Generate, JsonRoundTripKeepsMembership) {
  const analysis::InputSpace space{{{0}, {1}}, {"x"}};
  const GenerateResult r = generate_subspaces(space, step_gap, quick(), 2);
  const auto doc = to_json(r, {"x"});
  ASSERT_EQ(doc["subspaces"].size(), 1u);
  const Subspace back = subspace_from_json(doc["subspaces"][0]);
  EXPECT_TRUE(membership(back.seed, back));
  EXPECT_EQ(back.polytope, r.subspaces[0].polytope);
}

}  // namespace
}  // namespace xplain::subspace
