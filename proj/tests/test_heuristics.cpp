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
#include <chrono>
#include <cmath>
#include <numeric>

#include "xplain/error.hpp"
#include "xplain/heuristics.hpp"
#include "xplain/rng.hpp"
#include "xplain/scenario.hpp"

#ifndef XPLAIN_SOURCE_DIR
#define XPLAIN_SOURCE_DIR "."
#endif

namespace xplain::heur {
namespace {

Scenario fixture(const std::string& name) {
  return load_scenario(std::string(XPLAIN_SOURCE_DIR) + "/scenarios/" + name);
}

std::size_t demand_index(const TeInstance& te, const std::string& label) {
  for (std::size_t k = 0; k < te.demands.size(); ++k) {
    if (te.demand_label(k) == label) return k;
  }
  ADD_FAILURE() << "no demand " << label;
  return 0;
}

std::size_t path_index(const TeInstance& te, std::size_t k, const std::string& label) {
  for (std::size_t p = 0; p < te.demands[k].paths.size(); ++p) {
    if (te.path_label(k, p) == label) return p;
  }
  ADD_FAILURE() << "no path " << label;
  return 0;
}

TEST(Heuristics, FiveNodeDemandPinning) {
  Scenario s = fixture("dp_five_node.json");
  const auto t0 = std::chrono::steady_clock::now();
  Allocation dp = run_dp(s.te, s.inputs);
  Allocation opt = optimal_te(s.te, s.inputs);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_NEAR(dp.objective, 150.0, 1e-9);
  EXPECT_NEAR(opt.objective, 250.0, 1e-9);
  const std::size_t k = demand_index(s.te, "1~3");
  EXPECT_NEAR(dp.path_flow[k][path_index(s.te, k, "1-2-3")], 50.0, 1e-9);
  EXPECT_NEAR(opt.path_flow[k][path_index(s.te, k, "1-4-5-3")], 50.0, 1e-9);
  EXPECT_NEAR(gap_value(dp.objective, opt.objective, Orientation::kBenchmarkMinusHeuristic,
                        GapMode::kAbsolute),
              100.0, 1e-9);
  EXPECT_NEAR(gap_value(dp.objective, opt.objective, Orientation::kBenchmarkMinusHeuristic,
                        GapMode::kRelative),
              0.4, 1e-9);
}

TEST(Heuristics, ZeroThresholdDegeneratesToMaxFlow) {
  Scenario s = fixture("dp_five_node.json");
  s.te.threshold = 0.0;
  EXPECT_NEAR(run_dp(s.te, s.inputs).objective, 250.0, 1e-9);
}

TEST(Heuristics, ZeroDemands) {
  Scenario s = fixture("dp_five_node.json");
  std::vector<double> zero(s.dims(), 0.0);
  EXPECT_EQ(run_dp(s.te, zero).objective, 0.0);
  EXPECT_EQ(optimal_te(s.te, zero).objective, 0.0);
  EXPECT_THROW(run_dp(s.te, {1.0}), Error);
}

TEST(Heuristics, SingleDemandSinglePath) {
  TeInstance te;
  te.nodes = {"a", "b"};
  te.links = {{0, 1, 10.0}};
  te.demands = {{0, 1, {{0}}, 0}};
  EXPECT_NEAR(optimal_te(te, {4.0}).objective, 4.0, 1e-12);
  EXPECT_NEAR(optimal_te(te, {40.0}).objective, 10.0, 1e-12);
  te.threshold = 50;
  Allocation dp = run_dp(te, {40.0});
  EXPECT_NEAR(dp.objective, 10.0, 1e-12);  // clamped to the residual
  EXPECT_NEAR(dp.unmet[0], 30.0, 1e-12);
}

TEST(Heuristics, PinningIsInclusiveAndInIndexOrder) {
  // Two pinnable demands share one link of capacity 60.
  TeInstance te;
  te.nodes = {"a", "b", "c"};
  te.links = {{0, 1, 60.0}, {1, 2, 100.0}, {0, 2, 100.0}};
  te.demands = {{0, 1, {{0}}, 0}, {0, 2, {{2}, {0, 1}}, 0}};
  te.threshold = 50;
  Allocation dp = run_dp(te, {50.0, 50.0});
  EXPECT_NEAR(dp.path_flow[0][0], 50.0, 1e-12);
  EXPECT_NEAR(dp.path_flow[1][0], 50.0, 1e-12);
}

TEST(Heuristics, CheckRejectsBrokenPaths) {
  TeInstance te;
  te.nodes = {"a", "b", "c"};
  te.links = {{0, 1, 1.0}, {1, 2, 1.0}};
  te.demands = {{0, 2, {{1}}, 0}};
  EXPECT_THROW(te.check(), Error);
  te.demands = {{0, 2, {{0, 1}}, 0}};
  EXPECT_NO_THROW(te.check());
  te.links[0].capacity = 0.0;
  EXPECT_THROW(te.check(), Error);
}

TEST(Heuristics, KShortestPaths) {
  Scenario s = fixture("dp_five_node.json");
  auto paths = k_shortest_paths(s.te.nodes, s.te.links, 0, 2, 4);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].size(), 2u);
  EXPECT_EQ(paths[1].size(), 3u);
  EXPECT_TRUE(k_shortest_paths(s.te.nodes, s.te.links, 2, 0, 4).empty());

  // Full mesh on 4 nodes: 1 direct + 2 two-hop + 2 three-hop paths.
  std::vector<std::string> nodes{"a", "b", "c", "d"};
  std::vector<Link> links;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) links.push_back({i, j, 1.0});
    }
  }
  auto mesh = k_shortest_paths(nodes, links, 0, 3, 10);
  ASSERT_EQ(mesh.size(), 5u);
  EXPECT_EQ(mesh[0].size(), 1u);
  EXPECT_EQ(mesh[1].size(), 2u);
  EXPECT_EQ(mesh[2].size(), 2u);
  EXPECT_EQ(mesh[3].size(), 3u);
  EXPECT_EQ(mesh[4].size(), 3u);
  EXPECT_EQ(k_shortest_paths(nodes, links, 0, 3, 2).size(), 2u);
}

TEST(Heuristics, FirstFitFourBalls) {
  Scenario s = fixture("ff4.json");
  auto [ff, trace] = run_ff(s.vbp);
  EXPECT_EQ(ff.bins_used, 3u);
  EXPECT_EQ(trace.assignment, (std::vector<std::size_t>{0, 0, 1, 2}));
  EXPECT_EQ(optimal_vbp(s.vbp).bins_used, 2u);
  for (std::size_t i = 0; i < trace.first_fit.size(); ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < trace.first_fit[i].size(); ++j) {
      ones += trace.first_fit[i][j];
      if (trace.first_fit[i][j]) {
        EXPECT_TRUE(trace.fits[i][j]);
        for (std::size_t e = 0; e < j; ++e) EXPECT_FALSE(trace.fits[i][e]);
      }
    }
    EXPECT_EQ(ones, 1);
  }
  EXPECT_NEAR(trace.residual[2][0][0], 0.5, 1e-12);
}

TEST(Heuristics, FirstFitSeventeenBalls) {
  Scenario s = fixture("ff17.json");
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_EQ(run_ff(s.vbp).first.bins_used, 9u);
  EXPECT_EQ(optimal_vbp(s.vbp).bins_used, 8u);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
  // Decreasing order never needs more bins than the given order here.
  VbpInstance sorted = s.vbp;
  std::sort(sorted.sizes.begin(), sorted.sizes.end(), std::greater<>());
  EXPECT_LE(run_ff(sorted).first.bins_used, 9u);
}

TEST(Heuristics, EmptyAndUnplaceable) {
  VbpInstance v;
  v.bins = {{1.0}};
  EXPECT_EQ(run_ff(v).first.bins_used, 0u);
  EXPECT_EQ(optimal_vbp(v).bins_used, 0u);
  v.sizes = {{0.6}, {0.6}};
  try {
    run_ff(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnplaceable);
  }
  EXPECT_THROW(optimal_vbp(v), Error);
  v.unbounded = true;
  EXPECT_EQ(run_ff(v).first.bins_used, 2u);
  v.sizes = {{1.5}};
  EXPECT_THROW(run_ff(v), Error);
}

TEST(Heuristics, TwoDimensionalBalls) {
  VbpInstance v;
  v.bins = {{1.0, 1.0}};
  v.unbounded = true;
  v.sizes = {{0.6, 0.1}, {0.1, 0.6}, {0.3, 0.3}, {0.5, 0.5}};
  // FF: b0 -> 0, b1 -> 0, b2 -> 0 (0.9/0.9? no: 1.0, 1.0), b3 -> 1.
  auto [ff, trace] = run_ff(v);
  EXPECT_EQ(trace.assignment, (std::vector<std::size_t>{0, 0, 0, 1}));
  EXPECT_EQ(optimal_vbp(v).bins_used, 2u);
}

TEST(Heuristics, RandomInstancesRespectOrderingProperties) {
  Scenario te = fixture("dp_five_node.json");
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed, {0x7e});
    std::vector<double> d(te.dims());
    for (double& v : d) v = rng.uniform(0.0, 100.0);
    EXPECT_LE(run_dp(te.te, d).objective, optimal_te(te.te, d).objective + 1e-7);
  }
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng rng(seed, {0xbb});
    VbpInstance v;
    v.bins = {{1.0}};
    v.unbounded = true;
    double volume = 0.0;
    const auto n = rng.uniform_int(1, 7);
    for (int i = 0; i < n; ++i) {
      v.sizes.push_back({rng.uniform()});
      volume += v.sizes.back()[0];
    }
    const std::size_t ff = run_ff(v).first.bins_used;
    const std::size_t opt = optimal_vbp(v).bins_used;
    EXPECT_GE(ff, opt);
    EXPECT_GE(static_cast<double>(opt), std::ceil(volume - 1e-9));
  }
}

TEST(Heuristics, TeNetworkMatchesLayering) {
  Scenario s = fixture("dp_five_node.json");
  dsl::FlowNetwork net = to_flow_network(s.te, Model::kOptTe);
  std::map<std::string, int> roles;
  for (const auto& n : net.nodes()) roles[n.metadata.at("role")]++;
  EXPECT_EQ(roles["demand"], 8);
  EXPECT_EQ(roles["path"], 9);
  EXPECT_EQ(roles["link"], 5);
  EXPECT_EQ(roles["unmet"] + roles["met"], 2);
  EXPECT_TRUE(dsl::validate(net).empty());

  // Optimizing the network reproduces both totals.
  const double total = std::accumulate(s.inputs.begin(), s.inputs.end(), 0.0);
  dsl::FlowNetwork opt_net = to_flow_network(s.te, Model::kOptTe, &s.inputs);
  dsl::FlowNetwork dp_net = to_flow_network(s.te, Model::kDp, &s.inputs);
  EXPECT_NEAR(dsl::evaluate(opt_net, {}, kUnmetSink).objective, total - 250.0, 1e-6);
  EXPECT_NEAR(dsl::evaluate(dp_net, {}, kUnmetSink).objective, total - 150.0, 1e-6);
}

TEST(Heuristics, EmptyTeNetworkValidates) {
  TeInstance te;
  te.nodes = {"a", "b"};
  te.links = {{0, 1, 1.0}};
  dsl::FlowNetwork net = to_flow_network(te, Model::kOptTe);
  EXPECT_TRUE(dsl::validate(net).empty());
  EXPECT_EQ(net.nodes().size(), 3u);
}

TEST(Heuristics, ProjectionSatisfiesBehaviors) {
  Scenario s = fixture("dp_five_node.json");
  dsl::FlowNetwork net = to_flow_network(s.te, Model::kOptTe, &s.inputs);
  Allocation dp = run_dp(s.te, s.inputs);
  dsl::FlowAssignment a = project_allocation(s.te, dp, net);
  EXPECT_LE(dsl::behavior_violation(net, a), 1e-6);
  const std::size_t k = demand_index(s.te, "1~3");
  const std::string pn = path_node(s.te, k, path_index(s.te, k, "1-2-3"));
  EXPECT_NEAR(a.flow(net, demand_node(s.te, k) + ">" + pn), 50.0, 1e-9);
  EXPECT_NEAR(a.flow(net, pn + ">L:1-2"), 50.0, 1e-9);
  EXPECT_NEAR(a.flow(net, pn + ">L:2-3"), 50.0, 1e-9);

  Allocation none;
  for (double f : project_allocation(s.te, none, net).flows) EXPECT_EQ(f, 0.0);
}

TEST(Heuristics, BinNetworkAndProjection) {
  Scenario s = fixture("ff4.json");
  dsl::FlowNetwork net = to_flow_network(s.vbp, Model::kFf);
  int picks = 0, bins = 0, sinks = 0;
  for (const auto& n : net.nodes()) {
    picks += n.behavior.kind == dsl::BehaviorKind::kSource &&
             n.behavior.inner == dsl::BehaviorKind::kPick;
    bins += n.metadata.at("role") == "bin";
    sinks += n.behavior.kind == dsl::BehaviorKind::kSink;
  }
  EXPECT_EQ(picks, 4);
  EXPECT_EQ(bins, 3);
  EXPECT_EQ(sinks, 1);
  Allocation ff = run_ff(s.vbp).first;
  dsl::FlowAssignment a = project_allocation(s.vbp, ff, net);
  EXPECT_GT(a.flow(net, "BALL0>BIN0"), 0.0);
  EXPECT_GT(a.flow(net, "BALL1>BIN0"), 0.0);
  EXPECT_GT(a.flow(net, "BALL2>BIN1"), 0.0);
  EXPECT_GT(a.flow(net, "BALL3>BIN2"), 0.0);
  EXPECT_EQ(a.flow(net, "BALL3>BIN0"), 0.0);
  EXPECT_LE(dsl::behavior_violation(net, a), 1e-9);
}

TEST(Heuristics, GapOfIdenticalFunctionsIsZero) {
  ObjectiveFn f = [](const std::vector<double>& x) { return x[0] * 2; };
  EXPECT_EQ(gap({3.0}, f, f, Orientation::kHeuristicMinusBenchmark, GapMode::kRelative), 0.0);
  Scenario s = fixture("ff4.json");
  EXPECT_EQ(make_gap_fn(s, GapMode::kAbsolute)(s.inputs), 1.0);
}

}  // namespace
}  // namespace xplain::heur
