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

#include <cmath>

#include "oracles.hpp"
#include "random_programs.hpp"
#include "xplain/error.hpp"
#include "xplain/flow_dsl.hpp"
#include "xplain/milp_bridge.hpp"

namespace xplain::milp {
namespace {

using solver::ObjectiveSense;

std::size_t count_kind(const dsl::FlowNetwork& net, dsl::BehaviorKind kind) {
  std::size_t n = 0;
  for (const auto& node : net.nodes()) {
    if (node.behavior.kind == kind) ++n;
  }
  return n;
}

// Returns the MILP optimum recovered from the encoded network, or the error.
struct EncodedOutcome {
  oracle::Outcome outcome;
  double value = 0.0;
};

EncodedOutcome solve_encoded(const Milp& m) {
  Encoding enc = encode_milp(m);
  try {
    dsl::Evaluation ev = dsl::evaluate(enc.network, {}, enc.trace.sink);
    return {oracle::Outcome::kOptimal,
            enc.trace.objective_sign * (ev.objective - enc.trace.objective_offset)};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInfeasible) return {oracle::Outcome::kInfeasible};
    if (e.kind() == ErrorKind::kUnbounded) return {oracle::Outcome::kUnbounded};
    throw;
  }
}

Milp two_var_example() {
  // max 2x + 3y  s.t. x + 4y <= 4, x - y = 0.5   (y binary)
  Milp m;
  m.c_x = {2.0};
  m.c_y = {3.0};
  m.a_x = {{1.0}, {1.0}};
  m.a_y = {{4.0}, {-1.0}};
  m.b = {4.0, 0.5};
  m.row_sense = {RowSense::kLessEq, RowSense::kEqual};
  return m;
}

TEST(MilpBridge, SignSplitHasDisjointSupport) {
  Encoding enc = encode_milp(two_var_example());
  const auto& s = enc.trace.a_y;
  for (std::size_t i = 0; i < s.plus.size(); ++i) {
    for (std::size_t j = 0; j < s.plus[i].size(); ++j) {
      EXPECT_TRUE(s.plus[i][j] == 0.0 || s.minus[i][j] == 0.0);
      EXPECT_GE(s.plus[i][j], 0.0);
      EXPECT_GE(s.minus[i][j], 0.0);
    }
  }
}

TEST(MilpBridge, NodeCountsFollowTheConstruction) {
  Milp m = two_var_example();
  Encoding enc = encode_milp(m);
  // 2 rows, the equality doubles, plus two objective rows.
  EXPECT_EQ(enc.trace.num_rows, 5u);
  EXPECT_EQ(count_kind(enc.network, dsl::BehaviorKind::kSplit), 5u);
  // x, y and p.
  EXPECT_EQ(count_kind(enc.network, dsl::BehaviorKind::kAllEqual), 3u);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < enc.trace.num_rows; ++i) {
    for (double v : enc.trace.a_x.plus[i]) nonzero += v > 0;
    for (double v : enc.trace.a_x.minus[i]) nonzero += v > 0;
    for (double v : enc.trace.a_y.plus[i]) nonzero += v > 0;
    for (double v : enc.trace.a_y.minus[i]) nonzero += v > 0;
  }
  EXPECT_EQ(count_kind(enc.network, dsl::BehaviorKind::kMultiply), nonzero);
  std::size_t picks = 0;
  for (const auto& n : enc.network.nodes()) {
    if (n.behavior.kind == dsl::BehaviorKind::kSource &&
        n.behavior.inner == dsl::BehaviorKind::kPick) {
      ++picks;
      EXPECT_EQ(n.behavior.rate, 1.0);
    }
  }
  EXPECT_EQ(picks, 1u);
  EXPECT_TRUE(dsl::validate(enc.network).empty());
}

TEST(MilpBridge, EncodedOptimumMatchesDirectSolve) {
  Milp m = two_var_example();
  // y = 1 forces x = 1.5 > 0 = 4 - 4y... infeasible; y = 0 gives x = 0.5 -> 1.
  EncodedOutcome out = solve_encoded(m);
  ASSERT_EQ(out.outcome, oracle::Outcome::kOptimal);
  EXPECT_NEAR(out.value, 1.0, 1e-9);
}

TEST(MilpBridge, MinimizationWithNegativeObjective) {
  // min -x  s.t. x <= 3  ->  -3
  Milp m;
  m.sense = ObjectiveSense::kMinimize;
  m.c_x = {-1.0};
  m.a_x = {{1.0}};
  m.a_y = {{}};
  m.b = {3.0};
  m.row_sense = {RowSense::kLessEq};
  EncodedOutcome out = solve_encoded(m);
  ASSERT_EQ(out.outcome, oracle::Outcome::kOptimal);
  EXPECT_NEAR(out.value, -3.0, 1e-9);
}

TEST(MilpBridge, OffsetKeepsObjectiveFlowNonnegative) {
  // max -x - y  s.t. x + y >= 2 (as -x - y <= -2) -> -2, needs offset 2.
  Milp m;
  m.c_x = {-1.0, -1.0};
  m.a_x = {{-1.0, -1.0}};
  m.a_y = {{}};
  m.b = {-2.0};
  m.row_sense = {RowSense::kLessEq};
  Encoding enc = encode_milp(m);
  EXPECT_NEAR(enc.trace.objective_offset, 2.0, 1e-9);
  EncodedOutcome out = solve_encoded(m);
  ASSERT_EQ(out.outcome, oracle::Outcome::kOptimal);
  EXPECT_NEAR(out.value, -2.0, 1e-9);
}

TEST(MilpBridge, RandomMilpsAgreeWithOracle) {
  int optimal = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Milp m = testing::random_milp(seed);
    oracle::Result ref = oracle::solve_program(to_program(m));
    EncodedOutcome got = solve_encoded(m);
    ASSERT_EQ(static_cast<int>(got.outcome), static_cast<int>(ref.outcome)) << "seed " << seed;
    if (ref.outcome == oracle::Outcome::kOptimal) {
      ++optimal;
      EXPECT_NEAR(got.value, ref.value, 1e-6) << "seed " << seed;
    }
  }
  EXPECT_GT(optimal, 20);
}

TEST(MilpBridge, CheckRejectsRaggedRows) {
  Milp m = two_var_example();
  m.a_x[1].push_back(1.0);
  EXPECT_THROW(m.check(), Error);
  EXPECT_THROW(encode_milp(m), Error);
}

TEST(MilpBridge, BinaryExpansion) {
  EXPECT_EQ(binary_expansion_weights(0), std::vector<double>{});
  EXPECT_EQ(binary_expansion_weights(1), std::vector<double>({1}));
  EXPECT_EQ(binary_expansion_weights(5), std::vector<double>({1, 2, 4}));
  EXPECT_EQ(binary_expansion_weights(7), std::vector<double>({1, 2, 4}));
  EXPECT_EQ(binary_expansion_weights(8), std::vector<double>({1, 2, 4, 8}));
  EXPECT_THROW(binary_expansion_weights(-1), Error);
}

TEST(MilpBridge, IntegerExpansionRoundsDownTheLpOptimum) {
  // max x  s.t. 2x <= 7, x integer in [0, 5]  ->  3
  Milp m;
  m.c_x = {1.0};
  m.a_x = {{2.0}};
  m.a_y = {{}};
  m.b = {7.0};
  m.row_sense = {RowSense::kLessEq};
  Milp e = expand_integers(m, {0}, {5});
  EXPECT_EQ(e.num_y(), 3u);
  EncodedOutcome out = solve_encoded(e);
  ASSERT_EQ(out.outcome, oracle::Outcome::kOptimal);
  EXPECT_NEAR(out.value, 3.0, 1e-9);
  // The bound row forbids 6 and 7 even though 3 bits could express them.
  Milp loose = m;
  loose.b = {100.0};
  EXPECT_NEAR(solve_encoded(expand_integers(loose, {0}, {5})).value, 5.0, 1e-9);
}

TEST(MilpBridge, JsonRoundTrip) {
  Milp m = two_var_example();
  m.sense = ObjectiveSense::kMinimize;
  m.a_x[0][0] = 0.1;
  Milp back = milp_from_json(to_json(m));
  EXPECT_EQ(back.c_x, m.c_x);
  EXPECT_EQ(back.c_y, m.c_y);
  EXPECT_EQ(back.a_x, m.a_x);
  EXPECT_EQ(back.a_y, m.a_y);
  EXPECT_EQ(back.b, m.b);
  EXPECT_EQ(back.row_sense, m.row_sense);
  EXPECT_EQ(back.sense, m.sense);
  nlohmann::json bad = to_json(m);
  bad["rows"][0] = "1, 2, <";
  EXPECT_THROW(milp_from_json(bad), Error);
}

TEST(MilpBridge, SimplifyPreservesOptimum) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    solver::ConstraintProgram p = testing::random_lp(seed);
    // Add chains the simplifier can remove.
    const int a = p.add_variable("chain_a");
    const int b = p.add_variable("chain_b", solver::VarKind::kContinuous, 2.0);
    p.add_constraint({{a, 1.0}, {0, -2.0}}, solver::Sense::kEqual, 0.0);
    p.add_constraint({{b, 1.0}, {a, -1.0}}, solver::Sense::kEqual, 0.0);
    p.objective.terms.push_back({b, 0.5});
    SimplifiedProgram s = simplify(p);
    EXPECT_LT(s.program.variables.size(), p.variables.size());
    solver::Solution direct = solver::solve_lp(p);
    solver::Solution reduced = solver::solve_lp(s.program);
    ASSERT_EQ(direct.status, reduced.status) << "seed " << seed;
    if (direct.status == solver::Status::kOptimal) {
      EXPECT_NEAR(direct.objective, reduced.objective, 1e-7) << "seed " << seed;
      EXPECT_LE(solver::max_violation(p, s.expand(reduced.values)), 1e-6) << "seed " << seed;
    }
  }
}

TEST(MilpBridge, CompileNetworkGivesOneVariablePerEdge) {
  dsl::FlowNetwork net;
  net.add_node("s", dsl::NodeBehavior::source(dsl::BehaviorKind::kPick, 1.0));
  net.add_node("t", dsl::NodeBehavior::sink());
  net.add_edge("s", "t", 2.0);
  net.add_edge("s", "t");
  CompiledNetwork c = compile_network(net, "t");
  EXPECT_EQ(c.program.variables.size(), 2u);
  EXPECT_EQ(c.program.exactly_one_groups.size(), 1u);
  EXPECT_EQ(c.program.variables[c.edge_var[0]].upper, 2.0);
  EXPECT_THROW(compile_network(net, "t", {{"t", 1.0}}), Error);
}

}  // namespace
}  // namespace xplain::milp
