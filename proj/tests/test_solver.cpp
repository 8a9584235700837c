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
#include "xplain/solver.hpp"

namespace xplain::solver {
namespace {

TEST(Solver, SmallMaximization) {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
  ConstraintProgram p;
  int x = p.add_variable("x", VarKind::kContinuous, 3.0);
  int y = p.add_variable("y");
  p.add_constraint({{x, 1}, {y, 1}}, Sense::kLessEq, 4);
  p.add_constraint({{x, 1}, {y, 3}}, Sense::kLessEq, 6);
  p.objective.terms = {{x, 3}, {y, 2}};
  Solution s = solve_lp(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, 11.0, 1e-9);
  EXPECT_NEAR(s.values[x], 3.0, 1e-9);
  EXPECT_NEAR(s.values[y], 1.0, 1e-9);
}

TEST(Solver, InfeasibleAndUnbounded) {
  ConstraintProgram p;
  int x = p.add_variable("x");
  p.add_constraint({{x, 1}}, Sense::kGreaterEq, 2);
  p.add_constraint({{x, 1}}, Sense::kLessEq, 1);
  EXPECT_EQ(solve_lp(p).status, Status::kInfeasible);

  ConstraintProgram q;
  int a = q.add_variable("a");
  int b = q.add_variable("b");
  q.add_constraint({{a, 1}, {b, -1}}, Sense::kLessEq, 1);
  q.objective.terms = {{a, 1}};
  EXPECT_EQ(solve_lp(q).status, Status::kUnbounded);
}

TEST(Solver, EmptyProgramIsOptimalZero) {
  ConstraintProgram p;
  p.objective.constant = 2.5;
  Solution s = solve_lp(p);
  EXPECT_EQ(s.status, Status::kOptimal);
  EXPECT_DOUBLE_EQ(s.objective, 2.5);
}

TEST(Solver, RejectsBadTerm) {
  ConstraintProgram p;
  p.add_variable("x");
  p.add_constraint({{3, 1.0}}, Sense::kLessEq, 1);
  EXPECT_THROW(solve_lp(p), Error);
}

TEST(Solver, LpRejectsBinaries) {
  ConstraintProgram p;
  p.add_variable("y", VarKind::kBinary);
  EXPECT_THROW(solve_lp(p), Error);
}

TEST(Solver, RandomLpsMatchVertexEnumeration) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    ConstraintProgram p = testing::random_lp(seed);
    Solution s = solve_lp(p);
    oracle::Result ref = oracle::solve_program(p);
    const Status expect = ref.outcome == oracle::Outcome::kOptimal     ? Status::kOptimal
                          : ref.outcome == oracle::Outcome::kUnbounded ? Status::kUnbounded
                                                                        : Status::kInfeasible;
    ASSERT_EQ(s.status, expect) << "seed " << seed;
    if (expect == Status::kOptimal) {
      EXPECT_NEAR(s.objective, ref.value, 1e-7) << "seed " << seed;
      EXPECT_LE(max_violation(p, s.values), 1e-6);
    }
  }
}

TEST(Solver, KnapsackMip) {
  // max 5a + 4b + 3c  s.t. 2a + 3b + c <= 5 (a, b, c binary) -> a + b... = 9? a+c=8, a+b=9 (5 <= 5)
  ConstraintProgram p;
  int a = p.add_variable("a", VarKind::kBinary);
  int b = p.add_variable("b", VarKind::kBinary);
  int c = p.add_variable("c", VarKind::kBinary);
  p.add_constraint({{a, 2}, {b, 3}, {c, 1}}, Sense::kLessEq, 5);
  p.objective.terms = {{a, 5}, {b, 4}, {c, 3}};
  Solution s = solve_mip(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, 9.0, 1e-9);
}

TEST(Solver, RandomMipsMatchPatternEnumeration) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    ConstraintProgram p = milp::to_program(testing::random_milp(seed));
    Solution s = solve_mip(p);
    oracle::Result ref = oracle::solve_program(p);
    if (ref.outcome == oracle::Outcome::kOptimal) {
      ASSERT_EQ(s.status, Status::kOptimal) << "seed " << seed;
      EXPECT_NEAR(s.objective, ref.value, 1e-6) << "seed " << seed;
    } else if (ref.outcome == oracle::Outcome::kInfeasible) {
      EXPECT_EQ(s.status, Status::kInfeasible) << "seed " << seed;
    } else {
      EXPECT_EQ(s.status, Status::kUnbounded) << "seed " << seed;
    }
  }
}

TEST(Solver, ExactlyOneGroupForcesSingleCarrier) {
  // a + b = 2, a <= 1.5, b <= 1.5 is feasible as an LP but not when only one
  // of them may be positive.
  ConstraintProgram p;
  int a = p.add_variable("a", VarKind::kContinuous, 1.5);
  int b = p.add_variable("b", VarKind::kContinuous, 1.5);
  p.add_constraint({{a, 1}, {b, 1}}, Sense::kEqual, 2.0);
  EXPECT_EQ(solve_lp(p).status, Status::kOptimal);
  p.exactly_one_groups.push_back({a, b});
  EXPECT_EQ(solve_mip(p).status, Status::kInfeasible);

  ConstraintProgram q;
  int c = q.add_variable("c", VarKind::kContinuous, 3.0);
  int d = q.add_variable("d", VarKind::kContinuous, 1.0);
  q.add_constraint({{c, 1}, {d, 1}}, Sense::kEqual, 2.0);
  q.exactly_one_groups.push_back({c, d});
  q.objective.terms = {{d, 1}};
  Solution s = solve_mip(q);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.values[c], 2.0, 1e-9);
  EXPECT_NEAR(s.objective, 0.0, 1e-9);
}

TEST(Solver, NodeLimitThrowsBudgetExceeded) {
  ConstraintProgram p;
  std::vector<Term> row;
  for (int j = 0; j < 12; ++j) {
    p.add_variable("y" + std::to_string(j), VarKind::kBinary);
    row.push_back({j, 2.0});
  }
  p.add_constraint(row, Sense::kEqual, 11.0);  // parity makes this infeasible
  SolverOptions opts;
  opts.node_limit = 5;
  try {
    solve_mip(p, opts);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBudgetExceeded);
  }
}

TEST(Solver, LpFormatMentionsEverySection) {
  ConstraintProgram p;
  int x = p.add_variable("x", VarKind::kContinuous, 2.0);
  int y = p.add_variable("y", VarKind::kBinary);
  p.add_constraint({{x, 1}, {y, -1}}, Sense::kGreaterEq, 0.0, "link");
  p.exactly_one_groups.push_back({x, y});
  p.objective.terms = {{x, 1}};
  const std::string text = to_lp_format(p);
  for (const char* needle : {"Maximize", "Subject To", "Bounds", "Binaries", "SOS", "End"}) {
    EXPECT_NE(text.find(needle), std::string::npos) << needle;
  }
}

}  // namespace
}  // namespace xplain::solver
