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

#ifndef XPLAIN_SOLVER_HPP_
#define XPLAIN_SOLVER_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace xplain::solver {

enum class VarKind { kContinuous, kBinary };
enum class Sense { kLessEq, kEqual, kGreaterEq };
enum class ObjectiveSense { kMaximize, kMinimize };
enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  // Continuous variables are always >= 0; binaries live in {0, 1}.
  std::optional<double> upper;
};

struct Term {
  int var = 0;
  double coeff = 0.0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEq;
  double rhs = 0.0;
  std::string name;
};

struct Objective {
  std::vector<Term> terms;
  ObjectiveSense sense = ObjectiveSense::kMaximize;
  double constant = 0.0;
};

// A mixed-integer linear program over nonnegative variables.
//
// Exactly-one groups are disjunctive constraints over continuous variables:
// at most one member may be strictly positive. Paired with a conservation
// row they express "all inflow leaves on a single edge". They are enforced by
// branching, never by big-M rows.
struct ConstraintProgram {
  std::vector<Variable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<std::vector<int>> exactly_one_groups;
  Objective objective;

  int add_variable(std::string name, VarKind kind = VarKind::kContinuous,
                   std::optional<double> upper = std::nullopt);
  void add_constraint(std::vector<Term> terms, Sense sense, double rhs,
                      std::string name = {});

  std::size_t num_binaries() const;
  // Throws InvalidArgument when a term references a missing variable.
  void check() const;
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> values;
  std::size_t nodes = 0;       // branch-and-bound nodes (1 for pure LPs)
  std::size_t pivots = 0;
};

struct SolverOptions {
  double feas_tol = 1e-6;
  double pivot_tol = 1e-10;
  double flow_tol = 1e-9;
  std::size_t node_limit = 1'000'000;
  std::size_t pivot_limit = 200'000;
};

// Two-phase primal simplex (dense tableau, Dantzig pricing with a Bland
// fallback after degenerate runs). Rejects programs
// with binaries or exactly-one groups. Throws NumericalInstability when the
// final basis does not satisfy the constraints within feas_tol.
Solution solve_lp(const ConstraintProgram& prog, const SolverOptions& opts = {});

// Depth-first branch-and-bound: fractional binaries first (lowest index),
// then violated exactly-one groups (one child per member that may carry flow).
// Throws BudgetExceeded past opts.node_limit nodes.
Solution solve_mip(const ConstraintProgram& prog, const SolverOptions& opts = {});

// Maximum absolute violation of rows, bounds, integrality and groups.
double max_violation(const ConstraintProgram& prog,
                     const std::vector<double>& values, double flow_tol = 1e-9);

// Text export in the CPLEX LP file subset (objective, constraints, bounds,
// binaries; exactly-one groups as SOS1 sets).
std::string to_lp_format(const ConstraintProgram& prog);

}  // namespace xplain::solver

#endif  // XPLAIN_SOLVER_HPP_
