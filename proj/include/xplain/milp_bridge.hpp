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

#ifndef XPLAIN_MILP_BRIDGE_HPP_
#define XPLAIN_MILP_BRIDGE_HPP_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplain/flow_dsl.hpp"
#include "xplain/solver.hpp"

namespace xplain::milp {

// ---------------------------------------------------------------------------
// Network -> program compilation
// ---------------------------------------------------------------------------

struct CompiledNetwork {
  solver::ConstraintProgram program;
  std::vector<int> edge_var;  // edge index -> program variable
};

// One continuous variable per edge. Node behaviors become rows (pick nodes
// also become exactly-one groups). When `objective_sink` is empty the program
// has a zero objective. Throws InvalidNetwork when validation fails or the
// sink is unknown.
CompiledNetwork compile_network(const dsl::FlowNetwork& net,
                                const dsl::NodeId& objective_sink,
                                const dsl::Inputs& inputs = {});

// ---------------------------------------------------------------------------
// Equality-chain simplification
// ---------------------------------------------------------------------------

// Original variable j takes the value scale * reduced[rep] + offset
// (rep < 0 means the variable is the constant `offset`).
struct VarImage {
  int rep = -1;
  double scale = 0.0;
  double offset = 0.0;
};

struct SimplifiedProgram {
  solver::ConstraintProgram program;
  std::vector<VarImage> image;  // indexed by original variable

  std::vector<double> expand(const std::vector<double>& reduced) const;
};

// Substitutes variables pinned by two-variable proportional equalities and
// single-variable equalities, then drops empty rows and unused variables.
// Binaries and exactly-one group members are never eliminated.
SimplifiedProgram simplify(const solver::ConstraintProgram& prog);

// ---------------------------------------------------------------------------
// MILP -> network encoder
// ---------------------------------------------------------------------------

enum class RowSense { kLessEq, kEqual };

// max/min c_x·x + c_y·y  s.t.  A_x x + A_y y (<= | =) b,  x >= 0,  y binary.
struct Milp {
  std::vector<double> c_x;
  std::vector<double> c_y;
  std::vector<std::vector<double>> a_x;  // |b| rows of |x| entries
  std::vector<std::vector<double>> a_y;  // |b| rows of |y| entries
  std::vector<double> b;
  std::vector<RowSense> row_sense;
  solver::ObjectiveSense sense = solver::ObjectiveSense::kMaximize;

  std::size_t num_x() const { return c_x.size(); }
  std::size_t num_y() const { return c_y.size(); }
  std::size_t num_rows() const { return b.size(); }
  // Throws InvalidArgument on inconsistent dimensions or non-finite data.
  void check() const;
};

// Direct solver form of the MILP (continuous x, binary y).
solver::ConstraintProgram to_program(const Milp& m);

// Positive/negative parts with disjoint supports: m = plus - minus.
struct SignSplit {
  std::vector<std::vector<double>> plus;
  std::vector<std::vector<double>> minus;
};

struct EncodingTrace {
  SignSplit a_x;
  SignSplit a_y;
  std::vector<double> b_plus;
  std::vector<double> b_minus;
  // Rows after equality expansion; the last row is the objective constraint
  // when present. Indices below refer to these expanded rows.
  std::size_t num_rows = 0;
  std::vector<int> source_row;  // expanded row -> original row (-1 objective)

  // Edge ids for every variable and auxiliary flow.
  std::vector<dsl::EdgeId> x_edge;                  // x_j
  std::vector<dsl::EdgeId> y_edge;                  // y_j (pick output)
  std::map<std::pair<int, int>, dsl::EdgeId> u_plus, u_minus;  // (i, j)
  std::map<std::pair<int, int>, dsl::EdgeId> v_plus, v_minus;
  std::map<std::pair<int, int>, dsl::EdgeId> x_plus, x_minus;
  std::map<std::pair<int, int>, dsl::EdgeId> y_plus, y_minus;
  std::vector<dsl::EdgeId> slack_edge;              // f_i
  dsl::EdgeId objective_edge;                       // p, into the sink
  dsl::NodeId sink;
  // Sink inflow equals objective_sign * objective + objective_offset; the
  // network always maximizes, so minimization flips the sign.
  double objective_sign = 1.0;
  double objective_offset = 0.0;
};

struct Encoding {
  dsl::FlowNetwork network;
  EncodingTrace trace;
};

// Builds a flow network whose optimal objective-sink inflow, minus
// trace.objective_offset, equals the MILP optimum. Equality rows are split
// into two <= rows; each constraint row becomes one split node, every nonzero
// coefficient one multiply node, every variable one all-equal node, and every
// binary a pick node fed at constant rate 1. The objective is the extra row
// p = c·x + offset with p feeding the sink; the offset keeps p nonnegative.
Encoding encode_milp(const Milp& m);

// Replaces an integer variable bounded by [0, bound] with binaries:
// x = sum_k 2^k * y_k. Returns the coefficient vector used.
std::vector<double> binary_expansion_weights(int bound);

// Rewrites integer columns (indices into x) of `m` as binaries with the given
// upper bounds, appending the new binaries to y and adding x_j's bound rows.
Milp expand_integers(const Milp& m, const std::vector<int>& integer_columns,
                     const std::vector<int>& bounds);

nlohmann::json to_json(const Milp& m);
Milp milp_from_json(const nlohmann::json& doc);

}  // namespace xplain::milp

#endif  // XPLAIN_MILP_BRIDGE_HPP_
