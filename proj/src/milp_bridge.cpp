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

#include "xplain/milp_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "xplain/error.hpp"

namespace xplain::milp {

using dsl::BehaviorKind;
using dsl::FlowNetwork;
using dsl::NodeBehavior;
using solver::ConstraintProgram;
using solver::Sense;
using solver::Term;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string var_name_for(const dsl::EdgeId& id) {
  std::string out = "f_";
  for (char c : id) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

std::string idx(std::size_t i) { return std::to_string(i); }
std::string idx(std::size_t i, std::size_t j) {
  return std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

// ---------------------------------------------------------------------------

CompiledNetwork compile_network(const FlowNetwork& net, const dsl::NodeId& objective_sink,
                                const dsl::Inputs& inputs) {
  if (auto violations = dsl::validate(net); !violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorKind::kInvalidNetwork,
                v.subject + ": " + v.rule + " (" + v.message + ")" +
                    (violations.size() > 1
                         ? " and " + std::to_string(violations.size() - 1) + " more"
                         : ""));
  }
  for (const auto& [id, value] : inputs) {
    const dsl::Node* n = net.find_node(id);
    if (!n || n->behavior.kind != BehaviorKind::kSource) {
      throw Error(ErrorKind::kInvalidArgument, "input for unknown source '" + id + "'");
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw Error(ErrorKind::kInvalidArgument, "input for '" + id + "' must be >= 0");
    }
  }

  CompiledNetwork out;
  ConstraintProgram& prog = out.program;
  const auto& edges = net.edges();
  out.edge_var.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::optional<double> upper = edges[e].capacity;
    const auto& from = net.find_node(edges[e].from)->behavior;
    if (auto it = from.outgoing_capacities.find(edges[e].id);
        it != from.outgoing_capacities.end()) {
      upper = upper ? std::min(*upper, it->second) : it->second;
    }
    out.edge_var[e] = prog.add_variable(var_name_for(edges[e].id),
                                        solver::VarKind::kContinuous, upper);
    if (edges[e].fixed_rate) {
      prog.add_constraint({{out.edge_var[e], 1.0}}, Sense::kEqual, *edges[e].fixed_rate,
                          "rate_" + var_name_for(edges[e].id).substr(2));
    }
  }

  auto flow_terms = [&](const std::vector<std::size_t>& es, double coeff) {
    std::vector<Term> terms;
    for (std::size_t e : es) terms.push_back({out.edge_var[e], coeff});
    return terms;
  };
  auto conservation = [&](const dsl::Node& n, double rhs, const std::string& tag) {
    std::vector<Term> terms = flow_terms(net.outgoing(n.id), 1.0);
    for (const Term& t : flow_terms(net.incoming(n.id), -1.0)) terms.push_back(t);
    if (!terms.empty() || rhs != 0.0) {
      prog.add_constraint(std::move(terms), Sense::kEqual, rhs, tag + "_" + n.id);
    }
  };
  auto exactly_one = [&](const dsl::Node& n) {
    std::vector<int> group;
    for (std::size_t e : net.outgoing(n.id)) group.push_back(out.edge_var[e]);
    if (group.size() > 1) prog.exactly_one_groups.push_back(std::move(group));
  };

  for (const auto& n : net.nodes()) {
    const auto& b = n.behavior;
    const auto& in = net.incoming(n.id);
    const auto& outs = net.outgoing(n.id);
    for (const auto& [id, rate] : b.fixed_incoming) {
      prog.add_constraint({{out.edge_var[*net.edge_index(id)], 1.0}}, Sense::kEqual, rate,
                          "fixed_" + n.id);
    }
    switch (b.kind) {
      case BehaviorKind::kSplit:
        conservation(n, 0.0, "split");
        break;
      case BehaviorKind::kPick:
        conservation(n, 0.0, "pick");
        exactly_one(n);
        break;
      case BehaviorKind::kMultiply:
        prog.add_constraint({{out.edge_var[outs[0]], 1.0}, {out.edge_var[in[0]], -b.factor}},
                            Sense::kEqual, 0.0, "mult_" + n.id);
        break;
      case BehaviorKind::kAllEqual: {
        std::vector<std::size_t> incident = in;
        incident.insert(incident.end(), outs.begin(), outs.end());
        for (std::size_t k = 0; k + 1 < incident.size(); ++k) {
          prog.add_constraint({{out.edge_var[incident[k]], 1.0},
                               {out.edge_var[incident[k + 1]], -1.0}},
                              Sense::kEqual, 0.0, "alleq_" + n.id);
        }
        break;
      }
      case BehaviorKind::kCopy:
        for (std::size_t e : outs) {
          std::vector<Term> terms = flow_terms(in, -1.0);
          terms.push_back({out.edge_var[e], 1.0});
          prog.add_constraint(std::move(terms), Sense::kEqual, 0.0, "copy_" + n.id);
        }
        break;
      case BehaviorKind::kSource: {
        std::optional<double> rate = b.rate;
        if (auto it = inputs.find(n.id); it != inputs.end()) rate = it->second;
        if (rate) conservation(n, *rate, "source");
        if (b.inner == BehaviorKind::kPick) exactly_one(n);
        break;
      }
      case BehaviorKind::kSink:
        break;
      default:
        throw Error(ErrorKind::kUnsupportedBehavior,
                    std::string("cannot compile behavior ") + dsl::to_string(b.kind));
    }
  }

  if (!objective_sink.empty()) {
    const dsl::Node* sink = net.find_node(objective_sink);
    if (!sink || sink->behavior.kind != BehaviorKind::kSink) {
      throw Error(ErrorKind::kInvalidNetwork, "'" + objective_sink + "' is not a sink node");
    }
    prog.objective.terms = flow_terms(net.incoming(objective_sink), 1.0);
    prog.objective.sense = sink->behavior.sense == dsl::SinkSense::kMaximize
                               ? solver::ObjectiveSense::kMaximize
                               : solver::ObjectiveSense::kMinimize;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> SimplifiedProgram::expand(const std::vector<double>& reduced) const {
  std::vector<double> full(image.size());
  for (std::size_t j = 0; j < image.size(); ++j) {
    const VarImage& im = image[j];
    full[j] = im.offset + (im.rep >= 0 ? im.scale * reduced[im.rep] : 0.0);
  }
  return full;
}

SimplifiedProgram simplify(const ConstraintProgram& prog) {
  prog.check();
  const int n = static_cast<int>(prog.variables.size());
  std::vector<VarImage> img(n);
  std::vector<double> upper(n, kInf);
  std::vector<char> fixed_rep(n, 0);
  for (int j = 0; j < n; ++j) {
    img[j] = VarImage{j, 1.0, 0.0};
    if (prog.variables[j].upper) upper[j] = *prog.variables[j].upper;
    if (prog.variables[j].kind == solver::VarKind::kBinary) {
      fixed_rep[j] = 1;
      upper[j] = std::min(upper[j], 1.0);
    }
  }
  for (const auto& group : prog.exactly_one_groups) {
    for (int v : group) fixed_rep[v] = 1;
  }

  // Terms in current representatives plus the constant they contribute.
  auto resolve = [&](const std::vector<Term>& terms) {
    std::map<int, double> coeffs;
    double constant = 0.0;
    for (const Term& t : terms) {
      const VarImage& im = img[t.var];
      constant += t.coeff * im.offset;
      if (im.rep >= 0) coeffs[im.rep] += t.coeff * im.scale;
    }
    for (auto it = coeffs.begin(); it != coeffs.end();) {
      it = std::fabs(it->second) < 1e-15 ? coeffs.erase(it) : std::next(it);
    }
    return std::make_pair(coeffs, constant);
  };
  auto retarget = [&](int from, int rep, double scale, double offset) {
    for (auto& im : img) {
      if (im.rep != from) continue;
      im = rep >= 0 ? VarImage{rep, im.scale * scale, im.offset}
                    : VarImage{-1, 0.0, im.offset + im.scale * offset};
    }
  };

  const std::size_t m = prog.constraints.size();
  std::vector<char> alive(m, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = prog.constraints[i];
      if (!alive[i] || c.sense != Sense::kEqual) continue;
      auto [coeffs, constant] = resolve(c.terms);
      const double rhs = c.rhs - constant;
      if (coeffs.empty()) {
        if (std::fabs(rhs) <= 1e-9) alive[i] = 0;
        continue;
      }
      if (coeffs.size() == 1) {
        auto [r, a] = *coeffs.begin();
        if (fixed_rep[r]) continue;
        const double v = rhs / a;
        if (v < -1e-12 || v > upper[r] + 1e-12) continue;  // leave it to the solver
        retarget(r, -1, 0.0, std::max(0.0, v));
        alive[i] = 0;
        changed = true;
        continue;
      }
      if (coeffs.size() == 2 && std::fabs(rhs) <= 1e-12) {
        auto it = coeffs.begin();
        auto [r1, a1] = *it++;
        auto [r2, a2] = *it;
        const double k = -a2 / a1;  // x_r1 = k * x_r2
        if (!(k > 0.0)) continue;
        int elim, keep;
        double factor;
        if (!fixed_rep[r2]) {
          elim = r2, keep = r1, factor = 1.0 / k;  // prefer keeping the lower index
        } else if (!fixed_rep[r1]) {
          elim = r1, keep = r2, factor = k;
        } else {
          continue;
        }
        upper[keep] = std::min(upper[keep], upper[elim] / factor);
        retarget(elim, keep, factor, 0.0);
        alive[i] = 0;
        changed = true;
      }
    }
  }

  // Rebuild over the surviving representatives.
  std::vector<char> used(n, 0);
  std::vector<std::pair<std::map<int, double>, double>> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    rows[i] = resolve(prog.constraints[i].terms);
    for (const auto& [r, a] : rows[i].first) used[r] = 1;
  }
  auto objective = resolve(prog.objective.terms);
  for (const auto& [r, a] : objective.first) used[r] = 1;
  for (const auto& group : prog.exactly_one_groups) {
    for (int v : group) used[v] = 1;
  }

  SimplifiedProgram out;
  std::vector<int> renum(n, -1);
  for (int j = 0; j < n; ++j) {
    if (!used[j]) continue;
    std::optional<double> ub;
    if (std::isfinite(upper[j])) ub = upper[j];
    if (prog.variables[j].kind == solver::VarKind::kBinary) ub.reset();
    renum[j] = out.program.add_variable(prog.variables[j].name, prog.variables[j].kind, ub);
  }
  auto remap = [&](const std::map<int, double>& coeffs) {
    std::vector<Term> terms;
    for (const auto& [r, a] : coeffs) terms.push_back({renum[r], a});
    return terms;
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    const auto& c = prog.constraints[i];
    const double rhs = c.rhs - rows[i].second;
    if (rows[i].first.empty()) {
      const bool ok = (c.sense == Sense::kLessEq && rhs >= -1e-9) ||
                      (c.sense == Sense::kGreaterEq && rhs <= 1e-9) ||
                      (c.sense == Sense::kEqual && std::fabs(rhs) <= 1e-9);
      if (ok) continue;
    }
    out.program.add_constraint(remap(rows[i].first), c.sense, rhs, c.name);
  }
  out.program.objective.sense = prog.objective.sense;
  out.program.objective.constant = prog.objective.constant + objective.second;
  out.program.objective.terms = remap(objective.first);
  for (const auto& group : prog.exactly_one_groups) {
    std::vector<int> mapped;
    for (int v : group) mapped.push_back(renum[v]);
    out.program.exactly_one_groups.push_back(std::move(mapped));
  }

  out.image.resize(n);
  for (int j = 0; j < n; ++j) {
    const VarImage& im = img[j];
    if (im.rep >= 0 && renum[im.rep] >= 0) {
      out.image[j] = VarImage{renum[im.rep], im.scale, im.offset};
    } else {
      // Unused representatives sit at zero, which is always feasible for them.
      out.image[j] = VarImage{-1, 0.0, im.offset};
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void Milp::check() const {
  const std::size_t rows = b.size();
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); };
  if (a_x.size() != rows || a_y.size() != rows || row_sense.size() != rows) {
    fail("MILP row count mismatch between A_x, A_y, b and senses");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (a_x[i].size() != c_x.size()) fail("A_x row " + idx(i) + " has wrong width");
    if (a_y[i].size() != c_y.size()) fail("A_y row " + idx(i) + " has wrong width");
    for (double v : a_x[i]) if (!std::isfinite(v)) fail("non-finite A_x entry");
    for (double v : a_y[i]) if (!std::isfinite(v)) fail("non-finite A_y entry");
    if (!std::isfinite(b[i])) fail("non-finite b entry");
  }
  for (double v : c_x) if (!std::isfinite(v)) fail("non-finite c_x entry");
  for (double v : c_y) if (!std::isfinite(v)) fail("non-finite c_y entry");
}

ConstraintProgram to_program(const Milp& m) {
  m.check();
  ConstraintProgram prog;
  for (std::size_t j = 0; j < m.num_x(); ++j) prog.add_variable("x" + idx(j));
  for (std::size_t j = 0; j < m.num_y(); ++j) {
    prog.add_variable("y" + idx(j), solver::VarKind::kBinary);
  }
  const int nx = static_cast<int>(m.num_x());
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < m.num_x(); ++j) {
      if (m.a_x[i][j] != 0.0) terms.push_back({static_cast<int>(j), m.a_x[i][j]});
    }
    for (std::size_t j = 0; j < m.num_y(); ++j) {
      if (m.a_y[i][j] != 0.0) terms.push_back({nx + static_cast<int>(j), m.a_y[i][j]});
    }
    prog.add_constraint(std::move(terms),
                        m.row_sense[i] == RowSense::kEqual ? Sense::kEqual : Sense::kLessEq,
                        m.b[i], "r" + idx(i));
  }
  prog.objective.sense = m.sense;
  for (std::size_t j = 0; j < m.num_x(); ++j) {
    if (m.c_x[j] != 0.0) prog.objective.terms.push_back({static_cast<int>(j), m.c_x[j]});
  }
  for (std::size_t j = 0; j < m.num_y(); ++j) {
    if (m.c_y[j] != 0.0) prog.objective.terms.push_back({nx + static_cast<int>(j), m.c_y[j]});
  }
  return prog;
}

namespace {

SignSplit split_signs(const std::vector<std::vector<double>>& a) {
  SignSplit s;
  for (const auto& row : a) {
    std::vector<double> plus(row.size(), 0.0), minus(row.size(), 0.0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] > 0) plus[j] = row[j];
      if (row[j] < 0) minus[j] = -row[j];
    }
    s.plus.push_back(std::move(plus));
    s.minus.push_back(std::move(minus));
  }
  return s;
}

// Smallest K >= 0 with c·x + K >= 0 at the optimum (max form). Prefers the
// LP-relaxation minimum, which makes p >= 0 hold on the whole feasible set.
double objective_offset(const Milp& max_form) {
  ConstraintProgram relaxed = to_program(max_form);
  for (auto& v : relaxed.variables) {
    if (v.kind == solver::VarKind::kBinary) {
      v.kind = solver::VarKind::kContinuous;
      v.upper = 1.0;
    }
  }
  relaxed.objective.sense = solver::ObjectiveSense::kMinimize;
  solver::Solution low = solver::solve_lp(relaxed);
  if (low.status == solver::Status::kOptimal) return std::max(0.0, -low.objective);
  if (low.status == solver::Status::kInfeasible) return 0.0;
  solver::Solution best = solver::solve_mip(to_program(max_form));
  if (best.status == solver::Status::kOptimal) return std::max(0.0, -best.objective);
  return 0.0;
}

}  // namespace

Encoding encode_milp(const Milp& m) {
  m.check();
  const double sign = m.sense == solver::ObjectiveSense::kMaximize ? 1.0 : -1.0;
  Milp max_form = m;
  max_form.sense = solver::ObjectiveSense::kMaximize;
  for (double& v : max_form.c_x) v *= sign;
  for (double& v : max_form.c_y) v *= sign;
  const double offset = objective_offset(max_form);

  const std::size_t nx = m.num_x();
  const std::size_t ny = m.num_y();
  const std::size_t np = nx + 1;  // x plus the objective variable p
  std::vector<std::vector<double>> ax, ay;
  std::vector<double> b;
  std::vector<int> source_row;
  auto push_row = [&](std::vector<double> rx, std::vector<double> ry, double rhs, int src) {
    rx.resize(np, 0.0);
    ax.push_back(std::move(rx));
    ay.push_back(std::move(ry));
    b.push_back(rhs);
    source_row.push_back(src);
  };
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    push_row(m.a_x[i], m.a_y[i], m.b[i], static_cast<int>(i));
    if (m.row_sense[i] == RowSense::kEqual) {
      std::vector<double> nx_row = m.a_x[i], ny_row = m.a_y[i];
      for (double& v : nx_row) v = -v;
      for (double& v : ny_row) v = -v;
      push_row(std::move(nx_row), std::move(ny_row), -m.b[i], static_cast<int>(i));
    }
  }
  // p - c·x - c·y <= K  and  -p + c·x + c·y <= -K
  {
    std::vector<double> rx(np, 0.0), ry(ny, 0.0);
    for (std::size_t j = 0; j < nx; ++j) rx[j] = -max_form.c_x[j];
    for (std::size_t j = 0; j < ny; ++j) ry[j] = -max_form.c_y[j];
    rx[nx] = 1.0;
    push_row(rx, ry, offset, -1);
    for (double& v : rx) v = -v;
    for (double& v : ry) v = -v;
    push_row(rx, ry, -offset, -1);
  }

  Encoding enc;
  EncodingTrace& tr = enc.trace;
  FlowNetwork& net = enc.network;
  tr.a_x = split_signs(ax);
  tr.a_y = split_signs(ay);
  tr.num_rows = b.size();
  tr.source_row = source_row;
  tr.objective_sign = sign;
  tr.objective_offset = offset;
  for (double v : b) {
    tr.b_plus.push_back(v > 0 ? v : 0.0);
    tr.b_minus.push_back(v < 0 ? -v : 0.0);
  }

  const dsl::NodeId sink = "OBJ";
  const dsl::NodeId discard = "DISCARD";
  tr.sink = sink;
  net.add_node(sink, NodeBehavior::sink(dsl::SinkSense::kMaximize), {{"role", "objective"}});
  net.add_node(discard, NodeBehavior::sink(dsl::SinkSense::kMaximize), {{"role", "absorber"}});

  for (std::size_t j = 0; j < np; ++j) {
    const bool is_p = j == nx;
    const std::string role = is_p ? "objective variable p" : "continuous x" + idx(j);
    net.add_node("XS" + idx(j), NodeBehavior::source(BehaviorKind::kSplit), {{"role", role}});
    net.add_node("X" + idx(j), NodeBehavior::all_equal(), {{"role", role}});
    dsl::EdgeId e = net.add_edge("XS" + idx(j), "X" + idx(j), std::nullopt, std::nullopt,
                                 {{"var", is_p ? "p" : "x" + idx(j)}}, "x" + idx(j));
    if (!is_p) tr.x_edge.push_back(e);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    net.add_node("YP" + idx(j), NodeBehavior::source(BehaviorKind::kPick, 1.0),
                 {{"role", "binary y" + idx(j)}});
    net.add_node("Y" + idx(j), NodeBehavior::all_equal(), {{"role", "binary y" + idx(j)}});
    tr.y_edge.push_back(net.add_edge("YP" + idx(j), "Y" + idx(j), std::nullopt, std::nullopt,
                                     {{"var", "y" + idx(j)}}, "y" + idx(j)));
    net.add_edge("YP" + idx(j), discard, std::nullopt, std::nullopt,
                 {{"var", "not y" + idx(j)}}, "ybar" + idx(j));
  }

  for (std::size_t i = 0; i < b.size(); ++i) {
    const dsl::NodeId row = "R" + idx(i);
    net.add_node(row, NodeBehavior::split(), {{"role", "constraint row " + idx(i)}});
    auto wire = [&](const std::string& var_node, const std::string& kind, std::size_t j,
                    double plus, double minus,
                    std::map<std::pair<int, int>, dsl::EdgeId>& var_plus,
                    std::map<std::pair<int, int>, dsl::EdgeId>& aux_plus,
                    std::map<std::pair<int, int>, dsl::EdgeId>& aux_minus,
                    std::map<std::pair<int, int>, dsl::EdgeId>& var_minus,
                    const std::string& aux) {
      const auto key = std::make_pair(static_cast<int>(i), static_cast<int>(j));
      const std::string ij = idx(i, j);
      if (plus > 0) {
        const dsl::NodeId mult = "M" + kind + "P" + ij;
        net.add_node(mult, NodeBehavior::multiply(plus));
        var_plus[key] = net.add_edge(var_node, mult, std::nullopt, std::nullopt,
                                     {{"var", kind + "+"}}, kind + "p" + ij);
        aux_plus[key] = net.add_edge(mult, row, std::nullopt, std::nullopt,
                                     {{"var", aux + "+"}}, aux + "p" + ij);
      } else if (minus > 0) {
        const dsl::NodeId mult = "M" + kind + "M" + ij;
        net.add_node(mult, NodeBehavior::multiply(1.0 / minus));
        aux_minus[key] = net.add_edge(row, mult, std::nullopt, std::nullopt,
                                      {{"var", aux + "-"}}, aux + "m" + ij);
        var_minus[key] = net.add_edge(mult, var_node, std::nullopt, std::nullopt,
                                      {{"var", kind + "-"}}, kind + "m" + ij);
      }
    };
    for (std::size_t j = 0; j < np; ++j) {
      wire("X" + idx(j), "x", j, tr.a_x.plus[i][j], tr.a_x.minus[i][j], tr.x_plus,
           tr.u_plus, tr.u_minus, tr.x_minus, "u");
    }
    for (std::size_t j = 0; j < ny; ++j) {
      wire("Y" + idx(j), "y", j, tr.a_y.plus[i][j], tr.a_y.minus[i][j], tr.y_plus,
           tr.v_plus, tr.v_minus, tr.y_minus, "v");
    }
    if (tr.b_minus[i] > 0) {
      net.add_node("BM" + idx(i), NodeBehavior::source(BehaviorKind::kSplit, tr.b_minus[i]),
                   {{"role", "constant b- " + idx(i)}});
      net.add_edge("BM" + idx(i), row, std::nullopt, tr.b_minus[i], {{"var", "b-"}},
                   "bm" + idx(i));
    }
    if (tr.b_plus[i] > 0) {
      net.add_edge(row, discard, std::nullopt, tr.b_plus[i], {{"var", "b+"}}, "bp" + idx(i));
    }
    net.add_node("FS" + idx(i), NodeBehavior::source(BehaviorKind::kSplit),
                 {{"role", "slack " + idx(i)}});
    tr.slack_edge.push_back(net.add_edge("FS" + idx(i), row, std::nullopt, std::nullopt,
                                         {{"var", "f"}}, "f" + idx(i)));
  }
  tr.objective_edge = net.add_edge("X" + idx(nx), sink, std::nullopt, std::nullopt,
                                   {{"var", "p"}}, "p");
  return enc;
}

std::vector<double> binary_expansion_weights(int bound) {
  if (bound < 0) throw Error(ErrorKind::kInvalidArgument, "integer bound must be >= 0");
  std::vector<double> w;
  for (long long pw = 1, total = 0; total < bound; pw *= 2) {
    w.push_back(static_cast<double>(pw));
    total += pw;
  }
  return w;
}

Milp expand_integers(const Milp& m, const std::vector<int>& integer_columns,
                     const std::vector<int>& bounds) {
  m.check();
  if (integer_columns.size() != bounds.size()) {
    throw Error(ErrorKind::kInvalidArgument, "one bound per integer column required");
  }
  Milp out = m;
  for (std::size_t k = 0; k < integer_columns.size(); ++k) {
    const int col = integer_columns[k];
    if (col < 0 || static_cast<std::size_t>(col) >= m.num_x()) {
      throw Error(ErrorKind::kInvalidArgument, "integer column out of range");
    }
    const std::vector<double> w = binary_expansion_weights(bounds[k]);
    const std::size_t first = out.num_y();
    for (std::size_t t = 0; t < w.size(); ++t) {
      out.c_y.push_back(0.0);
      for (auto& row : out.a_y) row.push_back(0.0);
    }
    std::vector<double> rx(out.num_x(), 0.0), ry(out.num_y(), 0.0);
    rx[col] = 1.0;
    for (std::size_t t = 0; t < w.size(); ++t) ry[first + t] = -w[t];
    out.a_x.push_back(rx);
    out.a_y.push_back(ry);
    out.b.push_back(0.0);
    out.row_sense.push_back(RowSense::kEqual);
    std::vector<double> bx(out.num_x(), 0.0), by(out.num_y(), 0.0);
    for (std::size_t t = 0; t < w.size(); ++t) by[first + t] = w[t];
    out.a_x.push_back(bx);
    out.a_y.push_back(by);
    out.b.push_back(static_cast<double>(bounds[k]));
    out.row_sense.push_back(RowSense::kLessEq);
  }
  return out;
}

// MILP file: {"sense", "c_x", "c_y", "rows": ["a_x..., a_y..., <=|=, b", ...]}
nlohmann::json to_json(const Milp& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    std::ostringstream line;
    line.precision(17);
    for (double v : m.a_x[i]) line << v << ", ";
    for (double v : m.a_y[i]) line << v << ", ";
    line << (m.row_sense[i] == RowSense::kEqual ? "=" : "<=") << ", " << m.b[i];
    rows.push_back(line.str());
  }
  return nlohmann::json{
      {"sense", m.sense == solver::ObjectiveSense::kMaximize ? "maximize" : "minimize"},
      {"c_x", m.c_x},
      {"c_y", m.c_y},
      {"rows", rows}};
}

Milp milp_from_json(const nlohmann::json& doc) {
  Milp m;
  try {
    const std::string sense = doc.value("sense", std::string("maximize"));
    if (sense != "maximize" && sense != "minimize") {
      throw Error(ErrorKind::kParse, "MILP sense must be maximize or minimize");
    }
    m.sense = sense == "maximize" ? solver::ObjectiveSense::kMaximize
                                  : solver::ObjectiveSense::kMinimize;
    m.c_x = doc.at("c_x").get<std::vector<double>>();
    m.c_y = doc.value("c_y", std::vector<double>{});
    for (const auto& jr : doc.at("rows")) {
      std::vector<std::string> cells;
      std::stringstream ss(jr.get<std::string>());
      for (std::string cell; std::getline(ss, cell, ',');) {
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
      }
      const std::size_t width = m.num_x() + m.num_y();
      if (cells.size() != width + 2) {
        throw Error(ErrorKind::kParse, "MILP row needs " + std::to_string(width + 2) +
                                           " comma-separated cells");
      }
      std::vector<double> rx, ry;
      for (std::size_t j = 0; j < width; ++j) {
        (j < m.num_x() ? rx : ry).push_back(std::stod(cells[j]));
      }
      const std::string& s = cells[width];
      if (s != "<=" && s != "=") throw Error(ErrorKind::kParse, "row sense must be <= or =");
      m.a_x.push_back(std::move(rx));
      m.a_y.push_back(std::move(ry));
      m.row_sense.push_back(s == "=" ? RowSense::kEqual : RowSense::kLessEq);
      m.b.push_back(std::stod(cells[width + 1]));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kParse, std::string("MILP JSON: ") + ex.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::kParse, "MILP row holds a non-numeric cell");
  }
  m.check();
  return m;
}

}  // namespace xplain::milp
