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

#include "xplain/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "xplain/error.hpp"

namespace xplain::solver {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOptTol = 1e-9;
constexpr double kZeroClean = 1e-13;

struct LpResult {
  Status status = Status::kInfeasible;
  double objective = 0.0;  // in maximize form, without the constant
  std::vector<double> x;
  std::size_t pivots = 0;
};

// Dense simplex tableau. Row m_ is the reduced-cost row; column n_ holds the
// right-hand side.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), a_(static_cast<std::size_t>(rows + 1) * (cols + 1)) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * (n_ + 1) + c];
  }
  double& rhs(int r) { return at(r, n_); }
  double rhs(int r) const { return at(r, n_); }
  int rows() const { return m_; }
  int cols() const { return n_; }

  void pivot(int r, int s) {
    const int w = n_ + 1;
    double* prow = &a_[static_cast<std::size_t>(r) * w];
    const double inv = 1.0 / prow[s];
    for (int j = 0; j < w; ++j) prow[j] *= inv;
    prow[s] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &a_[static_cast<std::size_t>(i) * w];
      const double f = row[s];
      if (f == 0.0) continue;
      for (int j = 0; j < w; ++j) {
        if (prow[j] == 0.0) continue;
        double v = row[j] - f * prow[j];
        if (std::fabs(v) < kZeroClean) v = 0.0;
        row[j] = v;
      }
      row[s] = 0.0;
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> a_;
};

class SimplexRun {
 public:
  SimplexRun(Tableau& t, std::vector<int>& basis, const SolverOptions& opts,
             std::size_t& pivots)
      : t_(t), basis_(basis), opts_(opts), pivots_(pivots) {}

  // Loads reduced costs for maximizing cost·x with the current basis.
  void load_costs(const std::vector<double>& cost) {
    const int m = t_.rows();
    const int n = t_.cols();
    for (int j = 0; j <= n; ++j) t_.at(m, j) = j < n ? -cost[j] : 0.0;
    for (int i = 0; i < m; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n; ++j) t_.at(m, j) += cb * t_.at(i, j);
    }
  }

  // Returns kOptimal or kUnbounded.
  Status iterate(const std::vector<char>& allowed) {
    const int m = t_.rows();
    const int n = t_.cols();
    // Dantzig pricing; a run of degenerate pivots switches to Bland's rule,
    // which cannot cycle.
    bool bland = false;
    int degenerate = 0;
    while (true) {
      int enter = -1;
      double most = -kOptTol;
      for (int j = 0; j < n; ++j) {
        if (!allowed[j]) continue;
        const double d = t_.at(m, j);
        if (d < most) {
          enter = j;
          if (bland) break;
          most = d;
        }
      }
      if (enter < 0) return Status::kOptimal;
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < m; ++i) {
        const double a = t_.at(i, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = std::max(0.0, t_.rhs(i)) / a;
        if (leave < 0 || ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return Status::kUnbounded;
      if (best <= 1e-12) {
        if (++degenerate > 50) bland = true;
      } else {
        degenerate = 0;
      }
      t_.pivot(leave, enter);
      basis_[leave] = enter;
      if (++pivots_ > opts_.pivot_limit) {
        throw Error(ErrorKind::kNumericalInstability,
                    "simplex pivot limit exceeded");
      }
    }
  }

 private:
  Tableau& t_;
  std::vector<int>& basis_;
  const SolverOptions& opts_;
  std::size_t& pivots_;
};

// Maximizes cost·x over the program's rows with per-variable bounds
// lower <= x <= upper (upper may be +inf). Integrality and groups ignored.
LpResult solve_bounded(const ConstraintProgram& prog,
                       const std::vector<double>& cost,
                       const std::vector<double>& lower,
                       const std::vector<double>& upper,
                       const SolverOptions& opts) {
  LpResult out;
  const int nv = static_cast<int>(prog.variables.size());
  std::vector<int> col(nv, -1);
  int ns = 0;
  for (int j = 0; j < nv; ++j) {
    if (upper[j] < lower[j] - opts.feas_tol) return out;  // infeasible
    if (upper[j] - lower[j] > 1e-12) col[j] = ns++;
  }

  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Sense sense;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(prog.constraints.size() + ns);
  for (const auto& c : prog.constraints) {
    Row row{{}, c.sense, c.rhs};
    for (const auto& term : c.terms) {
      if (term.coeff == 0.0) continue;
      row.rhs -= term.coeff * lower[term.var];
      if (col[term.var] >= 0) row.coeffs.emplace_back(col[term.var], term.coeff);
    }
    if (row.coeffs.empty()) {
      const bool ok = (c.sense == Sense::kLessEq && row.rhs >= -opts.feas_tol) ||
                      (c.sense == Sense::kGreaterEq && row.rhs <= opts.feas_tol) ||
                      (c.sense == Sense::kEqual && std::fabs(row.rhs) <= opts.feas_tol);
      if (!ok) return out;
      continue;
    }
    rows.push_back(std::move(row));
  }
  for (int j = 0; j < nv; ++j) {
    if (col[j] >= 0 && std::isfinite(upper[j])) {
      rows.push_back(Row{{{col[j], 1.0}}, Sense::kLessEq, upper[j] - lower[j]});
    }
  }
  for (auto& row : rows) {
    if (row.rhs < 0) {
      row.rhs = -row.rhs;
      for (auto& [c, v] : row.coeffs) v = -v;
      if (row.sense == Sense::kLessEq) {
        row.sense = Sense::kGreaterEq;
      } else if (row.sense == Sense::kGreaterEq) {
        row.sense = Sense::kLessEq;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  int n_art = 0;
  for (const auto& row : rows) {
    if (row.sense != Sense::kEqual) ++n_slack;
    if (row.sense != Sense::kLessEq) ++n_art;
  }
  const int n = ns + n_slack + n_art;
  Tableau t(m, n);
  std::vector<int> basis(m);
  std::vector<char> is_art(n, 0);
  int next_slack = ns;
  int next_art = ns + n_slack;
  for (int i = 0; i < m; ++i) {
    for (const auto& [c, v] : rows[i].coeffs) t.at(i, c) += v;
    t.rhs(i) = rows[i].rhs;
    switch (rows[i].sense) {
      case Sense::kLessEq:
        t.at(i, next_slack) = 1.0;
        basis[i] = next_slack++;
        break;
      case Sense::kGreaterEq:
        t.at(i, next_slack++) = -1.0;
        t.at(i, next_art) = 1.0;
        is_art[next_art] = 1;
        basis[i] = next_art++;
        break;
      case Sense::kEqual:
        t.at(i, next_art) = 1.0;
        is_art[next_art] = 1;
        basis[i] = next_art++;
        break;
    }
  }

  SimplexRun run(t, basis, opts, out.pivots);
  std::vector<char> allowed(n, 1);
  if (n_art > 0) {
    std::vector<double> phase1(n, 0.0);
    for (int j = 0; j < n; ++j) {
      if (is_art[j]) phase1[j] = -1.0;
    }
    run.load_costs(phase1);
    run.iterate(allowed);
    if (t.rhs(m) < -opts.feas_tol) return out;  // infeasible
    for (int i = 0; i < m; ++i) {
      if (!is_art[basis[i]]) continue;
      for (int j = 0; j < n; ++j) {
        if (!is_art[j] && std::fabs(t.at(i, j)) > 1e-9) {
          t.pivot(i, j);
          basis[i] = j;
          break;
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (is_art[j]) allowed[j] = 0;
    }
  }

  std::vector<double> phase2(n, 0.0);
  for (int j = 0; j < nv; ++j) {
    if (col[j] >= 0) phase2[col[j]] = cost[j];
  }
  run.load_costs(phase2);
  if (run.iterate(allowed) == Status::kUnbounded) {
    out.status = Status::kUnbounded;
    return out;
  }

  std::vector<double> colval(n, 0.0);
  for (int i = 0; i < m; ++i) colval[basis[i]] = std::max(0.0, t.rhs(i));
  out.x.assign(nv, 0.0);
  out.objective = 0.0;
  for (int j = 0; j < nv; ++j) {
    out.x[j] = lower[j] + (col[j] >= 0 ? colval[col[j]] : 0.0);
    if (std::isfinite(upper[j])) out.x[j] = std::min(out.x[j], upper[j]);
    out.objective += cost[j] * out.x[j];
  }
  out.status = Status::kOptimal;
  return out;
}

double row_violation(const LinearConstraint& c, const std::vector<double>& x) {
  double lhs = 0.0;
  for (const auto& term : c.terms) lhs += term.coeff * x[term.var];
  switch (c.sense) {
    case Sense::kLessEq: return std::max(0.0, lhs - c.rhs);
    case Sense::kGreaterEq: return std::max(0.0, c.rhs - lhs);
    case Sense::kEqual: return std::fabs(lhs - c.rhs);
  }
  return 0.0;
}

double bounded_violation(const ConstraintProgram& prog,
                         const std::vector<double>& x,
                         const std::vector<double>& lower,
                         const std::vector<double>& upper) {
  double worst = 0.0;
  for (const auto& c : prog.constraints) worst = std::max(worst, row_violation(c, x));
  for (std::size_t j = 0; j < x.size(); ++j) {
    worst = std::max(worst, lower[j] - x[j]);
    if (std::isfinite(upper[j])) worst = std::max(worst, x[j] - upper[j]);
  }
  return worst;
}

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

Bounds root_bounds(const ConstraintProgram& prog) {
  Bounds b;
  const std::size_t nv = prog.variables.size();
  b.lower.assign(nv, 0.0);
  b.upper.assign(nv, kInf);
  for (std::size_t j = 0; j < nv; ++j) {
    const auto& v = prog.variables[j];
    if (v.upper) b.upper[j] = *v.upper;
    if (v.kind == VarKind::kBinary) b.upper[j] = std::min(b.upper[j], 1.0);
  }
  return b;
}

std::vector<double> max_form_costs(const ConstraintProgram& prog) {
  std::vector<double> cost(prog.variables.size(), 0.0);
  const double sign = prog.objective.sense == ObjectiveSense::kMaximize ? 1.0 : -1.0;
  for (const auto& term : prog.objective.terms) cost[term.var] += sign * term.coeff;
  return cost;
}

Solution finish(const ConstraintProgram& prog, Status status,
                std::vector<double> x, std::size_t nodes, std::size_t pivots) {
  Solution s;
  s.status = status;
  s.nodes = nodes;
  s.pivots = pivots;
  if (status == Status::kOptimal) {
    double obj = prog.objective.constant;
    for (const auto& term : prog.objective.terms) obj += term.coeff * x[term.var];
    s.objective = obj;
    s.values = std::move(x);
  }
  return s;
}

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

int ConstraintProgram::add_variable(std::string name, VarKind kind,
                                    std::optional<double> upper) {
  variables.push_back(Variable{std::move(name), kind, upper});
  return static_cast<int>(variables.size()) - 1;
}

void ConstraintProgram::add_constraint(std::vector<Term> terms, Sense sense,
                                       double rhs, std::string name) {
  constraints.push_back(LinearConstraint{std::move(terms), sense, rhs, std::move(name)});
}

std::size_t ConstraintProgram::num_binaries() const {
  return static_cast<std::size_t>(std::count_if(
      variables.begin(), variables.end(),
      [](const Variable& v) { return v.kind == VarKind::kBinary; }));
}

void ConstraintProgram::check() const {
  const int nv = static_cast<int>(variables.size());
  auto check_terms = [nv](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& term : terms) {
      if (term.var < 0 || term.var >= nv) {
        throw Error(ErrorKind::kInvalidArgument,
                    "term references missing variable in " + where);
      }
      if (!std::isfinite(term.coeff)) {
        throw Error(ErrorKind::kInvalidArgument, "non-finite coefficient in " + where);
      }
    }
  };
  for (const auto& c : constraints) check_terms(c.terms, "constraint '" + c.name + "'");
  check_terms(objective.terms, "objective");
  for (const auto& group : exactly_one_groups) {
    for (int v : group) {
      if (v < 0 || v >= nv) {
        throw Error(ErrorKind::kInvalidArgument, "group references missing variable");
      }
      if (variables[v].kind != VarKind::kContinuous) {
        throw Error(ErrorKind::kInvalidArgument,
                    "exactly-one groups must reference continuous variables");
      }
    }
  }
}

double max_violation(const ConstraintProgram& prog,
                     const std::vector<double>& values, double flow_tol) {
  Bounds b = root_bounds(prog);
  double worst = bounded_violation(prog, values, b.lower, b.upper);
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (prog.variables[j].kind == VarKind::kBinary) {
      worst = std::max(worst, std::fabs(values[j] - std::round(values[j])));
    }
  }
  for (const auto& group : prog.exactly_one_groups) {
    std::vector<double> positive;
    for (int v : group) {
      if (values[v] > flow_tol) positive.push_back(values[v]);
    }
    if (positive.size() > 1) {
      std::sort(positive.begin(), positive.end());
      // Everything but the largest member should have been zero.
      worst = std::max(worst, positive[positive.size() - 2]);
    }
  }
  return worst;
}

Solution solve_lp(const ConstraintProgram& prog, const SolverOptions& opts) {
  prog.check();
  if (prog.num_binaries() > 0 || !prog.exactly_one_groups.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "solve_lp called on a program with discrete structure");
  }
  Bounds b = root_bounds(prog);
  LpResult r = solve_bounded(prog, max_form_costs(prog), b.lower, b.upper, opts);
  if (r.status == Status::kOptimal &&
      bounded_violation(prog, r.x, b.lower, b.upper) > opts.feas_tol) {
    throw Error(ErrorKind::kNumericalInstability,
                "simplex basis violates constraints beyond tolerance");
  }
  return finish(prog, r.status, std::move(r.x), 1, r.pivots);
}

Solution solve_mip(const ConstraintProgram& prog, const SolverOptions& opts) {
  prog.check();
  const std::size_t nv = prog.variables.size();
  const std::vector<double> cost = max_form_costs(prog);

  // When the objective only weights binaries with integer coefficients, every
  // feasible value is integral and node bounds can be rounded down.
  bool integral_objective = std::fabs(prog.objective.constant -
                                      std::round(prog.objective.constant)) < 1e-12;
  for (std::size_t j = 0; j < nv && integral_objective; ++j) {
    if (cost[j] == 0.0) continue;
    if (prog.variables[j].kind != VarKind::kBinary ||
        std::fabs(cost[j] - std::round(cost[j])) > 1e-12) {
      integral_objective = false;
    }
  }
  const double const_max_form = prog.objective.sense == ObjectiveSense::kMaximize
                                    ? prog.objective.constant
                                    : -prog.objective.constant;

  std::vector<Bounds> stack;
  stack.push_back(root_bounds(prog));
  bool have_incumbent = false;
  double incumbent = -kInf;
  std::vector<double> best;
  std::size_t nodes = 0;
  std::size_t pivots = 0;

  auto is_binary = [&](std::size_t j) {
    return prog.variables[j].kind == VarKind::kBinary;
  };

  while (!stack.empty()) {
    Bounds node = std::move(stack.back());
    stack.pop_back();
    if (++nodes > opts.node_limit) {
      throw Error(ErrorKind::kBudgetExceeded,
                  "branch-and-bound node limit of " + std::to_string(opts.node_limit) +
                      " exceeded");
    }
    LpResult lp = solve_bounded(prog, cost, node.lower, node.upper, opts);
    pivots += lp.pivots;
    if (lp.status == Status::kInfeasible) continue;

    if (lp.status == Status::kUnbounded) {
      // Resolve remaining discrete choices; an unbounded relaxation with every
      // choice fixed means the program itself is unbounded.
      bool branched = false;
      for (std::size_t j = 0; j < nv && !branched; ++j) {
        if (is_binary(j) && node.lower[j] != node.upper[j]) {
          for (double v : {1.0, 0.0}) {
            Bounds child = node;
            child.lower[j] = child.upper[j] = v;
            stack.push_back(std::move(child));
          }
          branched = true;
        }
      }
      for (std::size_t g = 0; g < prog.exactly_one_groups.size() && !branched; ++g) {
        const auto& group = prog.exactly_one_groups[g];
        std::vector<int> open;
        for (int v : group) {
          if (node.upper[v] != 0.0) open.push_back(v);
        }
        if (open.size() < 2) continue;
        for (auto it = open.rbegin(); it != open.rend(); ++it) {
          Bounds child = node;
          for (int v : open) {
            if (v != *it) child.upper[v] = 0.0;
          }
          stack.push_back(std::move(child));
        }
        branched = true;
      }
      if (!branched) return finish(prog, Status::kUnbounded, {}, nodes, pivots);
      continue;
    }

    double bound = lp.objective + const_max_form;
    if (integral_objective) bound = std::floor(bound + 1e-6);
    if (have_incumbent &&
        bound <= incumbent + 1e-9 * std::max(1.0, std::fabs(incumbent))) {
      continue;
    }

    // Fractional binary, lowest index first; nearer rounding explored first.
    int frac = -1;
    for (std::size_t j = 0; j < nv; ++j) {
      if (!is_binary(j)) continue;
      const double v = lp.x[j];
      if (std::min(v, 1.0 - v) > opts.feas_tol) {
        frac = static_cast<int>(j);
        break;
      }
    }
    if (frac >= 0) {
      const double v = lp.x[frac];
      const double first = v >= 0.5 ? 1.0 : 0.0;
      for (double fix : {1.0 - first, first}) {
        Bounds child = node;
        child.lower[frac] = child.upper[frac] = fix;
        stack.push_back(std::move(child));
      }
      continue;
    }

    int violated = -1;
    for (std::size_t g = 0; g < prog.exactly_one_groups.size(); ++g) {
      int positive = 0;
      for (int v : prog.exactly_one_groups[g]) {
        if (lp.x[v] > opts.flow_tol) ++positive;
      }
      if (positive > 1) {
        violated = static_cast<int>(g);
        break;
      }
    }
    if (violated >= 0) {
      const auto& group = prog.exactly_one_groups[violated];
      std::vector<int> open;
      for (int v : group) {
        if (node.upper[v] != 0.0) open.push_back(v);
      }
      std::stable_sort(open.begin(), open.end(),
                       [&](int a, int b) { return lp.x[a] > lp.x[b]; });
      for (auto it = open.rbegin(); it != open.rend(); ++it) {
        Bounds child = node;
        for (int v : open) {
          if (v != *it) child.upper[v] = 0.0;
        }
        stack.push_back(std::move(child));
      }
      continue;
    }

    // Integral leaf: re-solve with binaries pinned to their rounded values so
    // the reported point is clean.
    std::vector<double> x = std::move(lp.x);
    double value = lp.objective;
    bool has_binary = false;
    Bounds pinned = node;
    for (std::size_t j = 0; j < nv; ++j) {
      if (is_binary(j)) {
        has_binary = true;
        pinned.lower[j] = pinned.upper[j] = std::round(x[j]);
      }
    }
    if (has_binary) {
      LpResult clean = solve_bounded(prog, cost, pinned.lower, pinned.upper, opts);
      pivots += clean.pivots;
      if (clean.status == Status::kOptimal) {
        bool groups_ok = true;
        for (const auto& group : prog.exactly_one_groups) {
          int positive = 0;
          for (int v : group) positive += clean.x[v] > opts.flow_tol ? 1 : 0;
          groups_ok = groups_ok && positive <= 1;
        }
        if (groups_ok) {
          x = std::move(clean.x);
          value = clean.objective;
        }
      }
    }
    value += const_max_form;
    if (!have_incumbent || value > incumbent) {
      have_incumbent = true;
      incumbent = value;
      best = std::move(x);
    }
  }

  if (!have_incumbent) return finish(prog, Status::kInfeasible, {}, nodes, pivots);
  for (std::size_t j = 0; j < nv; ++j) {
    if (is_binary(j)) best[j] = std::round(best[j]);
  }
  if (max_violation(prog, best, opts.flow_tol) > opts.feas_tol) {
    throw Error(ErrorKind::kNumericalInstability,
                "branch-and-bound incumbent violates constraints beyond tolerance");
  }
  return finish(prog, Status::kOptimal, std::move(best), nodes, pivots);
}

std::string to_lp_format(const ConstraintProgram& prog) {
  std::ostringstream out;
  out.precision(17);
  auto var_name = [&](int j) {
    const std::string& n = prog.variables[j].name;
    return n.empty() ? "v" + std::to_string(j) : n;
  };
  auto write_terms = [&](const std::vector<Term>& terms) {
    if (terms.empty()) {
      out << " 0";
      return;
    }
    bool first = true;
    for (const auto& term : terms) {
      const double c = term.coeff;
      if (first) {
        out << (c < 0 ? " - " : " ");
      } else {
        out << (c < 0 ? " - " : " + ");
      }
      out << std::fabs(c) << ' ' << var_name(term.var);
      first = false;
    }
  };
  out << (prog.objective.sense == ObjectiveSense::kMaximize ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  write_terms(prog.objective.terms);
  if (prog.objective.constant != 0.0) {
    out << (prog.objective.constant < 0 ? " - " : " + ")
        << std::fabs(prog.objective.constant);
  }
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < prog.constraints.size(); ++i) {
    const auto& c = prog.constraints[i];
    out << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ':';
    write_terms(c.terms);
    switch (c.sense) {
      case Sense::kLessEq: out << " <= "; break;
      case Sense::kGreaterEq: out << " >= "; break;
      case Sense::kEqual: out << " = "; break;
    }
    out << c.rhs << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < prog.variables.size(); ++j) {
    const auto& v = prog.variables[j];
    if (v.kind == VarKind::kContinuous && v.upper) {
      out << " 0 <= " << var_name(static_cast<int>(j)) << " <= " << *v.upper << '\n';
    }
  }
  if (prog.num_binaries() > 0) {
    out << "Binaries\n";
    for (std::size_t j = 0; j < prog.variables.size(); ++j) {
      if (prog.variables[j].kind == VarKind::kBinary) {
        out << ' ' << var_name(static_cast<int>(j)) << '\n';
      }
    }
  }
  if (!prog.exactly_one_groups.empty()) {
    out << "SOS\n";
    for (std::size_t g = 0; g < prog.exactly_one_groups.size(); ++g) {
      out << " s" << g << ": S1::";
      int weight = 1;
      for (int v : prog.exactly_one_groups[g]) {
        out << ' ' << var_name(v) << ':' << weight++;
      }
      out << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace xplain::solver
