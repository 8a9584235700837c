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

#include "xplain/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "xplain/error.hpp"

namespace xplain::heur {

using solver::ConstraintProgram;
using solver::Sense;
using solver::Term;

namespace {

constexpr double kFitTol = 1e-9;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

void check_demands(const TeInstance& inst, const std::vector<double>& d) {
  if (d.size() != inst.demands.size()) {
    invalid("expected " + std::to_string(inst.demands.size()) + " demand values, got " +
            std::to_string(d.size()));
  }
  for (double v : d) {
    if (!(v >= 0.0) || !std::isfinite(v)) invalid("demand values must be finite and >= 0");
  }
}

double path_residual(const Path& path, const std::vector<double>& residual) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t l : path) r = std::min(r, residual[l]);
  return std::max(0.0, r);
}

// Maximizes total routed flow of the `active` demands over `capacity`,
// writing into alloc.path_flow. Throughput ties are broken by a second LP
// that minimizes the maximum link utilization, counting the capacity already
// taken (link capacity minus `capacity`) as load.
void route_max_flow(const TeInstance& inst, const std::vector<double>& d,
                    const std::vector<double>& capacity, const std::vector<bool>& active,
                    Allocation& alloc) {
  ConstraintProgram prog;
  std::vector<std::vector<int>> var(inst.demands.size());
  std::vector<std::vector<Term>> link_rows(inst.links.size());
  for (std::size_t k = 0; k < inst.demands.size(); ++k) {
    if (!active[k] || d[k] <= 0.0) continue;
    std::vector<Term> demand_row;
    for (std::size_t p = 0; p < inst.demands[k].paths.size(); ++p) {
      const int v = prog.add_variable("f_" + std::to_string(k) + "_" + std::to_string(p));
      var[k].push_back(v);
      demand_row.push_back({v, 1.0});
      prog.objective.terms.push_back({v, 1.0});
      for (std::size_t l : inst.demands[k].paths[p]) link_rows[l].push_back({v, 1.0});
    }
    prog.add_constraint(std::move(demand_row), Sense::kLessEq, d[k]);
  }
  if (prog.variables.empty()) return;
  for (std::size_t l = 0; l < inst.links.size(); ++l) {
    if (!link_rows[l].empty()) {
      prog.add_constraint(std::move(link_rows[l]), Sense::kLessEq, std::max(0.0, capacity[l]));
    }
  }
  solver::Solution sol = solver::solve_lp(prog);
  if (sol.status != solver::Status::kOptimal) {
    throw Error(ErrorKind::kNumericalInstability, "TE max-flow LP did not reach optimality");
  }
  if (sol.objective > 0.0) {
    ConstraintProgram mlu = prog;
    const int u = mlu.add_variable("utilization");
    mlu.add_constraint(prog.objective.terms, Sense::kGreaterEq, sol.objective);
    for (std::size_t l = 0; l < inst.links.size(); ++l) {
      std::vector<Term> row;
      for (std::size_t k = 0; k < var.size(); ++k) {
        for (std::size_t p = 0; p < var[k].size(); ++p) {
          const Path& path = inst.demands[k].paths[p];
          if (std::find(path.begin(), path.end(), l) != path.end()) row.push_back({var[k][p], 1.0});
        }
      }
      if (row.empty()) continue;
      row.push_back({u, -inst.links[l].capacity});
      mlu.add_constraint(std::move(row), Sense::kLessEq,
                         -std::max(0.0, inst.links[l].capacity - capacity[l]));
    }
    mlu.objective.terms = {{u, 1.0}};
    mlu.objective.sense = solver::ObjectiveSense::kMinimize;
    try {
      solver::Solution second = solver::solve_lp(mlu);
      if (second.status == solver::Status::kOptimal) sol = std::move(second);
    } catch (const Error&) {
      // Keep the throughput-optimal basis.
    }
  }
  for (std::size_t k = 0; k < var.size(); ++k) {
    for (std::size_t p = 0; p < var[k].size(); ++p) {
      alloc.path_flow[k][p] = std::max(0.0, sol.values[var[k][p]]);
    }
  }
}

Allocation empty_te_allocation(const TeInstance& inst) {
  Allocation a;
  a.path_flow.resize(inst.demands.size());
  for (std::size_t k = 0; k < inst.demands.size(); ++k) {
    a.path_flow[k].assign(inst.demands[k].paths.size(), 0.0);
  }
  a.unmet.assign(inst.demands.size(), 0.0);
  return a;
}

void finish_te(const std::vector<double>& d, Allocation& a) {
  a.objective = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    double routed = 0.0;
    for (double f : a.path_flow[k]) routed += f;
    a.unmet[k] = std::max(0.0, d[k] - routed);
    a.objective += routed;
  }
}

// Pinned rate per demand (nullopt when not pinnable), consuming capacity in
// demand-index order.
std::vector<std::optional<double>> pin_demands(const TeInstance& inst,
                                               const std::vector<double>& d,
                                               std::vector<double>& residual) {
  std::vector<std::optional<double>> pinned(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (d[k] > inst.threshold) continue;
    const Path& path = inst.demands[k].paths[inst.demands[k].shortest];
    const double amount = std::min(d[k], path_residual(path, residual));
    for (std::size_t l : path) residual[l] = std::max(0.0, residual[l] - amount);
    pinned[k] = amount;
  }
  return pinned;
}

std::vector<std::size_t> path_nodes(const TeInstance& inst, std::size_t src, const Path& p) {
  std::vector<std::size_t> seq{src};
  for (std::size_t l : p) seq.push_back(inst.links[l].to);
  return seq;
}

}  // namespace

// ---------------------------------------------------------------------------

void TeInstance::check() const {
  if (threshold < 0.0 || !std::isfinite(threshold)) invalid("pinning threshold must be >= 0");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t l = 0; l < links.size(); ++l) {
    const Link& link = links[l];
    if (link.from >= nodes.size() || link.to >= nodes.size()) {
      invalid("link " + std::to_string(l) + " references a missing node");
    }
    if (link.from == link.to) invalid("link " + link_label(l) + " is a self loop");
    if (!(link.capacity > 0.0) || !std::isfinite(link.capacity)) {
      invalid("link " + link_label(l) + " needs a positive capacity");
    }
    if (!seen.insert({link.from, link.to}).second) {
      invalid("parallel links " + link_label(l) + " are not supported");
    }
  }
  for (std::size_t k = 0; k < demands.size(); ++k) {
    const Demand& dm = demands[k];
    if (dm.src >= nodes.size() || dm.dst >= nodes.size() || dm.src == dm.dst) {
      invalid("demand " + std::to_string(k) + " has invalid endpoints");
    }
    if (dm.paths.empty()) invalid("demand " + demand_label(k) + " has no paths");
    if (dm.shortest >= dm.paths.size()) invalid("demand " + demand_label(k) + ": bad shortest");
    for (const Path& p : dm.paths) {
      std::size_t at = dm.src;
      for (std::size_t l : p) {
        if (l >= links.size() || links[l].from != at) {
          invalid("demand " + demand_label(k) + " has a path that is not a walk");
        }
        at = links[l].to;
      }
      if (p.empty() || at != dm.dst) {
        invalid("demand " + demand_label(k) + " has a path not ending at its destination");
      }
    }
  }
}

std::string TeInstance::demand_label(std::size_t k) const {
  return nodes[demands[k].src] + "~" + nodes[demands[k].dst];
}

std::string TeInstance::path_label(std::size_t k, std::size_t p) const {
  std::string out;
  for (std::size_t n : path_nodes(*this, demands[k].src, demands[k].paths[p])) {
    if (!out.empty()) out += "-";
    out += nodes[n];
  }
  return out;
}

std::string TeInstance::link_label(std::size_t l) const {
  return nodes[links[l].from] + "-" + nodes[links[l].to];
}

std::size_t pick_shortest(const std::vector<Path>& paths) {
  std::size_t best = 0;
  for (std::size_t p = 1; p < paths.size(); ++p) {
    if (paths[p].size() < paths[best].size()) best = p;
  }
  return best;
}

std::vector<Path> k_shortest_paths(const std::vector<std::string>& nodes,
                                   const std::vector<Link>& links, std::size_t src,
                                   std::size_t dst, std::size_t k) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t l = 0; l < links.size(); ++l) adj[links[l].from].push_back(l);
  for (auto& out : adj) {
    std::sort(out.begin(), out.end(),
              [&](std::size_t a, std::size_t b) { return links[a].to < links[b].to; });
  }
  auto bfs = [&](std::size_t from, const std::set<std::size_t>& banned_links,
                 const std::vector<bool>& banned_nodes) -> std::optional<Path> {
    std::vector<std::optional<std::size_t>> via(n);
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      if (u == dst) break;
      for (std::size_t l : adj[u]) {
        const std::size_t v = links[l].to;
        if (seen[v] || banned_nodes[v] || banned_links.count(l)) continue;
        seen[v] = true;
        via[v] = l;
        queue.push_back(v);
      }
    }
    if (!seen[dst]) return std::nullopt;
    Path p;
    for (std::size_t at = dst; at != from; at = links[*via[at]].from) p.push_back(*via[at]);
    std::reverse(p.begin(), p.end());
    return p;
  };
  auto node_seq = [&](const Path& p) {
    std::vector<std::size_t> seq{src};
    for (std::size_t l : p) seq.push_back(links[l].to);
    return seq;
  };
  auto shorter = [&](const Path& a, const Path& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return node_seq(a) < node_seq(b);
  };

  std::vector<Path> found;
  if (k == 0 || src >= n || dst >= n || src == dst) return found;
  auto first = bfs(src, {}, std::vector<bool>(n, false));
  if (!first) return found;
  found.push_back(*first);
  std::vector<Path> candidates;
  while (found.size() < k) {
    const Path& last = found.back();
    const auto seq = node_seq(last);
    for (std::size_t i = 0; i < last.size(); ++i) {
      const Path root(last.begin(), last.begin() + static_cast<std::ptrdiff_t>(i));
      std::set<std::size_t> banned_links;
      for (const Path& p : found) {
        if (p.size() > i && std::equal(root.begin(), root.end(), p.begin())) {
          banned_links.insert(p[i]);
        }
      }
      std::vector<bool> banned_nodes(n, false);
      for (std::size_t t = 0; t < i; ++t) banned_nodes[seq[t]] = true;
      auto spur = bfs(seq[i], banned_links, banned_nodes);
      if (!spur) continue;
      Path total = root;
      total.insert(total.end(), spur->begin(), spur->end());
      if (std::find(found.begin(), found.end(), total) == found.end() &&
          std::find(candidates.begin(), candidates.end(), total) == candidates.end()) {
        candidates.push_back(std::move(total));
      }
    }
    if (candidates.empty()) break;
    auto best = std::min_element(candidates.begin(), candidates.end(), shorter);
    found.push_back(*best);
    candidates.erase(best);
  }
  return found;
}

// ---------------------------------------------------------------------------

Allocation run_dp(const TeInstance& inst, const std::vector<double>& demands) {
  check_demands(inst, demands);
  Allocation alloc = empty_te_allocation(inst);
  std::vector<double> residual;
  for (const Link& l : inst.links) residual.push_back(l.capacity);
  const auto pinned = pin_demands(inst, demands, residual);
  std::vector<bool> active(demands.size());
  for (std::size_t k = 0; k < demands.size(); ++k) {
    active[k] = !pinned[k].has_value();
    if (pinned[k]) alloc.path_flow[k][inst.demands[k].shortest] = *pinned[k];
  }
  route_max_flow(inst, demands, residual, active, alloc);
  finish_te(demands, alloc);
  return alloc;
}

Allocation optimal_te(const TeInstance& inst, const std::vector<double>& demands) {
  check_demands(inst, demands);
  Allocation alloc = empty_te_allocation(inst);
  std::vector<double> capacity;
  for (const Link& l : inst.links) capacity.push_back(l.capacity);
  route_max_flow(inst, demands, capacity, std::vector<bool>(demands.size(), true), alloc);
  finish_te(demands, alloc);
  return alloc;
}

// ---------------------------------------------------------------------------

void VbpInstance::check() const {
  if (bins.empty()) invalid("bin packing needs at least one bin");
  const std::size_t d = dims();
  if (d == 0) invalid("bins need at least one dimension");
  for (const auto& b : bins) {
    if (b.size() != d) invalid("bins disagree on dimension count");
    for (double c : b) {
      if (!(c >= 0.0) || !std::isfinite(c)) invalid("bin capacities must be finite and >= 0");
    }
  }
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i].size() != d) invalid("ball " + std::to_string(i) + " has wrong dimension");
    for (double s : sizes[i]) {
      if (!(s >= 0.0) || !std::isfinite(s)) invalid("ball sizes must be finite and >= 0");
    }
  }
}

namespace {

bool fits_in(const std::vector<double>& size, const std::vector<double>& residual) {
  for (std::size_t d = 0; d < size.size(); ++d) {
    if (size[d] > residual[d] + kFitTol) return false;
  }
  return true;
}

}  // namespace

std::pair<Allocation, FfTrace> run_ff(const VbpInstance& inst) {
  inst.check();
  std::vector<std::vector<double>> residual = inst.bins;
  std::vector<std::vector<std::vector<double>>> snapshots;
  Allocation alloc;
  FfTrace trace;
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) {
    snapshots.push_back(residual);
    std::optional<std::size_t> chosen;
    for (std::size_t j = 0; j < residual.size() && !chosen; ++j) {
      if (fits_in(inst.sizes[i], residual[j])) chosen = j;
    }
    if (!chosen && inst.unbounded && fits_in(inst.sizes[i], inst.bins.back())) {
      residual.push_back(inst.bins.back());
      chosen = residual.size() - 1;
    }
    if (!chosen) {
      throw Error(ErrorKind::kUnplaceable, "ball " + std::to_string(i) + " fits in no bin");
    }
    for (std::size_t d = 0; d < residual[*chosen].size(); ++d) {
      residual[*chosen][d] -= inst.sizes[i][d];
    }
    trace.assignment.push_back(*chosen);
  }
  const std::size_t width = residual.size();
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) {
    auto& snap = snapshots[i];
    while (snap.size() < width) snap.push_back(inst.bins.back());
    std::vector<bool> fits(width), not_placed(width), first(width);
    bool placed = false;
    for (std::size_t j = 0; j < width; ++j) {
      fits[j] = fits_in(inst.sizes[i], snap[j]);
      not_placed[j] = !placed;
      first[j] = fits[j] && not_placed[j];
      placed = placed || fits[j];
    }
    trace.residual.push_back(snap);
    trace.fits.push_back(fits);
    trace.not_placed.push_back(not_placed);
    trace.first_fit.push_back(first);
  }
  alloc.bin_of = trace.assignment;
  std::set<std::size_t> used(alloc.bin_of.begin(), alloc.bin_of.end());
  alloc.bins_used = used.size();
  alloc.objective = static_cast<double>(alloc.bins_used);
  return {alloc, trace};
}

Allocation optimal_vbp(const VbpInstance& inst, const solver::SolverOptions& opts) {
  inst.check();
  Allocation alloc;
  const std::size_t n = inst.sizes.size();
  if (n == 0) return alloc;

  std::vector<std::vector<double>> bins = inst.bins;
  if (inst.unbounded) {
    // FF's packing bounds the optimum, so the bins it reached suffice.
    std::size_t highest = 0;
    for (std::size_t b : run_ff(inst).first.bin_of) highest = std::max(highest, b);
    while (bins.size() < highest + 1) bins.push_back(inst.bins.back());
  }
  const std::size_t m = bins.size();
  const bool identical =
      std::all_of(bins.begin(), bins.end(), [&](const auto& b) { return b == bins.front(); });

  ConstraintProgram prog;
  std::vector<std::vector<int>> x(n, std::vector<int>(m, -1));
  std::vector<int> u(m);
  for (std::size_t j = 0; j < m; ++j) {
    u[j] = prog.add_variable("u" + std::to_string(j), solver::VarKind::kBinary);
    prog.objective.terms.push_back({u[j], 1.0});
  }
  prog.objective.sense = solver::ObjectiveSense::kMinimize;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> one;
    for (std::size_t j = 0; j < m; ++j) {
      if (identical && j > i) break;  // ball i never needs a bin past i
      if (!fits_in(inst.sizes[i], bins[j])) continue;
      x[i][j] = prog.add_variable("x" + std::to_string(i) + "_" + std::to_string(j),
                                  solver::VarKind::kBinary);
      one.push_back({x[i][j], 1.0});
      prog.add_constraint({{x[i][j], 1.0}, {u[j], -1.0}}, Sense::kLessEq, 0.0);
    }
    if (one.empty()) throw Error(ErrorKind::kUnplaceable, "ball " + std::to_string(i) + " fits in no bin");
    prog.add_constraint(std::move(one), Sense::kEqual, 1.0);
  }
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t d = 0; d < inst.dims(); ++d) {
      std::vector<Term> row;
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i][j] >= 0 && inst.sizes[i][d] > 0.0) row.push_back({x[i][j], inst.sizes[i][d]});
      }
      if (row.empty()) continue;
      row.push_back({u[j], -bins[j][d]});
      prog.add_constraint(std::move(row), Sense::kLessEq, kFitTol);
    }
    if (identical && j + 1 < m) {
      prog.add_constraint({{u[j + 1], 1.0}, {u[j], -1.0}}, Sense::kLessEq, 0.0);
    }
  }
  solver::Solution sol = solver::solve_mip(prog, opts);
  if (sol.status != solver::Status::kOptimal) {
    throw Error(ErrorKind::kUnplaceable, "the balls do not fit into the available bins");
  }
  alloc.bin_of.assign(n, 0);
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (x[i][j] >= 0 && sol.values[x[i][j]] > 0.5) {
        alloc.bin_of[i] = j;
        used.insert(j);
      }
    }
  }
  alloc.bins_used = used.size();
  alloc.objective = static_cast<double>(alloc.bins_used);
  return alloc;
}

// ---------------------------------------------------------------------------

double gap_value(double heuristic, double benchmark, Orientation orientation, GapMode mode) {
  const double abs = orientation == Orientation::kBenchmarkMinusHeuristic
                         ? benchmark - heuristic
                         : heuristic - benchmark;
  if (mode == GapMode::kAbsolute) return abs;
  return abs / std::max(std::fabs(benchmark), kGapDenominatorEps);
}

double gap(const std::vector<double>& inputs, const ObjectiveFn& heuristic,
           const ObjectiveFn& benchmark, Orientation orientation, GapMode mode) {
  return gap_value(heuristic(inputs), benchmark(inputs), orientation, mode);
}

// ---------------------------------------------------------------------------

const char* to_string(Model m) {
  switch (m) {
    case Model::kDp: return "dp";
    case Model::kOptTe: return "opt_te";
    case Model::kFf: return "ff";
    case Model::kOptVbp: return "opt_vbp";
  }
  return "?";
}

std::optional<Model> model_from_string(const std::string& s) {
  for (Model m : {Model::kDp, Model::kOptTe, Model::kFf, Model::kOptVbp}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::string demand_node(const TeInstance& inst, std::size_t k) {
  return "D:" + inst.demand_label(k);
}
std::string path_node(const TeInstance& inst, std::size_t k, std::size_t p) {
  return "P:" + inst.demand_label(k) + ":" + inst.path_label(k, p);
}
std::string link_node(const TeInstance& inst, std::size_t l) {
  return "L:" + inst.link_label(l);
}
std::string ball_node(std::size_t i) { return "BALL" + std::to_string(i); }
std::string bin_node(std::size_t j) { return "BIN" + std::to_string(j); }

namespace {

std::string edge_id(const std::string& from, const std::string& to) { return from + ">" + to; }

}  // namespace

dsl::FlowNetwork to_flow_network(const TeInstance& inst, Model model,
                                 const std::vector<double>* demands) {
  if (model != Model::kDp && model != Model::kOptTe) invalid("TE networks are dp or opt_te");
  inst.check();
  if (demands) check_demands(inst, *demands);
  if (model == Model::kDp && !demands) invalid("the dp network needs demand values to pin");

  std::vector<std::optional<double>> pinned(inst.demands.size());
  if (model == Model::kDp) {
    std::vector<double> residual;
    for (const Link& l : inst.links) residual.push_back(l.capacity);
    pinned = pin_demands(inst, *demands, residual);
  }

  dsl::FlowNetwork net;
  net.add_node(kUnmetSink, dsl::NodeBehavior::sink(dsl::SinkSense::kMinimize),
               {{"role", "unmet"}});
  net.add_node(kMetSink, dsl::NodeBehavior::sink(dsl::SinkSense::kMaximize),
               {{"role", "met"}});
  for (std::size_t l = 0; l < inst.links.size(); ++l) {
    const std::string id = link_node(inst, l);
    net.add_node(id, dsl::NodeBehavior::split({{edge_id(id, kMetSink), inst.links[l].capacity}}),
                 {{"role", "link"}, {"link", inst.link_label(l)}});
    net.add_edge(id, kMetSink, std::nullopt, std::nullopt,
                 {{"kind", "deliver"}, {"link", std::to_string(l)}}, edge_id(id, kMetSink));
  }
  for (std::size_t k = 0; k < inst.demands.size(); ++k) {
    const std::string dn = demand_node(inst, k);
    std::optional<double> rate;
    if (demands) rate = (*demands)[k];
    net.add_node(dn, dsl::NodeBehavior::source(dsl::BehaviorKind::kSplit, rate),
                 {{"role", "demand"}, {"demand", inst.demand_label(k)}});
    std::optional<double> unmet_rate;
    if (pinned[k]) unmet_rate = (*demands)[k] - *pinned[k];
    net.add_edge(dn, kUnmetSink, std::nullopt, unmet_rate,
                 {{"kind", "unmet"}, {"demand", std::to_string(k)}}, edge_id(dn, kUnmetSink));
    for (std::size_t p = 0; p < inst.demands[k].paths.size(); ++p) {
      const std::string pn = path_node(inst, k, p);
      net.add_node(pn, dsl::NodeBehavior::copy(),
                   {{"role", "path"}, {"demand", inst.demand_label(k)},
                    {"path", inst.path_label(k, p)}});
      std::optional<double> fixed;
      if (pinned[k]) fixed = p == inst.demands[k].shortest ? *pinned[k] : 0.0;
      net.add_edge(dn, pn, std::nullopt, fixed,
                   {{"kind", "assign"}, {"demand", std::to_string(k)}, {"path", std::to_string(p)}},
                   edge_id(dn, pn));
      for (std::size_t l : inst.demands[k].paths[p]) {
        const std::string ln = link_node(inst, l);
        net.add_edge(pn, ln, std::nullopt, std::nullopt,
                     {{"kind", "traverse"}, {"demand", std::to_string(k)},
                      {"path", std::to_string(p)}, {"link", std::to_string(l)}},
                     edge_id(pn, ln));
      }
    }
  }
  return net;
}

dsl::FlowNetwork to_flow_network(const VbpInstance& inst, Model model,
                                 std::optional<std::size_t> bins) {
  if (model != Model::kFf && model != Model::kOptVbp) invalid("VBP networks are ff or opt_vbp");
  inst.check();
  if (inst.dims() != 1) {
    throw Error(ErrorKind::kUnsupportedBehavior, "bin networks support one dimension only");
  }
  const std::size_t m = bins.value_or(inst.bins.size());
  auto capacity = [&](std::size_t j) {
    return j < inst.bins.size() ? inst.bins[j][0] : inst.bins.back()[0];
  };
  dsl::FlowNetwork net;
  net.add_node(kOccupancySink, dsl::NodeBehavior::sink(dsl::SinkSense::kMinimize),
               {{"role", "occupancy"}});
  for (std::size_t j = 0; j < m; ++j) {
    const std::string id = bin_node(j);
    net.add_node(id, dsl::NodeBehavior::split({{edge_id(id, kOccupancySink), capacity(j)}}),
                 {{"role", "bin"}});
    net.add_edge(id, kOccupancySink, std::nullopt, std::nullopt,
                 {{"kind", "load"}, {"bin", std::to_string(j)}}, edge_id(id, kOccupancySink));
  }
  for (std::size_t i = 0; i < inst.sizes.size(); ++i) {
    const std::string id = ball_node(i);
    net.add_node(id, dsl::NodeBehavior::source(dsl::BehaviorKind::kPick, inst.sizes[i][0]),
                 {{"role", "ball"}});
    for (std::size_t j = 0; j < m; ++j) {
      net.add_edge(id, bin_node(j), std::nullopt, std::nullopt,
                   {{"kind", "place"}, {"ball", std::to_string(i)}, {"bin", std::to_string(j)}},
                   edge_id(id, bin_node(j)));
    }
  }
  return net;
}

namespace {

std::size_t meta_index(const dsl::Edge& e, const std::string& key) {
  return static_cast<std::size_t>(std::stoul(e.metadata.at(key)));
}

}  // namespace

dsl::FlowAssignment project_allocation(const TeInstance& inst, const Allocation& alloc,
                                       const dsl::FlowNetwork& net) {
  dsl::FlowAssignment a;
  a.flows.assign(net.edges().size(), 0.0);
  if (alloc.path_flow.empty()) return a;
  std::vector<double> link_load(inst.links.size(), 0.0);
  for (std::size_t k = 0; k < alloc.path_flow.size(); ++k) {
    for (std::size_t p = 0; p < alloc.path_flow[k].size(); ++p) {
      for (std::size_t l : inst.demands[k].paths[p]) link_load[l] += alloc.path_flow[k][p];
    }
  }
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const dsl::Edge& edge = net.edges()[e];
    const auto kind = edge.metadata.find("kind");
    if (kind == edge.metadata.end()) continue;
    if (kind->second == "unmet") {
      a.flows[e] = alloc.unmet[meta_index(edge, "demand")];
    } else if (kind->second == "assign" || kind->second == "traverse") {
      a.flows[e] = alloc.path_flow[meta_index(edge, "demand")][meta_index(edge, "path")];
    } else if (kind->second == "deliver") {
      a.flows[e] = link_load[meta_index(edge, "link")];
    }
  }
  return a;
}

dsl::FlowAssignment project_allocation(const VbpInstance& inst, const Allocation& alloc,
                                       const dsl::FlowNetwork& net) {
  dsl::FlowAssignment a;
  a.flows.assign(net.edges().size(), 0.0);
  if (alloc.bin_of.empty()) return a;
  std::vector<double> load;
  for (std::size_t i = 0; i < alloc.bin_of.size(); ++i) {
    if (load.size() <= alloc.bin_of[i]) load.resize(alloc.bin_of[i] + 1, 0.0);
    load[alloc.bin_of[i]] += inst.sizes[i][0];
  }
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const dsl::Edge& edge = net.edges()[e];
    const auto kind = edge.metadata.find("kind");
    if (kind == edge.metadata.end()) continue;
    if (kind->second == "place") {
      const std::size_t i = meta_index(edge, "ball");
      if (alloc.bin_of[i] == meta_index(edge, "bin")) a.flows[e] = inst.sizes[i][0];
    } else if (kind->second == "load") {
      const std::size_t j = meta_index(edge, "bin");
      a.flows[e] = j < load.size() ? load[j] : 0.0;
    }
  }
  return a;
}

}  // namespace xplain::heur
