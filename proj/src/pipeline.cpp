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


#include "xplain/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "xplain/error.hpp"
#include "xplain/explainer.hpp"
#include "xplain/flow_dsl.hpp"
#include "xplain/milp_bridge.hpp"
#include "xplain/rng.hpp"
#include "xplain/scenario.hpp"
#include "xplain/solver.hpp"
#include "xplain/stats.hpp"

namespace xplain::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::kParse, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::kParse, "unknown key " + where + "." + key);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& dst) {
  if (obj.contains(key)) dst = obj.at(key).get<T>();
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

heur::GapMode gap_mode_from_string(const std::string& s) {
  if (s == "absolute") return heur::GapMode::kAbsolute;
  if (s == "relative") return heur::GapMode::kRelative;
  throw Error(ErrorKind::kParse, "gap_mode must be absolute or relative, got " + s);
}

const char* to_string(heur::GapMode m) {
  return m == heur::GapMode::kAbsolute ? "absolute" : "relative";
}

heur::Model model_or_throw(const std::string& s) {
  auto m = heur::model_from_string(s);
  if (!m) throw Error(ErrorKind::kParse, "unknown model " + s);
  return *m;
}

std::string display(heur::Model m) {
  switch (m) {
    case heur::Model::kDp: return "DP";
    case heur::Model::kFf: return "FF";
    case heur::Model::kOptTe:
    case heur::Model::kOptVbp: return "OPT";
  }
  return "?";
}

std::string num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Logger {
 public:
  explicit Logger(std::ostream& os) : os_(os), start_(std::chrono::steady_clock::now()) {}
  void operator()(const std::string& msg) {
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "[xplain %7.2fs] ", s);
    os_ << buf << msg << '\n';
  }

 private:
  std::ostream& os_;
  std::chrono::steady_clock::time_point start_;
};

void write_file(const PipelineConfig& cfg, const std::string& name, const std::string& body) {
  fs::create_directories(cfg.out_dir);
  const fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::kInvalidArgument, "cannot write " + p.string());
  f << body;
}

void write_json(const PipelineConfig& cfg, const std::string& name, const json& doc) {
  write_file(cfg, name, doc.dump(2) + "\n");
}

Scenario scenario_for(const PipelineConfig& cfg) {
  if (cfg.scenario.empty()) throw Error(ErrorKind::kInvalidArgument, "config has no scenario");
  Scenario s = load_scenario(cfg.scenario);
  if (cfg.heuristic) s.heuristic = *cfg.heuristic;
  if (cfg.benchmark) s.benchmark = *cfg.benchmark;
  const bool te = s.kind == ProblemKind::kTe;
  const bool ok = te ? s.heuristic == heur::Model::kDp && s.benchmark == heur::Model::kOptTe
                     : s.heuristic == heur::Model::kFf && s.benchmark == heur::Model::kOptVbp;
  if (!ok) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string("pair ") + heur::to_string(s.heuristic) + "/" +
                    heur::to_string(s.benchmark) + " does not fit a " + (te ? "te" : "vbp") +
                    " scenario");
  }
  return s;
}

analysis::InputSpace space_of(const Scenario& s) { return {Box{s.lo, s.hi}, s.labels}; }

analysis::AnalyzerParams analyzer_params(const PipelineConfig& cfg, const Scenario& s,
                                         heur::GapMode mode) {
  analysis::AnalyzerParams p;
  p.budget = cfg.budget;
  p.min_gap = cfg.min_gap ? *cfg.min_gap : default_min_gap(s, mode);
  p.threads = cfg.threads;
  p.strategy = cfg.strategy;
  return p;
}

json header(const Scenario& s, heur::GapMode mode, const PipelineConfig& cfg) {
  return {{"scenario", s.name},
          {"heuristic", heur::to_string(s.heuristic)},
          {"benchmark", heur::to_string(s.benchmark)},
          {"gap_mode", to_string(mode)},
          {"seed", cfg.seed}};
}

json allocation_json(const Scenario& s, const heur::Allocation& a) {
  json j{{"objective", a.objective}};
  if (s.kind == ProblemKind::kTe) {
    json demands = json::array();
    for (std::size_t k = 0; k < s.te.demands.size(); ++k) {
      json paths = json::array();
      for (std::size_t p = 0; p < s.te.demands[k].paths.size(); ++p) {
        paths.push_back({{"path", s.te.path_label(k, p)}, {"flow", a.path_flow[k][p]}});
      }
      demands.push_back(
          {{"demand", s.te.demand_label(k)}, {"paths", paths}, {"unmet", a.unmet[k]}});
    }
    j["demands"] = demands;
  } else {
    j["bin_of"] = a.bin_of;
    j["bins_used"] = a.bins_used;
  }
  return j;
}

void print_allocation(std::ostream& out, const Scenario& s, heur::Model m,
                      const heur::Allocation& a) {
  const std::string name = display(m);
  if (s.kind == ProblemKind::kTe) {
    for (std::size_t k = 0; k < s.te.demands.size(); ++k) {
      out << "  " << name << " demand " << s.te.demand_label(k) << ":";
      for (std::size_t p = 0; p < s.te.demands[k].paths.size(); ++p) {
        out << " " << s.te.path_label(k, p) << "=" << num(a.path_flow[k][p]);
      }
      out << " unmet=" << num(a.unmet[k]) << '\n';
    }
  } else {
    out << "  " << name << " bins:";
    for (std::size_t i = 0; i < a.bin_of.size(); ++i) out << " " << i << "->" << a.bin_of[i];
    out << '\n';
  }
}

// Subspace files hold either one subspace or a subspaces report.
Subspace pick_subspace(const PipelineConfig& cfg) {
  if (cfg.subspace_file.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "explain needs explainer.subspace_file");
  }
  const json doc = read_json_file(cfg.subspace_file);
  if (!doc.contains("subspaces")) return subspace_from_json(doc);
  const json& list = doc.at("subspaces");
  if (cfg.subspace_index >= list.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "subspace_index " + std::to_string(cfg.subspace_index) + " out of range (" +
                    std::to_string(list.size()) + " subspaces)");
  }
  return subspace_from_json(list.at(cfg.subspace_index));
}

}  // namespace

void PipelineConfig::check() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::kInvalidArgument, what);
  };
  need(budget >= 1, "analyzer.budget must be positive");
  need(!min_gap || std::isfinite(*min_gap), "analyzer.min_gap must be finite");
  need(grow.w0 > 0 && grow.w0 <= 0.5, "subspace.w0 must be in (0, 0.5]");
  need(grow.delta > 0 && grow.delta <= 1, "subspace.delta must be in (0, 1]");
  need(grow.rho_min >= 0 && grow.rho_min <= 1, "subspace.rho_min must be in [0, 1]");
  need(grow.gamma > 0 && grow.gamma <= 1, "subspace.gamma must be in (0, 1]");
  need(tree.max_depth >= 1 && tree.min_leaf >= 1, "tree depth and leaf size must be positive");
  need(max_subspaces >= 1 && max_attempts >= 1 && revisit_cap >= 1,
       "subspace counts must be positive");
  need(epsilon > 0 && epsilon < 1, "stats.epsilon must be in (0, 1)");
  need(delta > 0 && delta < 1, "stats.delta must be in (0, 1)");
  need(alpha > 0 && alpha < 1, "stats.alpha must be in (0, 1)");
  need(margin >= 0 && margin < 1, "stats.margin must be in [0, 1)");
  need(explainer_samples >= 1, "explainer.samples must be positive");
  need(probe_budget >= 1, "generalizer.budget must be positive");
  need(threads >= 1, "threads must be positive");
  family.check();
}

PipelineConfig config_from_json(const json& doc, const std::string& base_dir) {
  PipelineConfig cfg;
  try {
    check_keys(doc,
               {"scenario", "heuristic", "benchmark", "gap_mode", "inputs", "analyzer", "subspace",
                "stats", "explainer", "generalizer", "milp", "output"},
               "config");
    if (doc.contains("scenario")) cfg.scenario = resolve(base_dir, doc.at("scenario"));
    if (doc.contains("heuristic")) cfg.heuristic = model_or_throw(doc.at("heuristic"));
    if (doc.contains("benchmark")) cfg.benchmark = model_or_throw(doc.at("benchmark"));
    if (doc.contains("gap_mode")) cfg.gap_mode = gap_mode_from_string(doc.at("gap_mode"));
    read(doc, "inputs", cfg.inputs);
    if (doc.contains("milp")) cfg.milp = resolve(base_dir, doc.at("milp"));
    if (doc.contains("output")) cfg.out_dir = resolve(base_dir, doc.at("output"));

    if (doc.contains("analyzer")) {
      const json& a = doc.at("analyzer");
      check_keys(a, {"budget", "min_gap", "strategy"}, "analyzer");
      read(a, "budget", cfg.budget);
      if (a.contains("min_gap")) cfg.min_gap = a.at("min_gap").get<double>();
      if (a.contains("strategy")) {
        const std::string st = a.at("strategy");
        if (st == "auto") cfg.strategy = analysis::Strategy::kAuto;
        else if (st == "grid") cfg.strategy = analysis::Strategy::kGrid;
        else if (st == "pattern-search") cfg.strategy = analysis::Strategy::kPatternSearch;
        else throw Error(ErrorKind::kParse, "unknown analyzer strategy " + st);
      }
    }
    if (doc.contains("subspace")) {
      const json& s = doc.at("subspace");
      check_keys(s,
                 {"w0", "delta", "rho_min", "gamma", "max_depth", "min_leaf", "max_subspaces",
                  "max_attempts", "revisit_cap"},
                 "subspace");
      read(s, "w0", cfg.grow.w0);
      read(s, "delta", cfg.grow.delta);
      read(s, "rho_min", cfg.grow.rho_min);
      read(s, "gamma", cfg.grow.gamma);
      read(s, "max_depth", cfg.tree.max_depth);
      read(s, "min_leaf", cfg.tree.min_leaf);
      read(s, "max_subspaces", cfg.max_subspaces);
      read(s, "max_attempts", cfg.max_attempts);
      read(s, "revisit_cap", cfg.revisit_cap);
    }
    if (doc.contains("stats")) {
      const json& s = doc.at("stats");
      check_keys(s, {"epsilon", "delta", "alpha", "margin"}, "stats");
      read(s, "epsilon", cfg.epsilon);
      read(s, "delta", cfg.delta);
      read(s, "alpha", cfg.alpha);
      read(s, "margin", cfg.margin);
    }
    if (doc.contains("explainer")) {
      const json& e = doc.at("explainer");
      check_keys(e, {"samples", "subspace_file", "subspace_index"}, "explainer");
      read(e, "samples", cfg.explainer_samples);
      if (e.contains("subspace_file")) {
        cfg.subspace_file = resolve(base_dir, e.at("subspace_file"));
      }
      read(e, "subspace_index", cfg.subspace_index);
    }
    if (doc.contains("generalizer")) {
      const json& g = doc.at("generalizer");
      check_keys(g, {"predicate", "gap_mode", "budget", "family"}, "generalizer");
      read(g, "predicate", cfg.predicate);
      read(g, "budget", cfg.probe_budget);
      if (g.contains("gap_mode")) cfg.generalize_gap_mode = gap_mode_from_string(g.at("gap_mode"));
      if (g.contains("family")) {
        const json& f = g.at("family");
        check_keys(f,
                   {"kind", "size_min", "size_max", "capacity_min", "capacity_max",
                    "threshold_min", "threshold_max", "bins_min", "bins_max", "count"},
                   "generalizer.family");
        if (f.contains("kind")) cfg.family.kind = general::family_kind_from_string(f.at("kind"));
        read(f, "size_min", cfg.family.size_min);
        read(f, "size_max", cfg.family.size_max);
        read(f, "capacity_min", cfg.family.capacity_min);
        read(f, "capacity_max", cfg.family.capacity_max);
        read(f, "threshold_min", cfg.family.threshold_min);
        read(f, "threshold_max", cfg.family.threshold_max);
        read(f, "bins_min", cfg.family.bins_min);
        read(f, "bins_max", cfg.family.bins_max);
        read(f, "count", cfg.family.count);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  const std::string base = fs::path(path).parent_path().string();
  return config_from_json(read_json_file(path), base.empty() ? "." : base);
}

heur::GapMode default_gap_mode(const Scenario& s) {
  return s.kind == ProblemKind::kTe ? heur::GapMode::kRelative : heur::GapMode::kAbsolute;
}

double default_min_gap(const Scenario& s, heur::GapMode mode) {
  if (mode == heur::GapMode::kRelative) return 0.05;
  if (s.kind == ProblemKind::kVbp) return 1.0;
  double total = 0.0;
  for (double h : s.hi) total += h;
  return 0.05 * total;
}

std::string samples_csv(const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& xs,
                        const std::vector<double>& gaps) {
  std::string out;
  for (const std::string& l : labels) out += l + ",";
  out += "gap\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (double v : xs[i]) out += num(v) + ",";
    out += num(gaps[i]) + "\n";
  }
  return out;
}

int cmd_run_heuristic(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  Logger say(log);
  const Scenario s = scenario_for(cfg);
  const std::vector<double> x = cfg.inputs.empty() ? s.inputs : cfg.inputs;
  if (x.size() != s.dims()) {
    throw Error(ErrorKind::kInvalidArgument, "run-heuristic needs " + std::to_string(s.dims()) +
                                                 " inputs, got " + std::to_string(x.size()));
  }
  say("evaluating " + s.name);
  const heur::Allocation h = allocate(s, s.heuristic, x);
  const heur::Allocation b = allocate(s, s.benchmark, x);
  const double abs_gap = heur::gap_value(h.objective, b.objective, s.orientation(),
                                         heur::GapMode::kAbsolute);
  const double rel_gap = heur::gap_value(h.objective, b.objective, s.orientation(),
                                         heur::GapMode::kRelative);

  out << display(s.heuristic) << " total " << num(h.objective) << " / " << display(s.benchmark)
      << " total " << num(b.objective) << '\n';
  out << "gap absolute " << num(abs_gap) << " relative " << num(rel_gap) << '\n';
  print_allocation(out, s, s.heuristic, h);
  print_allocation(out, s, s.benchmark, b);

  json doc = {{"scenario", s.name},
              {"heuristic", heur::to_string(s.heuristic)},
              {"benchmark", heur::to_string(s.benchmark)},
              {"dimensions", s.labels},
              {"inputs", x},
              {"heuristic_total", h.objective},
              {"benchmark_total", b.objective},
              {"gap_absolute", abs_gap},
              {"gap_relative", rel_gap},
              {"heuristic_allocation", allocation_json(s, h)},
              {"benchmark_allocation", allocation_json(s, b)}};
  write_json(cfg, "run_heuristic.json", doc);
  return kExitOk;
}

int cmd_analyze(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  Logger say(log);
  const Scenario s = scenario_for(cfg);
  const heur::GapMode mode = cfg.gap_mode.value_or(default_gap_mode(s));
  const analysis::AnalyzerParams params = analyzer_params(cfg, s, mode);
  analysis::ExclusionSet excl(cfg.revisit_cap);
  std::vector<analysis::Evaluation> trace;
  say("analyzing " + s.name + " with budget " + std::to_string(params.budget));
  const auto pt = analysis::find_adversarial(space_of(s), make_gap_fn(s, mode), excl, params,
                                             cfg.seed, &trace);

  std::vector<std::vector<double>> xs;
  std::vector<double> gaps;
  for (const auto& e : trace) {
    xs.push_back(e.x);
    gaps.push_back(e.gap);
  }
  write_file(cfg, "analyze_samples.csv", samples_csv(s.labels, xs, gaps));

  json doc = header(s, mode, cfg);
  doc["min_gap"] = params.min_gap;
  doc["found"] = pt.has_value();
  doc["point"] = pt ? analysis::to_json(*pt, s.labels) : json(nullptr);
  write_json(cfg, "adversarial.json", doc);
  if (!pt) {
    out << "no point with gap >= " << num(params.min_gap) << " in " << trace.size()
        << " evaluations\n";
    return kExitNotFound;
  }
  out << "gap " << num(pt->gap) << " at";
  for (std::size_t i = 0; i < pt->x.size(); ++i) out << " " << s.labels[i] << "=" << num(pt->x[i]);
  out << " (" << pt->strategy << ", " << pt->evaluations << " evaluations)\n";
  return kExitOk;
}

int cmd_subspaces(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  Logger say(log);
  const Scenario s = scenario_for(cfg);
  const heur::GapMode mode = cfg.gap_mode.value_or(default_gap_mode(s));
  const std::size_t n = stats::dkw_samples(cfg.epsilon, cfg.delta);

  subspace::GenerateParams gp;
  gp.analyzer = analyzer_params(cfg, s, mode);
  gp.grow = cfg.grow;
  gp.grow.n_shell = n;
  gp.grow.threads = cfg.threads;
  gp.tree = cfg.tree;
  gp.significance.n_pairs = n;
  gp.significance.margin = cfg.margin;
  gp.significance.alpha = cfg.alpha;
  gp.significance.threads = cfg.threads;
  gp.revisit_cap = cfg.revisit_cap;
  gp.max_subspaces = cfg.max_subspaces;
  gp.max_attempts = cfg.max_attempts;

  say("generating subspaces for " + s.name + " with " + std::to_string(n) +
      " samples per shell and test");
  const auto result = subspace::generate_subspaces(space_of(s), make_gap_fn(s, mode), gp, cfg.seed);
  say(std::to_string(result.subspaces.size()) + " significant, " +
      std::to_string(result.rejected.size()) + " rejected");

  json doc = header(s, mode, cfg);
  doc["min_gap"] = gp.analyzer.min_gap;
  doc["samples_per_test"] = n;
  doc.update(subspace::to_json(result, s.labels));
  write_json(cfg, "subspaces.json", doc);

  for (std::size_t i = 0; i < result.subspaces.size(); ++i) {
    const Subspace& sub = result.subspaces[i];
    out << "subspace " << i << ": seed gap " << num(sub.seed_gap) << ", p "
        << num(sub.significance ? sub.significance->p : 1.0) << ", " << sub.polytope.t.size()
        << " tree rows\n";
  }
  out << result.subspaces.size() << " significant of " << result.attempts << " attempts\n";
  return result.subspaces.empty() ? kExitNotFound : kExitOk;
}

int cmd_explain(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  Logger say(log);
  const Scenario s = scenario_for(cfg);
  const Subspace sub = pick_subspace(cfg);
  if (sub.polytope.dims() != s.dims()) {
    throw Error(ErrorKind::kInvalidArgument, "subspace dimensions do not match the scenario");
  }
  const dsl::FlowNetwork net = explain::scenario_network(s);
  const auto hf = explain::scenario_flows(s, s.heuristic, net);
  const auto bf = explain::scenario_flows(s, s.benchmark, net);
  say("scoring " + std::to_string(net.edges().size()) + " edges over " +
      std::to_string(cfg.explainer_samples) + " samples");
  explain::Heatmap hm = explain::score_edges(net, hf, bf, sub.polytope, Box{s.lo, s.hi},
                                             cfg.explainer_samples, cfg.seed, cfg.threads);
  hm.subspace = fs::path(cfg.subspace_file).filename().string() + "#" +
                std::to_string(cfg.subspace_index);
  write_json(cfg, "heatmap.json", explain::to_json(hm));
  write_file(cfg, "heatmap.dot", explain::emit_dot(hm, net));

  std::vector<const explain::EdgeScore*> order;
  for (const auto& e : hm.edges) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::fabs(a->mean) > std::fabs(b->mean);
  });
  const std::size_t shown = std::min<std::size_t>(order.size(), 8);
  for (std::size_t i = 0; i < shown && order[i]->mean != 0.0; ++i) {
    out << num(order[i]->mean) << "  " << order[i]->from << " -> " << order[i]->to << '\n';
  }
  return kExitOk;
}

int cmd_generalize(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  Logger say(log);
  if (cfg.predicate.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "generalize needs generalizer.predicate");
  }
  const general::Predicate pred = general::predicate_from_string(cfg.predicate, cfg.alpha);
  const auto instances = general::generate_instances(cfg.family, derive_seed(cfg.seed, {1}));
  say("probing " + std::to_string(instances.size()) + " " +
      general::to_string(cfg.family.kind) + " instances");
  const auto finding = general::evaluate_predicate(
      pred, instances, general::analyzer_probe(cfg.generalize_gap_mode, cfg.probe_budget),
      derive_seed(cfg.seed, {2}), cfg.threads);

  json doc = general::to_json(finding);
  doc["family"] = general::to_string(cfg.family.kind);
  doc["gap_mode"] = to_string(cfg.generalize_gap_mode);
  doc["seed"] = cfg.seed;
  write_json(cfg, "trend.json", doc);

  std::string csv = "instance,feature,gap\n";
  for (const auto& o : finding.observations) {
    csv += o.instance + "," + num(o.feature) + "," + num(o.gap) + "\n";
  }
  write_file(cfg, "trend_observations.csv", csv);

  out << general::to_string(pred) << ": tau " << num(finding.tau) << ", p " << num(finding.p)
      << " (" << finding.method << "), " << (finding.holds ? "holds" : "does not hold") << '\n';
  return finding.holds ? kExitOk : kExitNotFound;
}

int cmd_encode_milp(const PipelineConfig& cfg, std::ostream& out, std::ostream& log) {
  Logger say(log);
  if (cfg.milp.empty()) throw Error(ErrorKind::kInvalidArgument, "encode-milp needs milp");
  const milp::Milp m = milp::milp_from_json(read_json_file(cfg.milp));
  say("solving the MILP directly");
  const solver::Solution raw = solver::solve_mip(milp::to_program(m));

  const milp::Encoding enc = milp::encode_milp(m);
  say("solving the encoded network (" + std::to_string(enc.network.nodes().size()) + " nodes, " +
      std::to_string(enc.network.edges().size()) + " edges)");
  std::string net_status = "optimal";
  double net_value = 0.0;
  try {
    const dsl::Evaluation ev = dsl::evaluate(enc.network, {}, enc.trace.sink);
    net_value = enc.trace.objective_sign * (ev.objective - enc.trace.objective_offset);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInfeasible) net_status = "infeasible";
    else if (e.kind() == ErrorKind::kUnbounded) net_status = "unbounded";
    else throw;
  }

  const std::string raw_status = solver::to_string(raw.status);
  const bool optimal = raw.status == solver::Status::kOptimal;
  const bool agree = raw_status == net_status &&
                     (!optimal || std::fabs(raw.objective - net_value) <= 1e-6);
  json report = {{"milp", {{"status", raw_status},
                           {"objective", optimal ? json(raw.objective) : json(nullptr)},
                           {"nodes", raw.nodes}}},
                 {"network", {{"status", net_status},
                              {"objective", net_status == "optimal" ? json(net_value) : json(nullptr)},
                              {"nodes", enc.network.nodes().size()},
                              {"edges", enc.network.edges().size()},
                              {"objective_offset", enc.trace.objective_offset},
                              {"objective_sign", enc.trace.objective_sign}}},
                 {"agree", agree}};
  write_json(cfg, "network.json", dsl::to_json(enc.network));
  write_json(cfg, "milp_report.json", report);

  out << "MILP " << raw_status;
  if (optimal) out << " " << num(raw.objective);
  out << " / network " << net_status;
  if (net_status == "optimal") out << " " << num(net_value);
  out << (agree ? " (agree)" : " (DISAGREE)") << '\n';
  return agree ? kExitOk : kExitInternal;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"run-heuristic", "analyze",    "subspaces",
                                                 "explain",       "generalize", "encode-milp"};
  return names;
}

int run_command(const std::string& name, const PipelineConfig& cfg, std::ostream& out,
                std::ostream& log) {
  using Cmd = int (*)(const PipelineConfig&, std::ostream&, std::ostream&);
  static const std::map<std::string, Cmd> table = {
      {"run-heuristic", cmd_run_heuristic}, {"analyze", cmd_analyze},
      {"subspaces", cmd_subspaces},         {"explain", cmd_explain},
      {"generalize", cmd_generalize},       {"encode-milp", cmd_encode_milp}};
  const auto it = table.find(name);
  if (it == table.end()) {
    log << "error: unknown command " << name << '\n';
    return kExitConfig;
  }
  try {
    cfg.check();
    return it->second(cfg, out, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kParse:
      case ErrorKind::kInvalidArgument:
      case ErrorKind::kTooFewInstances:
        return kExitConfig;
      default:
        return kExitInternal;
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace xplain::cli
