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

#include "xplain/generalizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "xplain/analyzer.hpp"
#include "xplain/error.hpp"
#include "xplain/rng.hpp"

namespace xplain::general {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::kInvalidArgument, msg);
}

const Scenario& need_te(const Scenario& s, const char* feature) {
  if (s.kind != ProblemKind::kTe) invalid(std::string(feature) + " needs a TE instance");
  return s;
}

const Scenario& need_vbp(const Scenario& s, const char* feature) {
  if (s.kind != ProblemKind::kVbp) invalid(std::string(feature) + " needs a bin packing instance");
  return s;
}

double pinned_shortest_path_length(const Scenario& s) {
  need_te(s, "pinned_shortest_path_length");
  std::size_t best = 0;
  for (std::size_t k = 0; k < s.te.demands.size(); ++k) {
    if (s.lo[k] > s.te.threshold) continue;
    const auto& d = s.te.demands[k];
    best = std::max(best, d.paths[d.shortest].size());
  }
  return static_cast<double>(best);
}

double min_path_capacity(const Scenario& s) {
  need_te(s, "min_path_capacity");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& d : s.te.demands) {
    for (const auto& path : d.paths) {
      for (std::size_t l : path) best = std::min(best, s.te.links[l].capacity);
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

}  // namespace

const std::vector<std::pair<std::string, Extractor>>& extractors() {
  static const std::vector<std::pair<std::string, Extractor>> registry = {
      {"pinned_shortest_path_length", pinned_shortest_path_length},
      {"min_path_capacity", min_path_capacity},
      {"ball_count",
       [](const Scenario& s) {
         return static_cast<double>(need_vbp(s, "ball_count").vbp.sizes.size());
       }},
      {"bin_count",
       [](const Scenario& s) {
         return static_cast<double>(need_vbp(s, "bin_count").vbp.bins.size());
       }},
      {"ball_size_sum",
       [](const Scenario& s) {
         double sum = 0.0;
         for (const auto& b : need_vbp(s, "ball_size_sum").vbp.sizes) {
           for (double v : b) sum += v;
         }
         return sum;
       }},
  };
  return registry;
}

const Extractor& extractor(const std::string& name) {
  for (const auto& [n, f] : extractors()) {
    if (n == name) return f;
  }
  invalid("unknown feature '" + name + "'");
}

void Predicate::check() const {
  extractor(feature);
  if (!(alpha > 0.0 && alpha < 1.0)) invalid("alpha must lie in (0, 1)");
}

std::string to_string(const Predicate& p) {
  return std::string(p.kind == Trend::kIncreasing ? "increasing" : "decreasing") + "(" +
         p.feature + ")";
}

Predicate predicate_from_string(const std::string& text, double alpha) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.empty() || text.back() != ')') {
    invalid("predicate must look like increasing(feature)");
  }
  Predicate p;
  const std::string kind = text.substr(0, open);
  if (kind == "increasing") {
    p.kind = Trend::kIncreasing;
  } else if (kind == "decreasing") {
    p.kind = Trend::kDecreasing;
  } else {
    invalid("unknown predicate kind '" + kind + "'");
  }
  p.feature = text.substr(open + 1, text.size() - open - 2);
  p.alpha = alpha;
  p.check();
  return p;
}

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::kTeLine: return "te-line";
    case FamilyKind::kTeRandom: return "te-random";
    case FamilyKind::kVbpRandom: return "vbp-random";
  }
  return "?";
}

FamilyKind family_kind_from_string(const std::string& s) {
  for (FamilyKind k : {FamilyKind::kTeLine, FamilyKind::kTeRandom, FamilyKind::kVbpRandom}) {
    if (s == to_string(k)) return k;
  }
  invalid("unknown instance family '" + s + "'");
}

void InstanceFamily::check() const {
  if (count < 2) invalid("an instance family needs at least two instances");
  if (size_min > size_max || capacity_min > capacity_max || threshold_min > threshold_max ||
      bins_min > bins_max) {
    invalid("instance family ranges must be nonempty");
  }
  if (!(capacity_min > 0.0) || threshold_min < 0.0) invalid("capacities must be positive");
  if (kind == FamilyKind::kTeLine && size_min < 1) invalid("te-line needs at least one hop");
  if (kind == FamilyKind::kTeRandom && size_min < 2) invalid("te-random needs two nodes");
  if (kind == FamilyKind::kVbpRandom && (size_min < 1 || bins_min < 1)) {
    invalid("vbp-random needs balls and bins");
  }
}

namespace {

std::size_t pick_size(const InstanceFamily& fam, std::size_t i) {
  if (fam.count == 1 || fam.size_min == fam.size_max) return fam.size_min;
  const double t = static_cast<double>(i) / static_cast<double>(fam.count - 1);
  return fam.size_min +
         static_cast<std::size_t>(std::lround(t * static_cast<double>(fam.size_max - fam.size_min)));
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

nlohmann::json te_line(std::size_t hops, double cap, double threshold, const std::string& name) {
  auto a = [](std::size_t i) { return "a" + std::to_string(i); };
  auto d = [](std::size_t i) { return "d" + std::to_string(i); };
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i <= hops; ++i) nodes.push_back(a(i));
  for (std::size_t i = 1; i <= hops; ++i) nodes.push_back(d(i));
  nlohmann::json links = nlohmann::json::array();
  for (std::size_t i = 0; i < hops; ++i) {
    links.push_back({{"from", a(i)}, {"to", a(i + 1)}, {"capacity", cap}});
  }
  nlohmann::json line = nlohmann::json::array();
  nlohmann::json detour = nlohmann::json::array({a(0)});
  for (std::size_t i = 0; i <= hops; ++i) line.push_back(a(i));
  std::string prev = a(0);
  for (std::size_t i = 1; i <= hops; ++i) {
    links.push_back({{"from", prev}, {"to", d(i)}, {"capacity", threshold}});
    detour.push_back(d(i));
    prev = d(i);
  }
  links.push_back({{"from", prev}, {"to", a(hops)}, {"capacity", threshold}});
  detour.push_back(a(hops));
  nlohmann::json demands = nlohmann::json::array();
  demands.push_back({{"src", a(0)}, {"dst", a(hops)}, {"paths", nlohmann::json::array({line, detour})}, {"shortest", 0}});
  std::vector<double> inputs{threshold};
  for (std::size_t i = 0; i < hops; ++i) {
    demands.push_back({{"src", a(i)}, {"dst", a(i + 1)}, {"paths", nlohmann::json::array({nlohmann::json::array({a(i), a(i + 1)})})}});
    inputs.push_back(cap);
  }
  return {{"name", name},          {"problem", "te"},
          {"nodes", nodes},        {"links", links},
          {"demands", demands},    {"threshold", threshold},
          {"input_bounds", {{"lo", 0.0}, {"hi", cap}}},
          {"inputs", inputs},      {"heuristic", "dp"},
          {"benchmark", "opt_te"}};
}

nlohmann::json te_random(std::size_t n, const InstanceFamily& fam, Rng& rng,
                         const std::string& name) {
  auto v = [](std::size_t i) { return "n" + std::to_string(i); };
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(v(i));
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    edges.insert({i, j});
    edges.insert({j, i});
  }
  for (std::size_t extra = 0; extra < n; ++extra) {
    const auto a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    const auto b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    if (a != b) edges.insert({a, b});
  }
  nlohmann::json links = nlohmann::json::array();
  double max_cap = 0.0;
  for (const auto& [a, b] : edges) {
    const double cap = round2(rng.uniform(fam.capacity_min, fam.capacity_max));
    max_cap = std::max(max_cap, cap);
    links.push_back({{"from", v(a)}, {"to", v(b)}, {"capacity", cap}});
  }
  nlohmann::json demands = nlohmann::json::array();
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < n; ++k) {
    const auto a = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    const auto b = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    if (a == b || !pairs.insert({a, b}).second) continue;
    demands.push_back({{"src", v(a)}, {"dst", v(b)}});
  }
  if (demands.empty()) demands.push_back({{"src", v(0)}, {"dst", v(1)}});
  const double threshold = round2(rng.uniform(fam.threshold_min, fam.threshold_max));
  return {{"name", name},
          {"problem", "te"},
          {"nodes", nodes},
          {"links", links},
          {"demands", demands},
          {"k_paths", 2},
          {"threshold", threshold},
          {"input_bounds", {{"lo", 0.0}, {"hi", max_cap}}},
          {"heuristic", "dp"},
          {"benchmark", "opt_te"}};
}

nlohmann::json vbp_random(std::size_t balls, const InstanceFamily& fam, Rng& rng,
                          const std::string& name) {
  const auto bins = static_cast<std::size_t>(rng.uniform_int(
      static_cast<std::int64_t>(fam.bins_min), static_cast<std::int64_t>(fam.bins_max)));
  std::vector<double> sizes;
  for (std::size_t i = 0; i < balls; ++i) sizes.push_back(round2(rng.uniform(0.0, 1.0)));
  return {{"name", name},      {"problem", "vbp"},
          {"sizes", sizes},    {"bin_capacity", 1.0},
          {"num_bins", bins},  {"input_bounds", {{"lo", 0.0}, {"hi", 1.0}}},
          {"heuristic", "ff"}, {"benchmark", "opt_vbp"}};
}

}  // namespace

std::vector<Scenario> generate_instances(const InstanceFamily& fam, std::uint64_t seed) {
  fam.check();
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < fam.count; ++i) {
    Rng rng(seed, {i});
    const std::size_t size = pick_size(fam, i);
    const std::string name = std::string(to_string(fam.kind)) + "-" + std::to_string(i);
    nlohmann::json doc;
    switch (fam.kind) {
      case FamilyKind::kTeLine: {
        const double cap = round2(rng.uniform(fam.capacity_min, fam.capacity_max));
        const double t = round2(rng.uniform(fam.threshold_min, fam.threshold_max));
        doc = te_line(size, cap, t, name);
        break;
      }
      case FamilyKind::kTeRandom:
        doc = te_random(size, fam, rng, name);
        break;
      case FamilyKind::kVbpRandom:
        doc = vbp_random(size, fam, rng, name);
        break;
    }
    out.push_back(scenario_from_json(doc));
  }
  return out;
}

nlohmann::json instance_to_json(const Scenario& s) {
  nlohmann::json doc = {{"name", s.name},
                        {"lo", s.lo},
                        {"hi", s.hi},
                        {"labels", s.labels},
                        {"heuristic", heur::to_string(s.heuristic)},
                        {"benchmark", heur::to_string(s.benchmark)}};
  if (s.kind == ProblemKind::kTe) {
    doc["problem"] = "te";
    doc["nodes"] = s.te.nodes;
    nlohmann::json links = nlohmann::json::array();
    for (std::size_t l = 0; l < s.te.links.size(); ++l) {
      links.push_back({{"link", s.te.link_label(l)}, {"capacity", s.te.links[l].capacity}});
    }
    doc["links"] = links;
    nlohmann::json demands = nlohmann::json::array();
    for (std::size_t k = 0; k < s.te.demands.size(); ++k) {
      nlohmann::json paths = nlohmann::json::array();
      for (std::size_t p = 0; p < s.te.demands[k].paths.size(); ++p) {
        paths.push_back(s.te.path_label(k, p));
      }
      demands.push_back({{"demand", s.te.demand_label(k)},
                         {"paths", paths},
                         {"shortest", s.te.demands[k].shortest}});
    }
    doc["demands"] = demands;
    doc["threshold"] = s.te.threshold;
  } else {
    doc["problem"] = "vbp";
    doc["bins"] = s.vbp.bins;
    doc["sizes"] = s.vbp.sizes;
  }
  return doc;
}

GapProbe analyzer_probe(heur::GapMode mode, std::size_t budget, unsigned threads) {
  return [mode, budget, threads](const Scenario& s, std::uint64_t seed) {
    const GapFn gap = make_gap_fn(s, mode);
    analysis::ExclusionSet none;
    analysis::AnalyzerParams params;
    params.budget = budget;
    params.min_gap = -std::numeric_limits<double>::infinity();
    params.threads = threads;
    const auto best = analysis::find_adversarial({{s.lo, s.hi}, s.labels}, gap, none, params, seed);
    return best ? best->gap : 0.0;
  };
}

TrendFinding evaluate_observations(const Predicate& pred, std::vector<Observation> obs) {
  pred.check();
  if (obs.size() < 5) {
    throw Error(ErrorKind::kTooFewInstances, "a trend needs at least five instances");
  }
  std::vector<std::pair<double, double>> pairs;
  for (const Observation& o : obs) pairs.push_back({o.feature, o.gap});
  const bool up = pred.kind == Trend::kIncreasing;
  const stats::TrendResult r = stats::kendall_trend(
      pairs, up ? stats::Alternative::kGreater : stats::Alternative::kLess);
  TrendFinding f;
  f.predicate = pred;
  f.tau = r.tau;
  f.p = r.p;
  f.method = r.method;
  f.holds = (up ? r.tau > 0.0 : r.tau < 0.0) && r.p < pred.alpha;
  f.observations = std::move(obs);
  return f;
}

TrendFinding evaluate_predicate(const Predicate& pred, const std::vector<Scenario>& instances,
                                const GapProbe& probe, std::uint64_t seed, unsigned threads) {
  pred.check();
  if (instances.size() < 5) {
    throw Error(ErrorKind::kTooFewInstances, "a trend needs at least five instances");
  }
  const Extractor& feature = extractor(pred.feature);
  std::vector<Observation> obs(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    obs[i].instance = instances[i].name.empty() ? "instance-" + std::to_string(i)
                                                : instances[i].name;
    obs[i].feature = feature(instances[i]);
    obs[i].gap = probe(instances[i], derive_seed(seed, {i}));
  });
  return evaluate_observations(pred, std::move(obs));
}

nlohmann::json to_json(const TrendFinding& f) {
  nlohmann::json obs = nlohmann::json::array();
  for (const Observation& o : f.observations) {
    obs.push_back({{"instance", o.instance}, {"feature", o.feature}, {"gap", o.gap}});
  }
  return {{"predicate", to_string(f.predicate)},
          {"feature", f.predicate.feature},
          {"alpha", f.predicate.alpha},
          {"tau", f.tau},
          {"p", f.p},
          {"method", f.method},
          {"holds", f.holds},
          {"interpretation",
           "one-sided Kendall tau-b trend between feature and largest gap found per instance; "
           "a statistical trend, not a universally quantified statement"},
          {"observations", obs}};
}

}  // namespace xplain::general
