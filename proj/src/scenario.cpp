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

#include "xplain/scenario.hpp"

#include <fstream>
#include <map>

#include "xplain/error.hpp"

namespace xplain {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::kParse, what); }

std::vector<double> per_dim(const nlohmann::json& v, std::size_t n, const char* what) {
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  auto out = v.get<std::vector<double>>();
  if (out.size() != n) {
    parse_error(std::string(what) + " needs " + std::to_string(n) + " entries");
  }
  return out;
}

std::vector<double> as_vector(const nlohmann::json& v) {
  return v.is_number() ? std::vector<double>{v.get<double>()} : v.get<std::vector<double>>();
}

void load_te(const nlohmann::json& doc, Scenario& s) {
  heur::TeInstance& te = s.te;
  te.nodes = doc.at("nodes").get<std::vector<std::string>>();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < te.nodes.size(); ++i) {
    if (!index.emplace(te.nodes[i], i).second) parse_error("duplicate node " + te.nodes[i]);
  }
  auto node = [&](const nlohmann::json& j) {
    const std::string name = j.is_string() ? j.get<std::string>() : j.dump();
    auto it = index.find(name);
    if (it == index.end()) parse_error("unknown node " + name);
    return it->second;
  };
  for (const auto& jl : doc.at("links")) {
    te.links.push_back({node(jl.at("from")), node(jl.at("to")), jl.at("capacity").get<double>()});
  }
  auto link_between = [&](std::size_t a, std::size_t b) {
    for (std::size_t l = 0; l < te.links.size(); ++l) {
      if (te.links[l].from == a && te.links[l].to == b) return l;
    }
    parse_error("no link " + te.nodes[a] + "-" + te.nodes[b]);
  };
  const std::size_t k_paths = doc.value("k_paths", 4u);
  te.threshold = doc.value("threshold", 0.0);
  for (const auto& jd : doc.at("demands")) {
    heur::Demand d;
    d.src = node(jd.at("src"));
    d.dst = node(jd.at("dst"));
    if (jd.contains("paths")) {
      for (const auto& jp : jd.at("paths")) {
        heur::Path p;
        for (std::size_t t = 0; t + 1 < jp.size(); ++t) {
          p.push_back(link_between(node(jp[t]), node(jp[t + 1])));
        }
        d.paths.push_back(p);
      }
    } else {
      d.paths = heur::k_shortest_paths(te.nodes, te.links, d.src, d.dst,
                                       jd.value("k_paths", k_paths));
      if (d.paths.empty()) {
        parse_error("no path from " + te.nodes[d.src] + " to " + te.nodes[d.dst]);
      }
    }
    d.shortest = jd.contains("shortest") ? jd.at("shortest").get<std::size_t>()
                                         : heur::pick_shortest(d.paths);
    te.demands.push_back(std::move(d));
  }
  te.check();
  for (std::size_t k = 0; k < te.demands.size(); ++k) s.labels.push_back(te.demand_label(k));
}

void load_vbp(const nlohmann::json& doc, Scenario& s) {
  heur::VbpInstance& v = s.vbp;
  const auto cap = as_vector(doc.value("bin_capacity", nlohmann::json(1.0)));
  const std::size_t dims = cap.size();
  const std::size_t bins = doc.value("num_bins", 1u);
  if (doc.contains("bins")) {
    for (const auto& jb : doc.at("bins")) v.bins.push_back(as_vector(jb));
  } else {
    v.bins.assign(std::max<std::size_t>(bins, 1), cap);
  }
  v.unbounded = doc.value("unbounded", false);
  if (doc.contains("sizes")) {
    for (const auto& js : doc.at("sizes")) v.sizes.push_back(as_vector(js));
  } else {
    const std::size_t balls = doc.at("num_balls").get<std::size_t>();
    v.sizes.assign(balls, std::vector<double>(dims, 0.0));
  }
  v.check();
  for (std::size_t i = 0; i < v.sizes.size(); ++i) {
    for (std::size_t d = 0; d < v.dims(); ++d) {
      s.labels.push_back(v.dims() == 1 ? "B" + std::to_string(i)
                                       : "B" + std::to_string(i) + "." + std::to_string(d));
    }
  }
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& doc) {
  Scenario s;
  try {
    s.name = doc.value("name", std::string("scenario"));
    const std::string problem = doc.at("problem").get<std::string>();
    if (problem == "te") {
      s.kind = ProblemKind::kTe;
      load_te(doc, s);
      s.heuristic = heur::Model::kDp;
      s.benchmark = heur::Model::kOptTe;
    } else if (problem == "vbp") {
      s.kind = ProblemKind::kVbp;
      load_vbp(doc, s);
      s.heuristic = heur::Model::kFf;
      s.benchmark = heur::Model::kOptVbp;
    } else {
      parse_error("problem must be te or vbp");
    }
    for (const char* key : {"heuristic", "benchmark"}) {
      if (!doc.contains(key)) continue;
      auto m = heur::model_from_string(doc.at(key).get<std::string>());
      if (!m) parse_error(std::string("unknown model for ") + key);
      const bool te_model = *m == heur::Model::kDp || *m == heur::Model::kOptTe;
      if (te_model != (s.kind == ProblemKind::kTe)) {
        parse_error(std::string(key) + " does not match the problem kind");
      }
      (std::string(key) == "heuristic" ? s.heuristic : s.benchmark) = *m;
    }
    const std::size_t n = s.labels.size();
    const nlohmann::json bounds = doc.value("input_bounds", nlohmann::json::object());
    const double default_hi = s.kind == ProblemKind::kVbp ? s.vbp.bins.front().front() : 100.0;
    s.lo = per_dim(bounds.value("lo", nlohmann::json(0.0)), n, "input_bounds.lo");
    s.hi = per_dim(bounds.value("hi", nlohmann::json(default_hi)), n, "input_bounds.hi");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(s.lo[i] <= s.hi[i]) || s.lo[i] < 0.0) {
        throw Error(ErrorKind::kInvalidArgument, "input bounds need 0 <= lo <= hi");
      }
    }
    if (doc.contains("inputs")) {
      s.inputs = doc.at("inputs").get<std::vector<double>>();
    } else if (s.kind == ProblemKind::kVbp && doc.contains("sizes")) {
      for (const auto& ball : s.vbp.sizes) s.inputs.insert(s.inputs.end(), ball.begin(), ball.end());
    }
    if (!s.inputs.empty() && s.inputs.size() != n) parse_error("inputs has the wrong length");
  } catch (const nlohmann::json::exception& e) {
    parse_error(std::string("scenario: ") + e.what());
  }
  return s;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

heur::VbpInstance vbp_at(const Scenario& s, const std::vector<double>& x) {
  heur::VbpInstance v = s.vbp;
  const std::size_t d = v.dims();
  if (x.size() != v.sizes.size() * d) {
    throw Error(ErrorKind::kInvalidArgument, "point has the wrong dimension");
  }
  for (std::size_t i = 0; i < v.sizes.size(); ++i) {
    for (std::size_t t = 0; t < d; ++t) v.sizes[i][t] = x[i * d + t];
  }
  v.unbounded = true;
  return v;
}

heur::Allocation allocate(const Scenario& s, heur::Model model, const std::vector<double>& x) {
  switch (model) {
    case heur::Model::kDp: return heur::run_dp(s.te, x);
    case heur::Model::kOptTe: return heur::optimal_te(s.te, x);
    case heur::Model::kFf: return heur::run_ff(vbp_at(s, x)).first;
    case heur::Model::kOptVbp: return heur::optimal_vbp(vbp_at(s, x));
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown model");
}

double objective(const Scenario& s, heur::Model model, const std::vector<double>& x) {
  return allocate(s, model, x).objective;
}

GapFn make_gap_fn(const Scenario& s, heur::GapMode mode) {
  return [s, mode](const std::vector<double>& x) {
    return heur::gap_value(objective(s, s.heuristic, x), objective(s, s.benchmark, x),
                           s.orientation(), mode);
  };
}

}  // namespace xplain
