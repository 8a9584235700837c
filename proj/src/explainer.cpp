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

#include "xplain/explainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "xplain/error.hpp"
#include "xplain/rng.hpp"

namespace xplain::explain {

Heatmap score_points(const dsl::FlowNetwork& net, const FlowFn& heuristic,
                     const FlowFn& benchmark, const std::vector<std::vector<double>>& points,
                     unsigned threads) {
  const std::size_t m = net.edges().size();
  std::vector<dsl::FlowAssignment> h(points.size()), b(points.size());
  parallel_for(points.size(), threads, [&](std::size_t k) {
    h[k] = heuristic(points[k]);
    b[k] = benchmark(points[k]);
  });
  Heatmap hm;
  hm.samples = points.size();
  hm.edges.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    EdgeScore& s = hm.edges[e];
    s.id = net.edges()[e].id;
    s.from = net.edges()[e].from;
    s.to = net.edges()[e].to;
  }
  std::vector<double> abs_sum(m, 0.0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (h[k].flows.size() != m || b[k].flows.size() != m) {
      throw Error(ErrorKind::kInvalidArgument, "flow assignment does not match the network");
    }
    for (std::size_t e = 0; e < m; ++e) {
      const bool hs = h[k].flows[e] > kFlowEps;
      const bool bs = b[k].flows[e] > kFlowEps;
      EdgeScore& s = hm.edges[e];
      if (hs && bs) {
        ++s.both;
      } else if (bs) {
        ++s.benchmark_only;
      } else if (hs) {
        ++s.heuristic_only;
      } else {
        ++s.neither;
      }
      abs_sum[e] += std::fabs(b[k].flows[e] - h[k].flows[e]);
    }
  }
  if (hm.samples > 0) {
    const double n = static_cast<double>(hm.samples);
    for (std::size_t e = 0; e < m; ++e) {
      EdgeScore& s = hm.edges[e];
      s.mean = (static_cast<double>(s.benchmark_only) - static_cast<double>(s.heuristic_only)) / n;
      s.mean_abs_delta = abs_sum[e] / n;
    }
  }
  return hm;
}

Heatmap score_edges(const dsl::FlowNetwork& net, const FlowFn& heuristic, const FlowFn& benchmark,
                    const Polytope& region, const Box& space, std::size_t n, std::uint64_t seed,
                    unsigned threads) {
  const PolytopeSampler sampler(region, space, 10 * std::max<std::size_t>(n, 1),
                                derive_seed(seed, {0x70696c6f74}));
  std::vector<std::vector<double>> points(n);
  parallel_for(n, threads, [&](std::size_t k) {
    Rng rng(seed, {0x6578706c, k});
    points[k] = sampler.draw(rng);
  });
  return score_points(net, heuristic, benchmark, points, threads);
}

dsl::FlowNetwork scenario_network(const Scenario& s) {
  if (s.kind == ProblemKind::kTe) return heur::to_flow_network(s.te, heur::Model::kOptTe);
  return heur::to_flow_network(s.vbp, heur::Model::kOptVbp,
                               std::max(s.vbp.bins.size(), s.vbp.sizes.size()));
}

FlowFn scenario_flows(const Scenario& s, heur::Model model, const dsl::FlowNetwork& net) {
  return [&s, model, &net](const std::vector<double>& x) {
    const heur::Allocation a = allocate(s, model, x);
    if (s.kind == ProblemKind::kTe) return heur::project_allocation(s.te, a, net);
    return heur::project_allocation(vbp_at(s, x), a, net);
  };
}

namespace {

std::string hex_color(double r, double g, double b) {
  char buf[8];
  auto c = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0))); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

std::string edge_color(double mean) {
  if (mean == 0.0) return "#b0b0b0";
  const double fade = 255.0 * (1.0 - std::min(1.0, std::fabs(mean)));
  return mean < 0 ? hex_color(255, fade, fade) : hex_color(fade, fade, 255);
}

std::string node_fill(dsl::BehaviorKind k) {
  switch (k) {
    case dsl::BehaviorKind::kSplit: return "#fff2cc";
    case dsl::BehaviorKind::kPick: return "#f4cccc";
    case dsl::BehaviorKind::kMultiply: return "#d9d2e9";
    case dsl::BehaviorKind::kAllEqual: return "#d0e0e3";
    case dsl::BehaviorKind::kCopy: return "#d9ead3";
    case dsl::BehaviorKind::kSource: return "#cfe2f3";
    case dsl::BehaviorKind::kSink: return "#eeeeee";
  }
  return "#ffffff";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string emit_dot(const Heatmap& hm, const dsl::FlowNetwork& net) {
  std::ostringstream out;
  out << "digraph heatmap {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, style=filled, fontname=\"Helvetica\"];\n";
  for (const dsl::Node& n : net.nodes()) {
    out << "  " << quote(n.id) << " [fillcolor=" << quote(node_fill(n.behavior.kind))
        << ", tooltip=" << quote(dsl::to_string(n.behavior.kind)) << "];\n";
  }
  for (const EdgeScore& e : hm.edges) {
    const double width = 1.0 + 3.0 * std::fabs(e.mean);
    std::ostringstream tip;
    tip << "mean=" << fixed(e.mean) << " both=" << e.both << " benchmark_only=" << e.benchmark_only
        << " heuristic_only=" << e.heuristic_only << " neither=" << e.neither;
    out << "  " << quote(e.from) << " -> " << quote(e.to) << " [color=" << quote(edge_color(e.mean))
        << ", penwidth=" << fixed(width) << ", tooltip=" << quote(tip.str()) << "];\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::json to_json(const Heatmap& hm) {
  nlohmann::json edges = nlohmann::json::array();
  for (const EdgeScore& e : hm.edges) {
    edges.push_back({{"id", e.id},
                     {"from", e.from},
                     {"to", e.to},
                     {"mean", e.mean},
                     {"mean_abs_delta", e.mean_abs_delta},
                     {"both", e.both},
                     {"benchmark_only", e.benchmark_only},
                     {"heuristic_only", e.heuristic_only},
                     {"neither", e.neither}});
  }
  return {{"subspace", hm.subspace},
          {"heuristic", hm.heuristic},
          {"benchmark", hm.benchmark},
          {"samples", hm.samples},
          {"flow_epsilon", kFlowEps},
          {"edges", edges}};
}

Heatmap heatmap_from_json(const nlohmann::json& doc) {
  try {
    Heatmap hm;
    hm.subspace = doc.value("subspace", "");
    hm.heuristic = doc.value("heuristic", "");
    hm.benchmark = doc.value("benchmark", "");
    hm.samples = doc.at("samples").get<std::size_t>();
    for (const auto& j : doc.at("edges")) {
      EdgeScore e;
      e.id = j.at("id").get<std::string>();
      e.from = j.at("from").get<std::string>();
      e.to = j.at("to").get<std::string>();
      e.mean = j.at("mean").get<double>();
      e.mean_abs_delta = j.value("mean_abs_delta", 0.0);
      e.both = j.at("both").get<std::size_t>();
      e.benchmark_only = j.at("benchmark_only").get<std::size_t>();
      e.heuristic_only = j.at("heuristic_only").get<std::size_t>();
      e.neither = j.at("neither").get<std::size_t>();
      hm.edges.push_back(std::move(e));
    }
    return hm;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("heatmap: ") + e.what());
  }
}

}  // namespace xplain::explain
