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

#include "xplain/flow_dsl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xplain/error.hpp"
#include "xplain/milp_bridge.hpp"
#include "xplain/solver.hpp"

namespace xplain::dsl {
namespace {

const std::vector<std::size_t> kNoEdges;

double sum_flows(const std::vector<std::size_t>& edges, const FlowAssignment& a) {
  double s = 0.0;
  for (std::size_t e : edges) s += a.flows[e];
  return s;
}

BehaviorKind kind_from_string(const std::string& s) {
  if (s == "split") return BehaviorKind::kSplit;
  if (s == "pick") return BehaviorKind::kPick;
  if (s == "multiply") return BehaviorKind::kMultiply;
  if (s == "all_equal") return BehaviorKind::kAllEqual;
  if (s == "copy") return BehaviorKind::kCopy;
  if (s == "source") return BehaviorKind::kSource;
  if (s == "sink") return BehaviorKind::kSink;
  throw Error(ErrorKind::kParse, "unknown node behavior '" + s + "'");
}

}  // namespace

const char* to_string(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::kSplit: return "split";
    case BehaviorKind::kPick: return "pick";
    case BehaviorKind::kMultiply: return "multiply";
    case BehaviorKind::kAllEqual: return "all_equal";
    case BehaviorKind::kCopy: return "copy";
    case BehaviorKind::kSource: return "source";
    case BehaviorKind::kSink: return "sink";
  }
  return "unknown";
}

NodeBehavior NodeBehavior::split(std::map<EdgeId, double> outgoing_capacities,
                                 std::map<EdgeId, double> fixed_incoming) {
  NodeBehavior b;
  b.kind = BehaviorKind::kSplit;
  b.outgoing_capacities = std::move(outgoing_capacities);
  b.fixed_incoming = std::move(fixed_incoming);
  return b;
}

NodeBehavior NodeBehavior::pick() {
  NodeBehavior b;
  b.kind = BehaviorKind::kPick;
  return b;
}

NodeBehavior NodeBehavior::multiply(double factor) {
  NodeBehavior b;
  b.kind = BehaviorKind::kMultiply;
  b.factor = factor;
  return b;
}

NodeBehavior NodeBehavior::all_equal() {
  NodeBehavior b;
  b.kind = BehaviorKind::kAllEqual;
  return b;
}

NodeBehavior NodeBehavior::copy() {
  NodeBehavior b;
  b.kind = BehaviorKind::kCopy;
  return b;
}

NodeBehavior NodeBehavior::source(BehaviorKind inner, std::optional<double> rate) {
  NodeBehavior b;
  b.kind = BehaviorKind::kSource;
  b.inner = inner;
  b.rate = rate;
  return b;
}

NodeBehavior NodeBehavior::sink(SinkSense sense) {
  NodeBehavior b;
  b.kind = BehaviorKind::kSink;
  b.sense = sense;
  return b;
}

void FlowNetwork::add_node(NodeId id, NodeBehavior behavior, Metadata metadata) {
  if (node_index_.count(id)) {
    throw Error(ErrorKind::kInvalidNetwork, "duplicate node id '" + id + "'");
  }
  node_index_.emplace(id, nodes_.size());
  nodes_.push_back(Node{std::move(id), std::move(behavior), std::move(metadata)});
}

EdgeId FlowNetwork::add_edge(const NodeId& from, const NodeId& to,
                             std::optional<double> capacity,
                             std::optional<double> fixed_rate, Metadata metadata,
                             EdgeId id) {
  if (id.empty()) id = "e" + std::to_string(edges_.size());
  if (edge_index_.count(id)) {
    throw Error(ErrorKind::kInvalidNetwork, "duplicate edge id '" + id + "'");
  }
  const std::size_t index = edges_.size();
  edge_index_.emplace(id, index);
  out_[from].push_back(index);
  in_[to].push_back(index);
  edges_.push_back(Edge{id, from, to, capacity, fixed_rate, std::move(metadata)});
  return id;
}

const Node* FlowNetwork::find_node(const NodeId& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

Node* FlowNetwork::find_node(const NodeId& id) {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

std::optional<std::size_t> FlowNetwork::edge_index(const EdgeId& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& FlowNetwork::incoming(const NodeId& id) const {
  auto it = in_.find(id);
  return it == in_.end() ? kNoEdges : it->second;
}

const std::vector<std::size_t>& FlowNetwork::outgoing(const NodeId& id) const {
  auto it = out_.find(id);
  return it == out_.end() ? kNoEdges : it->second;
}

double FlowAssignment::flow(const FlowNetwork& net, const EdgeId& id) const {
  auto index = net.edge_index(id);
  if (!index || *index >= flows.size()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown edge '" + id + "'");
  }
  return flows[*index];
}

std::vector<Violation> validate(const FlowNetwork& net) {
  std::vector<Violation> out;
  auto report = [&](const std::string& subject, const std::string& rule,
                    const std::string& message) {
    out.push_back(Violation{subject, rule, message});
  };

  for (const auto& e : net.edges()) {
    if (!net.find_node(e.from) || !net.find_node(e.to)) {
      report(e.id, "dangling edge", "edge endpoint does not exist");
    }
    if (e.from == e.to) report(e.id, "self loop", "edge starts and ends at the same node");
    if (e.capacity && !(*e.capacity >= 0.0 && std::isfinite(*e.capacity))) {
      report(e.id, "negative capacity", "capacity must be finite and >= 0");
    }
    if (e.fixed_rate && !(*e.fixed_rate >= 0.0 && std::isfinite(*e.fixed_rate))) {
      report(e.id, "negative fixed rate", "fixed rate must be finite and >= 0");
    }
  }

  for (const auto& n : net.nodes()) {
    const auto& in = net.incoming(n.id);
    const auto& out_edges = net.outgoing(n.id);
    const auto& b = n.behavior;
    auto is_outgoing = [&](const EdgeId& id) {
      auto idx = net.edge_index(id);
      return idx && net.edges()[*idx].from == n.id;
    };
    auto is_incoming = [&](const EdgeId& id) {
      auto idx = net.edge_index(id);
      return idx && net.edges()[*idx].to == n.id;
    };
    for (const auto& [id, cap] : b.outgoing_capacities) {
      if (!is_outgoing(id)) report(n.id, "capacity key", "'" + id + "' is not an outgoing edge");
      if (!(cap >= 0.0)) report(n.id, "negative capacity", "capacity on '" + id + "' < 0");
    }
    for (const auto& [id, rate] : b.fixed_incoming) {
      if (!is_incoming(id)) report(n.id, "fixed-rate key", "'" + id + "' is not an incoming edge");
      if (!(rate >= 0.0)) report(n.id, "negative fixed rate", "fixed rate on '" + id + "' < 0");
    }
    switch (b.kind) {
      case BehaviorKind::kMultiply:
        if (in.size() != 1 || out_edges.size() != 1) {
          report(n.id, "multiply arity", "multiply nodes need exactly one incoming and one outgoing edge");
        }
        if (!(b.factor > 0.0) || !std::isfinite(b.factor)) {
          report(n.id, "multiply factor", "factor must be a positive real");
        }
        break;
      case BehaviorKind::kSink:
        if (!out_edges.empty()) report(n.id, "sink has outgoing", "sink nodes have no outgoing edges");
        break;
      case BehaviorKind::kPick:
        if (out_edges.empty()) report(n.id, "pick without outgoing", "pick nodes need an outgoing edge");
        break;
      case BehaviorKind::kSource:
        if (b.inner != BehaviorKind::kSplit && b.inner != BehaviorKind::kPick) {
          report(n.id, "source inner", "sources wrap split or pick behavior");
        }
        if (b.inner == BehaviorKind::kPick && out_edges.empty()) {
          report(n.id, "pick without outgoing", "pick sources need an outgoing edge");
        }
        for (std::size_t e : in) {
          if (!net.edges()[e].fixed_rate) {
            report(n.id, "source has incoming",
                   "only constant-rate feeds may enter a source ('" + net.edges()[e].id + "')");
          }
        }
        if (b.rate && !(*b.rate >= 0.0)) report(n.id, "negative rate", "source rate must be >= 0");
        break;
      case BehaviorKind::kSplit:
      case BehaviorKind::kAllEqual:
      case BehaviorKind::kCopy:
        break;
    }
  }
  return out;
}

Evaluation evaluate(const FlowNetwork& net, const Inputs& inputs,
                    const NodeId& objective_sink) {
  milp::CompiledNetwork compiled = milp::compile_network(net, objective_sink, inputs);
  milp::SimplifiedProgram reduced = milp::simplify(compiled.program);
  solver::Solution sol = solver::solve_mip(reduced.program);
  if (sol.status == solver::Status::kInfeasible) {
    throw Error(ErrorKind::kInfeasible, "no flow assignment satisfies the network");
  }
  if (sol.status == solver::Status::kUnbounded) {
    throw Error(ErrorKind::kUnbounded, "objective sink inflow is unbounded");
  }
  std::vector<double> full = reduced.expand(sol.values);
  Evaluation ev;
  ev.assignment.flows.resize(net.edges().size());
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    ev.assignment.flows[e] = std::max(0.0, full[compiled.edge_var[e]]);
  }
  ev.objective = sol.objective;
  return ev;
}

double behavior_violation(const FlowNetwork& net, const FlowAssignment& a,
                          const Inputs& inputs) {
  double worst = 0.0;
  auto note = [&](double v) { worst = std::max(worst, v); };
  const auto& edges = net.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    note(-a.flows[e]);
    if (edges[e].capacity) note(a.flows[e] - *edges[e].capacity);
    if (edges[e].fixed_rate) note(std::fabs(a.flows[e] - *edges[e].fixed_rate));
  }
  for (const auto& n : net.nodes()) {
    const auto& in = net.incoming(n.id);
    const auto& out = net.outgoing(n.id);
    const auto& b = n.behavior;
    const double fin = sum_flows(in, a);
    const double fout = sum_flows(out, a);
    for (const auto& [id, cap] : b.outgoing_capacities) note(a.flow(net, id) - cap);
    for (const auto& [id, rate] : b.fixed_incoming) note(std::fabs(a.flow(net, id) - rate));
    auto at_most_one = [&] {
      int positive = 0;
      for (std::size_t e : out) positive += a.flows[e] > kFlowTol ? 1 : 0;
      // Two carrying edges is a structural violation, not a rounding error.
      if (positive > 1) note(std::numeric_limits<double>::infinity());
    };
    switch (b.kind) {
      case BehaviorKind::kSplit:
        note(std::fabs(fin - fout));
        break;
      case BehaviorKind::kPick:
        note(std::fabs(fin - fout));
        at_most_one();
        break;
      case BehaviorKind::kMultiply:
        if (in.size() == 1 && out.size() == 1) {
          note(std::fabs(a.flows[out[0]] - b.factor * a.flows[in[0]]));
        }
        break;
      case BehaviorKind::kAllEqual: {
        std::vector<double> vals;
        for (std::size_t e : in) vals.push_back(a.flows[e]);
        for (std::size_t e : out) vals.push_back(a.flows[e]);
        if (!vals.empty()) {
          auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
          note(*hi - *lo);
        }
        break;
      }
      case BehaviorKind::kCopy:
        for (std::size_t e : out) note(std::fabs(a.flows[e] - fin));
        break;
      case BehaviorKind::kSource: {
        std::optional<double> rate = b.rate;
        if (auto it = inputs.find(n.id); it != inputs.end()) rate = it->second;
        if (rate) note(std::fabs(fout - fin - *rate));
        if (b.inner == BehaviorKind::kPick) at_most_one();
        break;
      }
      case BehaviorKind::kSink:
        break;
    }
  }
  return worst;
}

nlohmann::json to_json(const FlowNetwork& net) {
  using nlohmann::json;
  json nodes = json::array();
  for (const auto& n : net.nodes()) {
    const auto& b = n.behavior;
    json params = json::object();
    if (!b.outgoing_capacities.empty()) params["outgoing_capacities"] = b.outgoing_capacities;
    if (!b.fixed_incoming.empty()) params["fixed_incoming"] = b.fixed_incoming;
    switch (b.kind) {
      case BehaviorKind::kMultiply:
        params["factor"] = b.factor;
        break;
      case BehaviorKind::kSource:
        params["inner"] = to_string(b.inner);
        if (b.rate) params["rate"] = *b.rate;
        break;
      case BehaviorKind::kSink:
        params["sense"] = b.sense == SinkSense::kMaximize ? "maximize" : "minimize";
        break;
      default:
        break;
    }
    nodes.push_back(json{{"id", n.id},
                         {"behavior", to_string(b.kind)},
                         {"params", params},
                         {"metadata", n.metadata}});
  }
  json edges = json::array();
  for (const auto& e : net.edges()) {
    json j{{"id", e.id}, {"from", e.from}, {"to", e.to}, {"metadata", e.metadata}};
    if (e.capacity) j["capacity"] = *e.capacity;
    if (e.fixed_rate) j["fixed_rate"] = *e.fixed_rate;
    edges.push_back(std::move(j));
  }
  return json{{"nodes", nodes}, {"edges", edges}};
}

FlowNetwork network_from_json(const nlohmann::json& doc) {
  FlowNetwork net;
  try {
    for (const auto& jn : doc.at("nodes")) {
      NodeBehavior b;
      b.kind = kind_from_string(jn.at("behavior").get<std::string>());
      const nlohmann::json params = jn.value("params", nlohmann::json::object());
      if (params.contains("outgoing_capacities")) {
        b.outgoing_capacities = params["outgoing_capacities"].get<std::map<EdgeId, double>>();
      }
      if (params.contains("fixed_incoming")) {
        b.fixed_incoming = params["fixed_incoming"].get<std::map<EdgeId, double>>();
      }
      if (b.kind == BehaviorKind::kMultiply) b.factor = params.at("factor").get<double>();
      if (b.kind == BehaviorKind::kSource) {
        b.inner = kind_from_string(params.value("inner", std::string("split")));
        if (params.contains("rate")) b.rate = params["rate"].get<double>();
      }
      if (b.kind == BehaviorKind::kSink) {
        const std::string sense = params.value("sense", std::string("maximize"));
        if (sense != "maximize" && sense != "minimize") {
          throw Error(ErrorKind::kParse, "sink sense must be maximize or minimize");
        }
        b.sense = sense == "maximize" ? SinkSense::kMaximize : SinkSense::kMinimize;
      }
      net.add_node(jn.at("id").get<std::string>(), std::move(b),
                   jn.value("metadata", Metadata{}));
    }
    for (const auto& je : doc.at("edges")) {
      std::optional<double> cap, rate;
      if (je.contains("capacity")) cap = je["capacity"].get<double>();
      if (je.contains("fixed_rate")) rate = je["fixed_rate"].get<double>();
      net.add_edge(je.at("from").get<std::string>(), je.at("to").get<std::string>(), cap,
                   rate, je.value("metadata", Metadata{}), je.value("id", std::string()));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::kParse, std::string("network JSON: ") + ex.what());
  }
  return net;
}

}  // namespace xplain::dsl
