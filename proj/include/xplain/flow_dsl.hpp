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

#ifndef XPLAIN_FLOW_DSL_HPP_
#define XPLAIN_FLOW_DSL_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace xplain::dsl {

using NodeId = std::string;
using EdgeId = std::string;
using Metadata = std::map<std::string, std::string>;

// Absolute tolerance for constraint satisfaction.
inline constexpr double kFeasTol = 1e-6;
// An edge "carries flow" when its value exceeds this.
inline constexpr double kFlowTol = 1e-9;

enum class BehaviorKind { kSplit, kPick, kMultiply, kAllEqual, kCopy, kSource, kSink };
enum class SinkSense { kMaximize, kMinimize };

const char* to_string(BehaviorKind kind);

// The constraint set a node imposes on the flows of its incident edges.
//
//   split      inflow == outflow; optional per-outgoing-edge capacities and
//              constant-rate incoming edges
//   pick       inflow == outflow, at most one outgoing edge carries flow
//   multiply   out == factor * in (exactly one edge each way)
//   all_equal  every incident edge carries the same flow
//   copy       every outgoing edge carries the total inflow
//   source     an input: outflow == inflow + rate, split or pick inside
//   sink       absorbs flow; the objective sink's inflow is optimized
struct NodeBehavior {
  BehaviorKind kind = BehaviorKind::kSplit;
  std::map<EdgeId, double> outgoing_capacities;  // split, source
  std::map<EdgeId, double> fixed_incoming;       // split
  double factor = 1.0;                           // multiply
  BehaviorKind inner = BehaviorKind::kSplit;     // source: split or pick
  std::optional<double> rate;                    // source: default input
  SinkSense sense = SinkSense::kMaximize;        // sink

  static NodeBehavior split(std::map<EdgeId, double> outgoing_capacities = {},
                            std::map<EdgeId, double> fixed_incoming = {});
  static NodeBehavior pick();
  static NodeBehavior multiply(double factor);
  static NodeBehavior all_equal();
  static NodeBehavior copy();
  static NodeBehavior source(BehaviorKind inner = BehaviorKind::kSplit,
                             std::optional<double> rate = std::nullopt);
  static NodeBehavior sink(SinkSense sense = SinkSense::kMaximize);

  bool operator==(const NodeBehavior&) const = default;
};

struct Node {
  NodeId id;
  NodeBehavior behavior;
  Metadata metadata;

  bool operator==(const Node&) const = default;
};

struct Edge {
  EdgeId id;
  NodeId from;
  NodeId to;
  std::optional<double> capacity;
  std::optional<double> fixed_rate;
  Metadata metadata;

  bool operator==(const Edge&) const = default;
};

// A directed graph of behavior-typed nodes. Nodes and edges keep insertion
// order, which fixes variable numbering in compiled programs.
class FlowNetwork {
 public:
  // Throws InvalidNetwork on duplicate ids.
  void add_node(NodeId id, NodeBehavior behavior, Metadata metadata = {});
  // Returns the edge id ("e<index>" when none is given). Endpoints are not
  // checked here; validate() reports dangling edges.
  EdgeId add_edge(const NodeId& from, const NodeId& to,
                  std::optional<double> capacity = std::nullopt,
                  std::optional<double> fixed_rate = std::nullopt,
                  Metadata metadata = {}, EdgeId id = {});

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Node* find_node(const NodeId& id) const;
  Node* find_node(const NodeId& id);
  std::optional<std::size_t> edge_index(const EdgeId& id) const;

  // Edge indices in insertion order.
  const std::vector<std::size_t>& incoming(const NodeId& id) const;
  const std::vector<std::size_t>& outgoing(const NodeId& id) const;

  bool operator==(const FlowNetwork& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeId, std::size_t> node_index_;
  std::unordered_map<EdgeId, std::size_t> edge_index_;
  std::unordered_map<NodeId, std::vector<std::size_t>> in_;
  std::unordered_map<NodeId, std::vector<std::size_t>> out_;
};

// Per-edge flow values aligned with FlowNetwork::edges().
struct FlowAssignment {
  std::vector<double> flows;

  double flow(const FlowNetwork& net, const EdgeId& id) const;
};

struct Violation {
  std::string subject;  // node or edge id
  std::string rule;     // short machine-readable rule name
  std::string message;
};

std::vector<Violation> validate(const FlowNetwork& net);

// Source inputs keyed by source node id.
using Inputs = std::map<NodeId, double>;

struct Evaluation {
  double objective = 0.0;
  FlowAssignment assignment;
};

// Compiles, simplifies and solves the network with the objective sink's
// inflow optimized in its sense. Sources missing from `inputs` use their
// configured rate; a source with neither is a free decision variable.
// Throws InvalidNetwork, Infeasible or Unbounded.
Evaluation evaluate(const FlowNetwork& net, const Inputs& inputs,
                    const NodeId& objective_sink);

// Behavior constraint check for an assignment (used by tests and the
// explainer's projections). Returns the worst violation.
double behavior_violation(const FlowNetwork& net, const FlowAssignment& a,
                          const Inputs& inputs = {});

nlohmann::json to_json(const FlowNetwork& net);
FlowNetwork network_from_json(const nlohmann::json& doc);

}  // namespace xplain::dsl

#endif  // XPLAIN_FLOW_DSL_HPP_
