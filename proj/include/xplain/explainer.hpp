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

#ifndef XPLAIN_EXPLAINER_HPP_
#define XPLAIN_EXPLAINER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplain/flow_dsl.hpp"
#include "xplain/region.hpp"
#include "xplain/scenario.hpp"

namespace xplain::explain {

// An edge "sends flow" when its flow exceeds this.
inline constexpr double kFlowEps = 1e-9;

struct EdgeScore {
  std::string id;
  std::string from;
  std::string to;
  std::size_t both = 0;
  std::size_t benchmark_only = 0;
  std::size_t heuristic_only = 0;
  std::size_t neither = 0;
  double mean = 0.0;            // (benchmark_only - heuristic_only) / samples
  double mean_abs_delta = 0.0;  // mean |benchmark flow - heuristic flow|
};

struct Heatmap {
  std::string subspace;  // free-form reference to the sampled region
  std::string heuristic;
  std::string benchmark;
  std::size_t samples = 0;
  std::vector<EdgeScore> edges;  // network edge order
};

using FlowFn = std::function<dsl::FlowAssignment(const std::vector<double>&)>;

// Scores every edge over the given points.
Heatmap score_points(const dsl::FlowNetwork& net, const FlowFn& heuristic,
                     const FlowFn& benchmark, const std::vector<std::vector<double>>& points,
                     unsigned threads = 1);

// Scores every edge over n uniform samples of `region` within `space`.
// Throws SamplingFailure like the significance check.
Heatmap score_edges(const dsl::FlowNetwork& net, const FlowFn& heuristic, const FlowFn& benchmark,
                    const Polytope& region, const Box& space, std::size_t n, std::uint64_t seed,
                    unsigned threads = 1);

// Network both models of a scenario project onto. Bin networks get one bin
// per ball so overflow placements stay visible. The FlowFn keeps references
// to `s` and `net`.
dsl::FlowNetwork scenario_network(const Scenario& s);
FlowFn scenario_flows(const Scenario& s, heur::Model model, const dsl::FlowNetwork& net);

// Graphviz digraph: red edges where only the heuristic sends flow, blue
// where only the benchmark does, gray when the mean is zero.
std::string emit_dot(const Heatmap& hm, const dsl::FlowNetwork& net);

nlohmann::json to_json(const Heatmap& hm);
Heatmap heatmap_from_json(const nlohmann::json& doc);

}  // namespace xplain::explain

#endif  // XPLAIN_EXPLAINER_HPP_
