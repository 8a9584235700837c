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

#ifndef XPLAIN_HEURISTICS_HPP_
#define XPLAIN_HEURISTICS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xplain/flow_dsl.hpp"
#include "xplain/solver.hpp"

namespace xplain::heur {

// ---------------------------------------------------------------------------
// Traffic engineering
// ---------------------------------------------------------------------------

struct Link {
  std::size_t from = 0;
  std::size_t to = 0;
  double capacity = 0.0;
};

// A path is a sequence of link indices.
using Path = std::vector<std::size_t>;

struct Demand {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::vector<Path> paths;
  std::size_t shortest = 0;  // index into paths
};

struct TeInstance {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  std::vector<Demand> demands;
  double threshold = 0.0;

  // Throws InvalidArgument when a path is not a connected src->dst walk over
  // existing links, a capacity is not positive, or the threshold is negative.
  void check() const;

  std::string demand_label(std::size_t k) const;          // "1~3"
  std::string path_label(std::size_t k, std::size_t p) const;  // "1-2-3"
  std::string link_label(std::size_t l) const;            // "1-2"
};

// Up to k loop-free paths from src to dst in increasing hop count (ties by
// node sequence), Yen's algorithm over unit link weights.
std::vector<Path> k_shortest_paths(const std::vector<std::string>& nodes,
                                   const std::vector<Link>& links, std::size_t src,
                                   std::size_t dst, std::size_t k);

// Fewest hops; first listed wins ties.
std::size_t pick_shortest(const std::vector<Path>& paths);

// ---------------------------------------------------------------------------
// Vector bin packing
// ---------------------------------------------------------------------------

struct VbpInstance {
  std::vector<std::vector<double>> sizes;  // per ball, per dimension
  std::vector<std::vector<double>> bins;   // per bin, per dimension
  // When set, FF opens extra bins (copies of the last bin) instead of failing.
  bool unbounded = false;

  std::size_t dims() const { return bins.empty() ? 0 : bins.front().size(); }
  // Throws InvalidArgument on mismatched dimensions, negative sizes or no bins.
  void check() const;
};

struct FfTrace {
  // [ball][bin] over the bins open when FF finished; residual is per dimension
  // before ball i is considered.
  std::vector<std::vector<std::vector<double>>> residual;
  std::vector<std::vector<bool>> fits;
  std::vector<std::vector<bool>> not_placed;  // every earlier bin rejected the ball
  std::vector<std::vector<bool>> first_fit;   // fits && not_placed
  std::vector<std::size_t> assignment;        // ball -> bin
};

// ---------------------------------------------------------------------------
// Allocations
// ---------------------------------------------------------------------------

struct Allocation {
  // TE: flow per demand per path, unmet per demand.
  std::vector<std::vector<double>> path_flow;
  std::vector<double> unmet;
  // VBP: bin per ball.
  std::vector<std::size_t> bin_of;
  std::size_t bins_used = 0;
  // Total routed (TE) or bins used (VBP).
  double objective = 0.0;
};

Allocation run_dp(const TeInstance& inst, const std::vector<double>& demands);
Allocation optimal_te(const TeInstance& inst, const std::vector<double>& demands);

// Throws Unplaceable when a ball fits nowhere (and, for bounded instances,
// when every configured bin is full).
std::pair<Allocation, FfTrace> run_ff(const VbpInstance& inst);
// Exact minimum via the assignment MILP. Throws Unplaceable when the bounded
// bin set cannot hold the balls.
Allocation optimal_vbp(const VbpInstance& inst, const solver::SolverOptions& opts = {});

// ---------------------------------------------------------------------------
// Gap
// ---------------------------------------------------------------------------

enum class GapMode { kAbsolute, kRelative };
// kBenchmarkMinusHeuristic for maximization problems (TE), the reverse for
// minimization problems (VBP).
enum class Orientation { kBenchmarkMinusHeuristic, kHeuristicMinusBenchmark };

constexpr double kGapDenominatorEps = 1e-9;

double gap_value(double heuristic, double benchmark, Orientation orientation, GapMode mode);

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

double gap(const std::vector<double>& inputs, const ObjectiveFn& heuristic,
           const ObjectiveFn& benchmark, Orientation orientation, GapMode mode);

// ---------------------------------------------------------------------------
// Flow-network views
// ---------------------------------------------------------------------------

enum class Model { kDp, kOptTe, kFf, kOptVbp };

const char* to_string(Model m);
std::optional<Model> model_from_string(const std::string& s);

// Node ids used by the TE and VBP networks.
std::string demand_node(const TeInstance& inst, std::size_t k);
std::string path_node(const TeInstance& inst, std::size_t k, std::size_t p);
std::string link_node(const TeInstance& inst, std::size_t l);
inline constexpr const char* kUnmetSink = "UNMET";
inline constexpr const char* kMetSink = "MET";
std::string ball_node(std::size_t i);
std::string bin_node(std::size_t j);
inline constexpr const char* kOccupancySink = "OCCUPANCY";

// Layered TE network: demand sources (split) feed the unmet sink and their
// path nodes (copy), paths feed link nodes (split, capacity on the outgoing
// edge), links feed the met sink. Demands, when given, become source rates;
// for kDp the pinned demands also get fixed rates on their path edges. The
// objective sink is kUnmetSink (minimized).
dsl::FlowNetwork to_flow_network(const TeInstance& inst, Model model,
                                 const std::vector<double>* demands = nullptr);
// Ball sources (pick, rate = size) feed bin nodes (split, capacity = bin
// size) feeding the occupancy sink. Single-dimension instances only;
// `bins` defaults to the configured bin count.
dsl::FlowNetwork to_flow_network(const VbpInstance& inst, Model model,
                                 std::optional<std::size_t> bins = std::nullopt);

// Maps concrete decisions onto edge flows of the matching network.
dsl::FlowAssignment project_allocation(const TeInstance& inst, const Allocation& alloc,
                                       const dsl::FlowNetwork& net);
dsl::FlowAssignment project_allocation(const VbpInstance& inst, const Allocation& alloc,
                                       const dsl::FlowNetwork& net);

}  // namespace xplain::heur

#endif  // XPLAIN_HEURISTICS_HPP_
