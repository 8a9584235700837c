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

#ifndef XPLAIN_GENERALIZER_HPP_
#define XPLAIN_GENERALIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "xplain/scenario.hpp"
#include "xplain/stats.hpp"

namespace xplain::general {

enum class Trend { kIncreasing, kDecreasing };

struct Predicate {
  Trend kind = Trend::kIncreasing;
  std::string feature;  // registered extractor name
  double alpha = 0.05;

  // Throws InvalidArgument for unknown features or alpha outside (0, 1).
  void check() const;
};

std::string to_string(const Predicate& p);  // "increasing(pinned_shortest_path_length)"
// Parses the form above.
Predicate predicate_from_string(const std::string& text, double alpha = 0.05);

using Extractor = std::function<double(const Scenario&)>;
// Longest shortest path (hops) among demands that can be pinned somewhere in
// the input box; smallest link capacity on any candidate path; ball count;
// bin count; sum of the default ball sizes.
const std::vector<std::pair<std::string, Extractor>>& extractors();
const Extractor& extractor(const std::string& name);

enum class FamilyKind { kTeLine, kTeRandom, kVbpRandom };
const char* to_string(FamilyKind k);
FamilyKind family_kind_from_string(const std::string& s);

struct InstanceFamily {
  FamilyKind kind = FamilyKind::kTeLine;
  std::size_t size_min = 2;  // te-line: hops; te-random: nodes; vbp-random: balls
  std::size_t size_max = 9;
  double capacity_min = 80.0;  // links; bins for vbp-random
  double capacity_max = 120.0;
  double threshold_min = 40.0;
  double threshold_max = 60.0;
  std::size_t bins_min = 2;  // vbp-random
  std::size_t bins_max = 4;
  std::size_t count = 8;

  void check() const;
};

// te-line with hop count L: a line a0 -> ... -> aL carrying a single-hop
// demand per link plus the a0 ~> aL demand, which also has an (L + 1)-hop
// detour whose links hold only the threshold. Sizes are spread evenly over
// the range in increasing order; capacities and thresholds are drawn per
// instance. te-random: a random connected digraph with random demands;
// vbp-random: random ball and bin counts.
std::vector<Scenario> generate_instances(const InstanceFamily& fam, std::uint64_t seed);
nlohmann::json instance_to_json(const Scenario& s);

using GapProbe = std::function<double(const Scenario&, std::uint64_t)>;

// Largest gap the analyzer finds within `budget` evaluations (0 when every
// evaluation is excluded).
GapProbe analyzer_probe(heur::GapMode mode, std::size_t budget = 2000, unsigned threads = 1);

struct Observation {
  std::string instance;
  double feature = 0.0;
  double gap = 0.0;
};

struct TrendFinding {
  Predicate predicate;
  double tau = 0.0;
  double p = 1.0;
  std::string method;
  bool holds = false;
  std::vector<Observation> observations;
};

// Kendall trend between feature and probed gap, one-sided in the predicate's
// direction. Throws TooFewInstances below five instances.
TrendFinding evaluate_predicate(const Predicate& pred, const std::vector<Scenario>& instances,
                                const GapProbe& probe, std::uint64_t seed, unsigned threads = 1);

// Same test on precomputed observations.
TrendFinding evaluate_observations(const Predicate& pred, std::vector<Observation> obs);

nlohmann::json to_json(const TrendFinding& f);

}  // namespace xplain::general

#endif  // XPLAIN_GENERALIZER_HPP_
