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

#ifndef XPLAIN_SCENARIO_HPP_
#define XPLAIN_SCENARIO_HPP_

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplain/heuristics.hpp"

namespace xplain {

enum class ProblemKind { kTe, kVbp };

// A problem instance plus the input box the analysis explores. TE inputs are
// the demand volumes; VBP inputs are the ball sizes (ball-major when D > 1).
struct Scenario {
  std::string name;
  ProblemKind kind = ProblemKind::kTe;
  heur::TeInstance te;
  heur::VbpInstance vbp;
  std::vector<std::string> labels;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> inputs;  // default point; may be empty
  heur::Model heuristic = heur::Model::kDp;
  heur::Model benchmark = heur::Model::kOptTe;

  std::size_t dims() const { return lo.size(); }
  heur::Orientation orientation() const {
    return kind == ProblemKind::kTe ? heur::Orientation::kBenchmarkMinusHeuristic
                                    : heur::Orientation::kHeuristicMinusBenchmark;
  }
};

// Throws Parse on malformed documents and InvalidArgument on invalid
// instances.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// Instance with the point's values substituted.
heur::VbpInstance vbp_at(const Scenario& s, const std::vector<double>& x);

// Allocation of `model` at point x. VBP evaluation opens extra bins when the
// configured ones run out so that every point of the box has a value.
heur::Allocation allocate(const Scenario& s, heur::Model model, const std::vector<double>& x);
double objective(const Scenario& s, heur::Model model, const std::vector<double>& x);

using GapFn = std::function<double(const std::vector<double>&)>;
GapFn make_gap_fn(const Scenario& s, heur::GapMode mode);

nlohmann::json read_json_file(const std::string& path);

}  // namespace xplain

#endif  // XPLAIN_SCENARIO_HPP_
