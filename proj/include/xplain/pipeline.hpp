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


#ifndef XPLAIN_PIPELINE_HPP_
#define XPLAIN_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xplain/analyzer.hpp"
#include "xplain/generalizer.hpp"
#include "xplain/heuristics.hpp"
#include "xplain/subspace_gen.hpp"

namespace xplain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInternal = 2;
inline constexpr int kExitNotFound = 3;

// Everything a command needs. Relative paths in the config file resolve
// against the file's directory. The seed always comes from the command line.
struct PipelineConfig {
  std::string scenario;
  std::optional<heur::Model> heuristic;  // override the scenario's pair
  std::optional<heur::Model> benchmark;
  std::optional<heur::GapMode> gap_mode;
  std::vector<double> inputs;  // run-heuristic point; scenario default if empty

  std::size_t budget = 2000;
  std::optional<double> min_gap;
  analysis::Strategy strategy = analysis::Strategy::kAuto;

  subspace::GrowParams grow;
  subspace::TreeParams tree;
  std::size_t max_subspaces = 8;
  std::size_t max_attempts = 16;
  std::size_t revisit_cap = 3;

  // Shell and pair sample counts come from dkw_samples(epsilon, delta).
  double epsilon = 0.1;
  double delta = 0.05;
  double alpha = 0.05;
  double margin = 0.025;

  std::size_t explainer_samples = 3000;
  std::string subspace_file;
  std::size_t subspace_index = 0;

  std::string predicate;
  general::InstanceFamily family;
  std::size_t probe_budget = 2000;
  heur::GapMode generalize_gap_mode = heur::GapMode::kAbsolute;

  std::string milp;

  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = ".";

  // Throws InvalidArgument for out-of-range values.
  void check() const;
};

// Throws Parse on unknown keys or wrong types.
PipelineConfig config_from_json(const nlohmann::json& doc, const std::string& base_dir);
PipelineConfig load_config(const std::string& path);

// Each command writes its files under cfg.out_dir, a short summary to `out`
// and progress to `log`, and returns the exit code. Errors propagate as
// exceptions; run_command maps them to exit codes.
int cmd_run_heuristic(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_analyze(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_subspaces(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_explain(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_generalize(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);
int cmd_encode_milp(const PipelineConfig& cfg, std::ostream& out, std::ostream& log);

const std::vector<std::string>& command_names();
int run_command(const std::string& name, const PipelineConfig& cfg, std::ostream& out,
                std::ostream& log);

// Minimum gap used when the config leaves it out: one bin for absolute bin
// packing gaps, 5% for relative gaps, and 5% of the summed demand upper
// bounds for absolute TE gaps.
double default_min_gap(const Scenario& s, heur::GapMode mode);
heur::GapMode default_gap_mode(const Scenario& s);

// CSV with one row per sample: labels..., gap.
std::string samples_csv(const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& xs,
                        const std::vector<double>& gaps);

}  // namespace xplain::cli

#endif  // XPLAIN_PIPELINE_HPP_
