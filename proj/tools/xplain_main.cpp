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


#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "xplain/error.hpp"
#include "xplain/pipeline.hpp"

int main(int argc, char** argv) {
  namespace cli = xplain::cli;
  CLI::App app{"Adversarial performance-gap analysis of heuristics"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string subspace;
  std::string command;

  for (const std::string& name : cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed")->required();
    sub->add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory (overrides the config)");
    if (name == "explain") {
      sub->add_option("--subspace", subspace, "subspace JSON (overrides the config)");
    }
    sub->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  cli::PipelineConfig cfg;
  try {
    cfg = cli::load_config(config);
  } catch (const xplain::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  cfg.seed = seed;
  cfg.threads = threads;
  if (!out.empty()) cfg.out_dir = out;
  if (!subspace.empty()) cfg.subspace_file = subspace;
  return cli::run_command(command, cfg, std::cout, std::cerr);
}
