// Copyright 2026 The reltune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// reltune command-line entry point.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reltune/csv.hpp"
#include "reltune/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> stages;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relation-aware latent-space configuration tuning"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<std::string> stage_names = reltune::pipeline_stages();
  stage_names.push_back("all");
  for (const auto& name : stage_names) {
    auto* sub = app.add_subcommand(name, name == "all" ? "Run every selected stage in dependency order"
                                                       : "Run the " + name + " stage");
    sub->add_option("--config", flags.config, "Experiment config (JSON) or a run manifest")->required();
    sub->add_option("--out", flags.out, "Output directory (overrides output_dir)");
    sub->add_option("--seed", flags.seed, "Use this single seed instead of the config's seed list");
    sub->add_option("--stages", flags.stages, "Comma-separated stage list (with `all`)");
  }

  auto* defaults = app.add_subcommand("default-config", "Print the default configuration");
  std::string check_path;
  auto* check = app.add_subcommand("check-config", "Validate a configuration and list diagnostics");
  check->add_option("config", check_path, "Config path")->required();

  CLI11_PARSE(app, argc, argv);

  if (defaults->parsed()) {
    std::cout << reltune::default_config_json();
    return 0;
  }
  if (check->parsed()) {
    std::vector<std::string> diags;
    try {
      diags = reltune::validate_config(reltune::csv::read_text(check_path));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    for (const auto& d : diags) std::cout << d << "\n";
    return diags.empty() ? 0 : 1;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  reltune::RunOptions opts;
  opts.out = flags.out;
  opts.seed = flags.seed;
  if (flags.stages) opts.stages = split_list(*flags.stages);
  return reltune::run_pipeline(flags.config, sub, opts, std::cout, std::cerr);
}
