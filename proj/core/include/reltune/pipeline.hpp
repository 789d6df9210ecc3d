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

#pragma once
// JSON-configured experiment pipeline behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reltune/gnn_train.hpp"
#include "reltune/hbo.hpp"
#include "reltune/simbench.hpp"

namespace reltune {

struct ExperimentConfig {
  WorkloadKind workload_kind = WorkloadKind::kRwBalanced;
  std::size_t n_params = 12;
  std::uint64_t workload_seed = 7;
  std::size_t n_samples = 5000;
  double noise_std = 0.02;

  std::string embeddings_path;  // empty: planted fixture
  std::size_t d_emb = 32;
  std::uint64_t embeddings_seed = 11;
  std::string dataset_path;  // empty: <output_dir>/dataset.csv

  double tau = 0.75;
  std::vector<double> sweep_taus{0.65, 0.70, 0.75, 0.80, 0.85};
  std::uint64_t louvain_seed = 1;

  TrainConfig train;
  HboConfig hbo;
  std::size_t validate_k = 30;

  std::vector<std::pair<std::size_t, std::size_t>> heatmap_pairs;  // empty: one planted, one independent
  std::size_t heatmap_grid = 21;

  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::string output_dir = "reltune_out";
  std::vector<std::string> stages;
};

/// Stage names in dependency order.
const std::vector<std::string>& pipeline_stages();

/// Thrown for unusable configurations; what() joins the diagnostics.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

std::string default_config_json();

/// Diagnostics of the form "<field>: <problem>"; empty when the config is
/// usable. A manifest written by run_pipeline is accepted as a config.
std::vector<std::string> validate_config(const std::string& json_text);

/// Throws ConfigError when validate_config reports anything.
ExperimentConfig parse_config(const std::string& json_text);

/// Canonical JSON (all fields, fixed order) used for hashing and manifests.
std::string config_to_json(const ExperimentConfig& cfg);

struct RunOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;  // replaces the seed list
  std::optional<std::vector<std::string>> stages;
};

/// Runs one stage (or `all`, in dependency order). Returns 0 on success, 1 for
/// configuration errors (nothing written) and 2 for stage failures.
int run_pipeline(const std::filesystem::path& config_path, const std::string& subcommand, const RunOptions& opts,
                 std::ostream& out, std::ostream& err);

}  // namespace reltune
