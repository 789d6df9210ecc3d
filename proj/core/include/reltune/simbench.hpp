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
// Synthetic DBMS performance model with planted parameter interactions.
//
// With u the min-max normalized configuration:
//   tps(u)     = base_tps * (1 + sum_i m_i(u_i) + sum_(i,j) g (2u_i - 1)(1 - 2u_j))
//   latency(u) = base_latency * base_tps / tps(u) + sum_i p_i u_i
// Main effects m_i are shifted so m_i(0.5) = 0, hence the all-midpoint
// configuration yields exactly base_tps. Raising u_i helps when u_j is low and
// hurts when u_j is high for every planted pair (i, j).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reltune/parameter_space.hpp"
#include "reltune/relgraph.hpp"

namespace reltune {

enum class WorkloadKind { kRwBalanced, kReadHeavy, kScanHeavy, kAnalytic };

const char* to_string(WorkloadKind kind);
WorkloadKind parse_workload_kind(const std::string& s);

enum class MainShape { kQuadratic, kRamp, kLinear };

const char* to_string(MainShape shape);
MainShape parse_main_shape(const std::string& s);

struct MainEffect {
  MainShape shape = MainShape::kLinear;
  double weight = 0.0;
  double center = 0.5;  // peak for quadratic, knee for ramp; unused for linear

  /// Raw response before centring: quadratic w(1 - 4(u - c)^2), ramp
  /// w min(u / c, 1), linear w u.
  double raw(double u) const;
  double operator()(double u) const { return raw(u) - raw(0.5); }
};

struct Interaction {
  std::size_t i = 0;
  std::size_t j = 0;
  double gain = 0.0;

  double operator()(double ui, double uj) const { return gain * (2.0 * ui - 1.0) * (1.0 - 2.0 * uj); }
};

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kRwBalanced;
  std::uint64_t seed = 0;
  ParameterSpace space;
  std::vector<MainEffect> main_effects;  // one per parameter
  std::vector<Interaction> interactions;
  std::vector<std::size_t> inert;  // parameters with near-zero effect
  std::vector<double> latency_penalty;  // one per parameter, >= 0
  double base_tps = 1000.0;
  double base_latency = 10.0;
  double noise_std = 0.02;

  /// Throws std::invalid_argument when sizes or indices are inconsistent.
  void validate() const;
};

/// ceil(n/4) disjoint interacting pairs, min(ceil(n/4), n - 2 ceil(n/4)) inert
/// parameters, the rest main-effect only. Deterministic in (kind, n, seed).
/// Throws std::invalid_argument for n_params < 2.
WorkloadSpec make_workload(WorkloadKind kind, std::size_t n_params, std::uint64_t seed);

/// Planted pairs as (min, max) index pairs in ascending order.
std::vector<std::pair<std::size_t, std::size_t>> planted_edges(const WorkloadSpec& w);

struct Measurement {
  double tps = 0.0;
  double latency = 0.0;
};

/// Throws std::invalid_argument for an out-of-bounds configuration. With
/// `noisy`, tps is multiplied by (1 + noise_std N(0,1)) drawn from `seed` and
/// kept above 0.1% of base_tps; latency follows the noisy tps.
Measurement evaluate_config(const WorkloadSpec& w, std::span<const double> x, bool noisy = false,
                            std::uint64_t seed = 0);

/// All-midpoint configuration (tps = base_tps without noise).
std::vector<double> reference_config(const WorkloadSpec& w);

/// Latin-hypercube sample in normalized space, mapped through
/// denormalize_config, evaluated with noise.
std::vector<ConfigSample> generate_dataset(const WorkloadSpec& w, std::size_t n_samples, std::uint64_t seed);

using ScoreFn = std::function<double(const Measurement&)>;

struct OracleResult {
  std::vector<double> x;
  double tps = 0.0;
  double latency = 0.0;
  double score = 0.0;
};

/// Noise-free random search over `budget` samples, then a compass-search
/// polish of the best sample limited to budget / 10 further evaluations.
/// `score` defaults to tps. Throws std::invalid_argument for budget 0.
OracleResult oracle_best(const WorkloadSpec& w, std::size_t budget, std::uint64_t seed, const ScoreFn& score = {});

/// Embeddings whose cosine similarity is about 0.9 within planted pairs and
/// below 0.5 elsewhere. Needs d_emb >= number of groups (pairs plus unpaired
/// parameters); throws std::invalid_argument otherwise.
EmbeddingSet planted_embeddings(const WorkloadSpec& w, std::size_t d_emb, std::uint64_t seed);

/// Fixture with named subsystems of eight parameters each, organized as two
/// halves of two pairs. Cosine similarity is about 0.92 within a pair, 0.78
/// within a half and 0.68 across halves of one subsystem; different
/// subsystems are orthogonal up to a small perturbation.
EmbeddingSet subsystem_embeddings(std::size_t subsystems, std::uint64_t seed);

/// Noise-free tps on a grid x grid sweep of parameters i (rows) and j
/// (columns) from lower to upper bound, others taken from `fixed`.
Eigen::MatrixXd heatmap_slice(const WorkloadSpec& w, std::size_t i, std::size_t j, std::size_t grid,
                              std::span<const double> fixed);

/// Long-format CSV `<name_i>,<name_j>,tps`.
std::string heatmap_csv(const WorkloadSpec& w, std::size_t i, std::size_t j, const Eigen::MatrixXd& tps);

inline constexpr int kWorkloadVersion = 1;

std::string workload_to_json(const WorkloadSpec& w);
WorkloadSpec workload_from_json(const std::string& text);
void save_workload(const WorkloadSpec& w, const std::filesystem::path& path);
WorkloadSpec load_workload(const std::filesystem::path& path);

}  // namespace reltune
