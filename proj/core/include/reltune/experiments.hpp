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
// End-to-end experiment helpers that tie the model, the tuner and the
// simulator together: ground-truth scoring, affinity validation, convergence
// curves and the encoder x optimizer ablation.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "reltune/eval.hpp"
#include "reltune/gnn.hpp"
#include "reltune/hbo.hpp"
#include "reltune/simbench.hpp"

namespace reltune {

/// Noise-free z(tps) - alpha z(latency) under the given statistics.
double true_score(const WorkloadSpec& w, const MetricStats& stats, std::span<const double> x, double alpha);

struct AffinityReport {
  double auroc = 0.0;
  double auprc = 0.0;
  std::vector<TrendBin> bins;  // mean measured f_metric per affinity bin
  LabeledScores labeled;       // affinity of the top-k then bottom-k held-out samples
  std::size_t good_count = 0;
  double sigma_rbf = 0.0;
};

/// Seeded 80/20 split. Z_good comes from the training part; the top-k and
/// bottom-k held-out samples by measured f_metric are labeled 1 and 0 and
/// scored by affinity. Throws std::invalid_argument if the held-out part has
/// fewer than 2k samples.
AffinityReport affinity_validation(const Model& model, const std::vector<ConfigSample>& data, std::size_t k,
                                   const HboConfig& cfg, std::uint64_t seed);

/// CSV `affinity,label` of the labeled held-out samples.
std::string affinity_scores_csv(const AffinityReport& r);

/// True score of the incumbent (best hybrid score so far) decoded config:
/// element 0 is the warm-start incumbent, element t the incumbent after
/// iteration t.
std::vector<double> true_score_curve(const WorkloadSpec& w, const Model& model, const TuningHistory& h, double alpha);

struct AblationCell {
  bool rge = true;  // relation-aware (GAT) encoder; off means MLP encoder
  bool hbo = true;  // hybrid score; off means vanilla BO
  double tps = 0.0;
  double latency = 0.0;
  double score = 0.0;  // mean true score
};

/// Mean noise-free metrics of the final configurations of several runs.
AblationCell summarize_runs(bool rge, bool hbo, const WorkloadSpec& w, const MetricStats& stats,
                            const std::vector<TuningHistory>& runs, double alpha);

struct SeedModels {
  std::uint64_t seed = 0;
  Model gat;
  Model mlp;
};

/// Runs HBO and VBO with both encoders for every seed. Cells are ordered
/// (on,on), (on,off), (off,on), (off,off).
std::vector<AblationCell> ablation_grid(const WorkloadSpec& w, const std::vector<ConfigSample>& data,
                                        const std::vector<SeedModels>& models, const HboConfig& cfg);

/// CSV `rge,hbo,tps,latency`.
std::string ablation_csv(const std::vector<AblationCell>& cells);

/// Parallel cap from RELTUNE_THREADS (default 1).
std::size_t thread_cap();

/// Calls fn(i) for i in [0, count) on up to `threads` threads. The first
/// exception (by index) is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace reltune
