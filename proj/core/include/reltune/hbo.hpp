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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reltune/gnn.hpp"
#include "reltune/gp.hpp"
#include "reltune/parameter_space.hpp"

namespace reltune {

struct HboConfig {
  double alpha = 0.5;                 // latency weight in f_metric
  double gamma = 1.0;                 // affinity weight in the hybrid score
  std::optional<double> sigma_rbf;    // unset: median pairwise distance of Z_good
  double good_quantile = 0.2;
  std::size_t iterations = 300;
  std::uint64_t seed = 1;

  std::size_t warm_start = 16;
  std::size_t refit_every = 10;
  std::size_t candidates = 1024;
  std::size_t refine_starts = 8;
  std::size_t refine_steps = 50;
  double refine_step = 0.01;  // fraction of the box width per dimension

  /// Throws std::invalid_argument for out-of-range fields.
  void validate() const;
};

struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  std::size_t dimension() const { return static_cast<std::size_t>(lower.size()); }
  double diagonal() const { return (upper - lower).norm(); }
  bool contains(const Eigen::VectorXd& z) const;
  /// Per-dimension bounds of the rows of Z.
  static SearchBox bounding(const Eigen::MatrixXd& Z);
};

/// Standardized improvement u = (mu - f_best) / sigma plugged into the usual
/// closed form; max(0, mu - f_best) when sigma < 1e-12.
double expected_improvement(double mu, double sigma, double f_best);

/// y_tps - alpha * y_latency on z-scored metrics.
double f_metric(const Eigen::Vector2d& y_norm, double alpha);
double f_metric(const Model& model, const Eigen::VectorXd& z, double alpha);

/// Mean RBF similarity of z to the rows of Z_good. Throws std::invalid_argument
/// for an empty set or sigma <= 0.
double f_affinity(const Eigen::VectorXd& z, const Eigen::MatrixXd& Z_good, double sigma);

/// Median pairwise Euclidean distance between rows (1.0 if it is zero).
/// Throws std::invalid_argument for fewer than two rows.
double median_bandwidth(const Eigen::MatrixXd& Z_good);

/// Encodes every sample (one row per sample).
Eigen::MatrixXd encode_dataset(const Model& model, const std::vector<ConfigSample>& data);

/// Indices of samples whose measured f_metric is in the top `quantile`
/// fraction (at least one sample); ties with the cutoff are all kept.
std::vector<std::size_t> good_indices(const Model& model, const std::vector<ConfigSample>& data, double quantile,
                                      double alpha);

/// Latent vectors of the good samples, one per row.
Eigen::MatrixXd select_good_set(const Model& model, const std::vector<ConfigSample>& data, double quantile,
                                double alpha);

double hybrid_score(const Model& model, const Eigen::VectorXd& z, const Eigen::MatrixXd& Z_good,
                    const HboConfig& cfg, double sigma);

/// Approximate EI maximizer over the box: seeded uniform candidates, the best
/// few refined by hill climbing. Each refinement step tries +-refine_step of
/// the box width on one coordinate (cycling through them) and keeps the better
/// point if EI improves; a start stops after a full idle cycle.
Eigen::VectorXd propose_next(const GpState& gp, const SearchBox& box, double f_best, std::uint64_t seed,
                             const HboConfig& cfg = {});

struct TuningStep {
  Eigen::VectorXd z;
  double metric = 0.0;
  double affinity = 0.0;
  double hybrid = 0.0;
  double gp_mu = 0.0;
  double gp_sigma = 0.0;
  double best_so_far = 0.0;
};

struct TuningHistory {
  std::vector<TuningStep> warm_start;  // GP initialization, gp_mu/gp_sigma are NaN
  std::vector<TuningStep> steps;       // one per iteration
  Eigen::VectorXd best_z;
  double best_score = 0.0;
  Eigen::VectorXd best_x_norm;
  std::vector<double> best_config;  // native units
  double sigma_rbf = 0.0;
  std::size_t good_count = 0;
  // Largest predicted f_metric over the encoded dataset. Proposal scores are
  // clipped to it.
  double metric_cap = 0.0;

  std::vector<double> best_curve() const;
};

/// Latent-space BO on the hybrid score. Proposals are scored with the metric
/// head only, clipped to the head's maximum over the encoded dataset.
/// Deterministic given cfg.seed.
TuningHistory hbo_run(const Model& model, const std::vector<ConfigSample>& data, const HboConfig& cfg);

/// hbo_run with gamma = 0.
TuningHistory vbo_run(const Model& model, const std::vector<ConfigSample>& data, const HboConfig& cfg);

/// CSV `iter,hybrid,metric,affinity,gp_mu,gp_sigma,best_so_far`.
std::string history_csv(const TuningHistory& h);

/// JSON object mapping parameter name to value.
std::string config_json(const ParameterSpace& space, const std::vector<double>& x);

}  // namespace reltune
