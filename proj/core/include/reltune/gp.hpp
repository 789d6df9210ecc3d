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

#include <vector>

#include <Eigen/Dense>

namespace reltune {

/// Squared-exponential kernel k(x, x') = sf2 * exp(-|x - x'|^2 / (2 l^2)).
struct KernelParams {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 0.0;
};

/// Hyperparameter selection for gp_fit.
///
/// With `auto_select`, every (lengthscale factor x scale, noise ratio) pair on
/// the grid is scored by log marginal likelihood with the signal variance
/// profiled out in closed form; the noise variance is ratio * signal variance.
/// Grid order breaks ties. Otherwise `fixed` is used as given.
struct GpHyperSpec {
  bool auto_select = false;
  KernelParams fixed;
  double scale = 1.0;  // typically the search-box diagonal
  std::vector<double> lengthscale_factors{0.1, 0.3, 1.0, 3.0};
  std::vector<double> noise_ratios{1e-6, 1e-4, 1e-2};
};

struct Posterior {
  double mean = 0.0;
  double stddev = 0.0;
};

/// GP regression state with a cached Cholesky factor of K + noise I (+ jitter).
class GpState {
 public:
  const Eigen::MatrixXd& inputs() const { return X_; }  // one row per observation
  const Eigen::VectorXd& targets() const { return y_; }
  const KernelParams& hyper() const { return hyper_; }
  double jitter() const { return jitter_; }
  double mean_offset() const { return offset_; }
  std::size_t size() const { return static_cast<std::size_t>(X_.rows()); }
  const Eigen::MatrixXd& cholesky() const { return L_; }

  /// Predictive mean and standard deviation of the latent function.
  Posterior posterior(const Eigen::VectorXd& z) const;
  /// Row-wise batch version; `Z` holds one query per row.
  void posterior(const Eigen::MatrixXd& Z, Eigen::VectorXd& mean, Eigen::VectorXd& stddev) const;

  /// Appends an observation, extending the Cholesky factor in O(n^2) with the
  /// current hyperparameters. Falls back to a full refactorization with
  /// escalated jitter if the extension is not positive definite.
  void add_observation(const Eigen::VectorXd& z, double y);

  double log_marginal_likelihood() const;

 private:
  friend GpState gp_fit(const Eigen::MatrixXd&, const Eigen::VectorXd&, const GpHyperSpec&, double);
  void factorize();
  void update_weights();

  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  KernelParams hyper_;
  double offset_ = 0.0;
  double jitter_ = 0.0;
  Eigen::MatrixXd L_;
  Eigen::VectorXd weights_;  // (K + noise I)^-1 (y - offset)
};

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& p);

/// Fits a zero-mean GP to y - mean_offset. Jitter (relative to the signal
/// variance) is tried as 0, then 1e-10, x10 up to 1e-4; std::runtime_error if
/// the Gram matrix is still not positive definite. Throws
/// std::invalid_argument for empty or non-finite data.
GpState gp_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GpHyperSpec& spec,
               double mean_offset = 0.0);

}  // namespace reltune
