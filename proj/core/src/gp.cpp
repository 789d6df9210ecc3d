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

#include "reltune/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace reltune {
namespace {

constexpr double kFirstJitter = 1e-10;
constexpr double kMaxJitter = 1e-4;

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd d = (-2.0 * A) * B.transpose();
  d.colwise() += A.rowwise().squaredNorm();
  d.rowwise() += B.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

Eigen::MatrixXd unit_gram(const Eigen::MatrixXd& X, double lengthscale) {
  Eigen::MatrixXd K = squared_distances(X, X);
  const double inv = -0.5 / (lengthscale * lengthscale);
  K = (K * inv).array().exp().matrix();
  K.diagonal().setOnes();
  return K;
}

// Lower Cholesky factor of K + (ratio + jitter) I with jitter escalation.
std::optional<Eigen::MatrixXd> cholesky_with_jitter(const Eigen::MatrixXd& K, double ratio, double& jitter) {
  for (jitter = 0.0; jitter <= kMaxJitter * 1.0000001; jitter = jitter == 0.0 ? kFirstJitter : jitter * 10.0) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += ratio + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd L = llt.matrixL();
      if (L.allFinite() && (L.diagonal().array() > 0.0).all()) return L;
    }
  }
  return std::nullopt;
}

}  // namespace

double rbf_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const KernelParams& p) {
  return p.signal_variance * std::exp(-(a - b).squaredNorm() / (2.0 * p.lengthscale * p.lengthscale));
}

void GpState::factorize() {
  const double sf2 = hyper_.signal_variance;
  const Eigen::MatrixXd K = unit_gram(X_, hyper_.lengthscale);
  auto L = cholesky_with_jitter(K, hyper_.noise_variance / sf2, jitter_);
  if (!L) throw std::runtime_error("gp_fit: Gram matrix not positive definite after maximum jitter");
  L_ = std::sqrt(sf2) * *L;
  update_weights();
}

void GpState::update_weights() {
  weights_ = L_.triangularView<Eigen::Lower>().solve((y_.array() - offset_).matrix());
  L_.triangularView<Eigen::Lower>().transpose().solveInPlace(weights_);
}

GpState gp_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GpHyperSpec& spec, double mean_offset) {
  if (X.rows() == 0 || X.rows() != y.size()) throw std::invalid_argument("gp_fit: need matching, nonempty X and y");
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("gp_fit: non-finite data");
  GpState gp;
  gp.X_ = X;
  gp.y_ = y;
  gp.offset_ = mean_offset;
  if (!spec.auto_select) {
    if (!(spec.fixed.lengthscale > 0.0) || !(spec.fixed.signal_variance > 0.0) || spec.fixed.noise_variance < 0.0) {
      throw std::invalid_argument("gp_fit: invalid kernel parameters");
    }
    gp.hyper_ = spec.fixed;
    gp.factorize();
    return gp;
  }

  const Eigen::VectorXd centered = y.array() - mean_offset;
  const double n = static_cast<double>(X.rows());
  const double scale = spec.scale > 0.0 ? spec.scale : 1.0;
  double best_lml = -std::numeric_limits<double>::infinity();
  std::optional<KernelParams> best;
  for (double factor : spec.lengthscale_factors) {
    const double ell = factor * scale;
    const Eigen::MatrixXd K = unit_gram(X, ell);
    for (double ratio : spec.noise_ratios) {
      double jitter = 0.0;
      auto L = cholesky_with_jitter(K, ratio, jitter);
      if (!L) continue;
      Eigen::VectorXd beta = L->triangularView<Eigen::Lower>().solve(centered);
      const double quad = beta.squaredNorm();
      const double sf2 = std::max(quad / n, 1e-12);
      const double log_det = 2.0 * L->diagonal().array().log().sum() + n * std::log(sf2);
      const double lml = -0.5 * quad / sf2 - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
      if (lml > best_lml) {
        best_lml = lml;
        best = KernelParams{ell, sf2, ratio * sf2};
      }
    }
  }
  if (!best) throw std::runtime_error("gp_fit: no hyperparameter candidate gave a positive definite Gram matrix");
  gp.hyper_ = *best;
  gp.factorize();
  return gp;
}

Posterior GpState::posterior(const Eigen::VectorXd& z) const {
  Eigen::VectorXd mean, sd;
  posterior(Eigen::MatrixXd(z.transpose()), mean, sd);
  return {mean[0], sd[0]};
}

void GpState::posterior(const Eigen::MatrixXd& Z, Eigen::VectorXd& mean, Eigen::VectorXd& stddev) const {
  if (Z.cols() != X_.cols()) throw std::invalid_argument("gp_posterior: query dimension mismatch");
  Eigen::MatrixXd Ks = squared_distances(Z, X_);
  Ks = (Ks * (-0.5 / (hyper_.lengthscale * hyper_.lengthscale))).array().exp().matrix() * hyper_.signal_variance;
  mean = (Ks * weights_).array() + offset_;
  const Eigen::MatrixXd V = L_.triangularView<Eigen::Lower>().solve(Ks.transpose());
  const Eigen::VectorXd var = (hyper_.signal_variance - V.colwise().squaredNorm().array()).matrix();
  stddev = var.cwiseMax(0.0).cwiseSqrt();
}

void GpState::add_observation(const Eigen::VectorXd& z, double y) {
  if (z.size() != X_.cols()) throw std::invalid_argument("gp: observation dimension mismatch");
  if (!z.allFinite() || !std::isfinite(y)) throw std::invalid_argument("gp: non-finite observation");
  const Eigen::Index n = X_.rows();
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k[i] = rbf_kernel(X_.row(i).transpose(), z, hyper_);
  const Eigen::VectorXd l = L_.triangularView<Eigen::Lower>().solve(k);
  const double diag = hyper_.signal_variance * (1.0 + jitter_) + hyper_.noise_variance - l.squaredNorm();

  X_.conservativeResize(n + 1, Eigen::NoChange);
  X_.row(n) = z.transpose();
  y_.conservativeResize(n + 1);
  y_[n] = y;
  if (diag > hyper_.signal_variance * 1e-12) {
    L_.conservativeResize(n + 1, n + 1);
    L_.row(n).head(n) = l.transpose();
    L_.col(n).head(n).setZero();
    L_(n, n) = std::sqrt(diag);
    update_weights();
  } else {
    factorize();
  }
}

double GpState::log_marginal_likelihood() const {
  const Eigen::VectorXd centered = y_.array() - offset_;
  const double n = static_cast<double>(y_.size());
  return -0.5 * centered.dot(weights_) - L_.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace reltune
