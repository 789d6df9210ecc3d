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


#include <cmath>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reltune/gp.hpp"

namespace reltune {
namespace {

Eigen::MatrixXd random_points(Rng& r, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = r.uniform(-1.0, 1.0);
  return X;
}

GpHyperSpec fixed(double ell, double sf2, double noise) {
  GpHyperSpec s;
  s.fixed = {ell, sf2, noise};
  return s;
}

TEST(Gp, MatchesDenseOracle) {
  Rng r(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(r.index(12));
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(r.index(4));
    const Eigen::MatrixXd X = random_points(r, n, d);
    Eigen::VectorXd y(n);
    for (auto& v : y) v = r.normal();
    const double ell = r.uniform(0.3, 2.0), sf2 = r.uniform(0.5, 2.0), noise = r.uniform(1e-3, 1e-1);
    const double offset = r.normal();
    const GpState gp = gp_fit(X, y, fixed(ell, sf2, noise), offset);
    const Eigen::VectorXd q = random_points(r, 1, d).row(0).transpose();
    const auto want = oracle::gp_posterior(X, y, ell, sf2, noise + gp.jitter() * sf2, offset, q);
    const Posterior got = gp.posterior(q);
    EXPECT_NEAR(got.mean, want.mean, 1e-8 * std::max(1.0, std::abs(want.mean)));
    EXPECT_NEAR(got.stddev * got.stddev, want.var, 1e-8 * sf2);
  }
}

TEST(Gp, InterpolatesSingleNoiselessPoint) {
  Eigen::MatrixXd X(1, 2);
  X << 0.3, -0.2;
  const GpState gp = gp_fit(X, Eigen::VectorXd::Constant(1, 2.5), fixed(0.5, 1.0, 0.0));
  EXPECT_EQ(gp.jitter(), 0.0);
  const Posterior p = gp.posterior(X.row(0).transpose());
  EXPECT_NEAR(p.mean, 2.5, 1e-12);
  EXPECT_NEAR(p.stddev, 0.0, 1e-6);
}

TEST(Gp, RevertsToPriorFarAway) {
  Rng r(2);
  const Eigen::MatrixXd X = random_points(r, 6, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(6, -1.0, 4.0);
  const GpState gp = gp_fit(X, y, fixed(0.2, 1.7, 1e-4), 0.75);
  const Posterior p = gp.posterior(Eigen::Vector2d(50.0, -50.0));
  EXPECT_NEAR(p.mean, 0.75, 1e-12);
  EXPECT_NEAR(p.stddev, std::sqrt(1.7), 1e-12);
}

TEST(Gp, VarianceNeverExceedsPrior) {
  Rng r(3);
  const Eigen::MatrixXd X = random_points(r, 10, 3);
  Eigen::VectorXd y(10);
  for (auto& v : y) v = r.normal();
  const GpState gp = gp_fit(X, y, fixed(0.7, 1.3, 1e-3));
  Eigen::VectorXd mean, sd;
  gp.posterior(random_points(r, 200, 3), mean, sd);
  EXPECT_LE(sd.maxCoeff(), std::sqrt(1.3) + 1e-12);
  EXPECT_GE(sd.minCoeff(), 0.0);
}

TEST(Gp, BatchMatchesSingleQueries) {
  Rng r(4);
  const Eigen::MatrixXd X = random_points(r, 8, 2);
  const GpState gp = gp_fit(X, Eigen::VectorXd::LinSpaced(8, 0.0, 1.0), fixed(0.5, 1.0, 1e-3));
  const Eigen::MatrixXd Q = random_points(r, 5, 2);
  Eigen::VectorXd mean, sd;
  gp.posterior(Q, mean, sd);
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    const Posterior p = gp.posterior(Q.row(i).transpose());
    EXPECT_NEAR(p.mean, mean[i], 1e-14);
    EXPECT_NEAR(p.stddev, sd[i], 1e-14);
  }
}

TEST(Gp, IncrementalUpdateEqualsRefit) {
  Rng r(5);
  const Eigen::MatrixXd X = random_points(r, 12, 3);
  Eigen::VectorXd y(12);
  for (auto& v : y) v = r.normal();
  const GpHyperSpec spec = fixed(0.8, 1.1, 1e-3);
  GpState inc = gp_fit(X.topRows(4), y.head(4), spec, 0.3);
  for (Eigen::Index i = 4; i < 12; ++i) inc.add_observation(X.row(i).transpose(), y[i]);
  const GpState full = gp_fit(X, y, spec, 0.3);
  const Eigen::MatrixXd Q = random_points(r, 20, 3);
  Eigen::VectorXd m1, s1, m2, s2;
  inc.posterior(Q, m1, s1);
  full.posterior(Q, m2, s2);
  EXPECT_LT((m1 - m2).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((s1 - s2).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(inc.log_marginal_likelihood(), full.log_marginal_likelihood(), 1e-8);
}

TEST(Gp, DuplicateInputsNeedJitter) {
  Eigen::MatrixXd X(3, 1);
  X << 0.1, 0.1, 0.5;
  const GpState gp = gp_fit(X, Eigen::Vector3d(1.0, 1.0, 0.0), fixed(0.3, 1.0, 0.0));
  EXPECT_GT(gp.jitter(), 0.0);
  EXPECT_LE(gp.jitter(), 1e-4);
  EXPECT_NEAR(gp.posterior(Eigen::VectorXd::Constant(1, 0.1)).mean, 1.0, 1e-4);
}

TEST(Gp, AutoSelectionMaximizesProfiledLikelihood) {
  Rng r(6);
  const Eigen::MatrixXd X = random_points(r, 15, 2);
  Eigen::VectorXd y(15);
  for (Eigen::Index i = 0; i < 15; ++i) y[i] = 3.0 * std::sin(2.0 * X(i, 0)) + X(i, 1);
  GpHyperSpec spec;
  spec.auto_select = true;
  spec.scale = 2.0;
  const GpState gp = gp_fit(X, y, spec);
  const double best = gp.log_marginal_likelihood();
  bool on_grid = false;
  for (double f : spec.lengthscale_factors) on_grid |= std::abs(gp.hyper().lengthscale - f * spec.scale) < 1e-15;
  EXPECT_TRUE(on_grid);
  for (double f : spec.lengthscale_factors) {
    for (double ratio : spec.noise_ratios) {
      for (double sf2 : {0.1, 1.0, 3.0, 10.0}) {
        const GpState other = gp_fit(X, y, fixed(f * spec.scale, sf2, ratio * sf2));
        EXPECT_LE(other.log_marginal_likelihood(), best + 1e-9) << f << " " << ratio << " " << sf2;
      }
    }
  }
}

TEST(Gp, Deterministic) {
  Rng r(7);
  const Eigen::MatrixXd X = random_points(r, 9, 2);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(9, 2.0, -2.0);
  GpHyperSpec spec;
  spec.auto_select = true;
  const GpState a = gp_fit(X, y, spec), b = gp_fit(X, y, spec);
  EXPECT_EQ(a.cholesky(), b.cholesky());
  EXPECT_EQ(a.hyper().lengthscale, b.hyper().lengthscale);
}

TEST(Gp, Preconditions) {
  EXPECT_THROW(gp_fit(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0), fixed(1, 1, 0)), std::invalid_argument);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 1);
  EXPECT_THROW(gp_fit(X, Eigen::VectorXd::Zero(3), fixed(1, 1, 0)), std::invalid_argument);
  X(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(gp_fit(X, Eigen::VectorXd::Zero(2), fixed(1, 1, 0)), std::invalid_argument);
  X(1, 0) = 1.0;
  EXPECT_THROW(gp_fit(X, Eigen::VectorXd::Zero(2), fixed(0, 1, 0)), std::invalid_argument);
  GpState gp = gp_fit(X, Eigen::VectorXd::Zero(2), fixed(1, 1, 0));
  EXPECT_THROW(gp.posterior(Eigen::Vector2d(0, 0)), std::invalid_argument);
  EXPECT_THROW(gp.add_observation(Eigen::Vector2d(0, 0), 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace reltune
