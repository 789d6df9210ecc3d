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


#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reltune/hbo.hpp"
#include "reltune/simbench.hpp"

namespace reltune {
namespace {

TEST(ExpectedImprovement, KnownValues) {
  EXPECT_NEAR(expected_improvement(0.0, 1.0, 0.0), 0.3989422804014327, 1e-12);
  EXPECT_NEAR(expected_improvement(1.0, 1.0, 0.0), 1.0833154705876864, 1e-12);
  EXPECT_EQ(expected_improvement(0.0, 0.0, 1.0), 0.0);
  EXPECT_EQ(expected_improvement(2.0, 0.0, 0.5), 1.5);
  EXPECT_EQ(expected_improvement(2.0, 1e-13, 0.5), 1.5);
}

TEST(ExpectedImprovement, MatchesOracleAndGrowsWithSigma) {
  Rng r(1);
  for (int i = 0; i < 200; ++i) {
    const double mu = r.normal(), fb = r.normal(), s = r.uniform(1e-3, 3.0);
    EXPECT_NEAR(expected_improvement(mu, s, fb), oracle::expected_improvement(mu, s, fb), 1e-12);
    EXPECT_GE(expected_improvement(mu, s * 1.5, fb), expected_improvement(mu, s, fb) - 1e-15);
    EXPECT_GE(expected_improvement(mu, s, fb), std::max(0.0, mu - fb) - 1e-15);
  }
}

TEST(Scores, MetricAndAffinity) {
  EXPECT_DOUBLE_EQ(f_metric(Eigen::Vector2d(1.0, 2.0), 0.5), 0.0);
  EXPECT_DOUBLE_EQ(f_metric(Eigen::Vector2d(1.0, -2.0), 0.25), 1.5);

  Eigen::MatrixXd G(2, 2);
  G << 0.0, 0.0, 1.0, 0.0;
  EXPECT_DOUBLE_EQ(f_affinity(Eigen::Vector2d(0.0, 0.0), G, 1.0), 0.5 * (1.0 + std::exp(-0.5)));
  EXPECT_NEAR(f_affinity(Eigen::Vector2d(100.0, 0.0), G, 1.0), 0.0, 1e-300);
  // Duplicating every good point leaves the mean unchanged.
  Eigen::MatrixXd twice(4, 2);
  twice << G, G;
  const Eigen::Vector2d q(0.3, -0.7);
  EXPECT_NEAR(f_affinity(q, twice, 0.8), f_affinity(q, G, 0.8), 1e-15);
  EXPECT_LE(f_affinity(q, G, 0.8), 1.0);

  EXPECT_THROW(f_affinity(q, Eigen::MatrixXd(0, 2), 1.0), std::invalid_argument);
  EXPECT_THROW(f_affinity(q, G, 0.0), std::invalid_argument);
  EXPECT_THROW(f_affinity(Eigen::Vector3d::Zero(), G, 1.0), std::invalid_argument);
}

TEST(Scores, MedianBandwidthMatchesBruteForce) {
  Rng r(2);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(r.index(9));
    Eigen::MatrixXd Z(m, 3);
    for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = r.normal();
    std::vector<double> d;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (i < j) d.push_back((Z.row(i) - Z.row(j)).norm());
    std::sort(d.begin(), d.end());
    const double want = d.size() % 2 ? d[d.size() / 2] : 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
    EXPECT_DOUBLE_EQ(median_bandwidth(Z), want);
  }
  EXPECT_EQ(median_bandwidth(Eigen::MatrixXd::Zero(3, 2)), 1.0);
  EXPECT_THROW(median_bandwidth(Eigen::MatrixXd::Zero(1, 2)), std::invalid_argument);
}

Model workload_model(const WorkloadSpec& w, std::uint64_t seed) {
  Rng r(seed);
  const auto g = build_adjacency(fixtures::random_embeddings(r, w.space.dimension(), 5), 0.3);
  return init_model(fixtures::tiny_arch(w.space.dimension()), w.space, g, seed);
}

TEST(Scores, HybridIsMetricPlusWeightedAffinity) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 4, 3);
  const Model m = workload_model(w, 3);
  Rng r(4);
  Eigen::MatrixXd G(3, 3);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = r.normal();
  const Eigen::Vector3d z(0.1, -0.2, 0.3);
  HboConfig c;
  c.gamma = 2.5;
  c.alpha = 0.3;
  EXPECT_DOUBLE_EQ(hybrid_score(m, z, G, c, 0.7), f_metric(m, z, 0.3) + 2.5 * f_affinity(z, G, 0.7));
  c.gamma = 0.0;
  EXPECT_DOUBLE_EQ(hybrid_score(m, z, G, c, 0.7), f_metric(m, z, 0.3));
}

TEST(GoodSet, KeepsTopQuantileAndTies) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 4, 3);
  Model m = workload_model(w, 3);
  std::vector<ConfigSample> data;
  for (int i = 0; i < 10; ++i) data.push_back({reference_config(w), 100.0 + i, 10.0});
  m.stats = compute_metric_stats(data);
  auto idx = good_indices(m, data, 0.2, 0.5);
  EXPECT_EQ(idx, (std::vector<std::size_t>{8, 9}));
  data[7].tps = data[8].tps;
  m.stats = compute_metric_stats(data);
  idx = good_indices(m, data, 0.2, 0.5);
  EXPECT_EQ(idx, (std::vector<std::size_t>{7, 8, 9}));
  EXPECT_EQ(good_indices(m, data, 0.01, 0.5).size(), 1u);
  EXPECT_EQ(good_indices(m, data, 1.0, 0.5).size(), 10u);
  EXPECT_THROW(good_indices(m, data, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(good_indices(m, {}, 0.2, 0.5), std::invalid_argument);
  EXPECT_EQ(select_good_set(m, data, 0.2, 0.5).rows(), 3);
}

GpState gp_1d(double scale) {
  Eigen::MatrixXd X(5, 1);
  X << 0.1, 0.3, 0.45, 0.7, 0.9;
  X *= scale;
  const Eigen::VectorXd y = (Eigen::VectorXd(5) << 0.2, 1.0, 0.4, -0.3, 0.6).finished();
  GpHyperSpec s;
  s.fixed = {0.12 * scale, 1.0, 1e-6};
  return gp_fit(X, y, s);
}

SearchBox box_1d(double scale) { return {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, scale)}; }

double ei_at(const GpState& gp, double z, double f_best) {
  const Posterior p = gp.posterior(Eigen::VectorXd::Constant(1, z));
  return expected_improvement(p.mean, p.stddev, f_best);
}

TEST(ProposeNext, NearGridArgmaxIn1d) {
  const GpState gp = gp_1d(1.0);
  double grid_best = 0.0;
  for (int i = 0; i <= 10000; ++i) grid_best = std::max(grid_best, ei_at(gp, i / 10000.0, 1.0));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::VectorXd z = propose_next(gp, box_1d(1.0), 1.0, seed);
    ASSERT_TRUE(box_1d(1.0).contains(z));
    EXPECT_GE(ei_at(gp, z[0], 1.0), 0.99 * grid_best) << "seed " << seed;
  }
}

TEST(ProposeNext, ScalesWithTheBox) {
  const Eigen::VectorXd a = propose_next(gp_1d(1.0), box_1d(1.0), 1.0, 3);
  const Eigen::VectorXd b = propose_next(gp_1d(8.0), box_1d(8.0), 1.0, 3);
  EXPECT_NEAR(b[0], 8.0 * a[0], 1e-9);
}

TEST(ProposeNext, StaysInBoxAndHandlesDegenerateBox) {
  Rng r(5);
  Eigen::MatrixXd X(6, 3);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = r.uniform();
  GpHyperSpec s;
  s.fixed = {0.4, 1.0, 1e-4};
  const GpState gp = gp_fit(X, Eigen::VectorXd::LinSpaced(6, 0.0, 1.0), s);
  const SearchBox box{Eigen::Vector3d(0.0, 0.2, 0.4), Eigen::Vector3d(0.5, 0.2, 0.9)};
  HboConfig c;
  c.candidates = 64;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Eigen::VectorXd z = propose_next(gp, box, 0.5, seed, c);
    EXPECT_TRUE(box.contains(z));
    EXPECT_EQ(z[1], 0.2);
  }
  const SearchBox point{Eigen::Vector3d(0.3, 0.3, 0.3), Eigen::Vector3d(0.3, 0.3, 0.3)};
  EXPECT_EQ(propose_next(gp, point, 0.5, 1, c), point.lower);
  EXPECT_THROW(propose_next(gp, box_1d(1.0), 0.5, 1, c), std::invalid_argument);
}

struct TuneFixture {
  WorkloadSpec w = make_workload(WorkloadKind::kReadHeavy, 5, 4);
  std::vector<ConfigSample> data = generate_dataset(w, 120, 9);
  Model model = [this] {
    Model m = workload_model(w, 6);
    m.stats = compute_metric_stats(data);
    return m;
  }();
  HboConfig cfg = [] {
    HboConfig c;
    c.iterations = 15;
    c.warm_start = 6;
    c.refit_every = 5;
    c.candidates = 64;
    c.refine_starts = 2;
    c.refine_steps = 10;
    c.seed = 3;
    return c;
  }();
};

TEST(HboRun, ShapesBoundsAndMonotoneIncumbent) {
  TuneFixture f;
  const TuningHistory h = hbo_run(f.model, f.data, f.cfg);
  EXPECT_EQ(h.warm_start.size(), 6u);
  ASSERT_EQ(h.steps.size(), 15u);
  const auto curve = h.best_curve();
  ASSERT_EQ(curve.size(), 15u);
  for (std::size_t t = 1; t < curve.size(); ++t) EXPECT_GE(curve[t], curve[t - 1]);
  EXPECT_EQ(curve.back(), h.best_score);
  EXPECT_TRUE(f.w.space.contains(h.best_config));
  EXPECT_EQ(h.good_count, 24u);
  for (const auto& s : h.steps) {
    EXPECT_LE(s.metric, h.metric_cap);
    EXPECT_DOUBLE_EQ(s.hybrid, s.metric + f.cfg.gamma * s.affinity);
    EXPECT_GE(s.gp_sigma, 0.0);
  }
  for (const auto& s : h.warm_start) EXPECT_TRUE(std::isnan(s.gp_mu));
}

TEST(HboRun, ZeroIterationsUsesWarmStart) {
  TuneFixture f;
  f.cfg.iterations = 0;
  const TuningHistory h = hbo_run(f.model, f.data, f.cfg);
  EXPECT_TRUE(h.steps.empty());
  double best = -1e300;
  for (const auto& s : h.warm_start) best = std::max(best, s.hybrid);
  EXPECT_EQ(h.best_score, best);
  EXPECT_TRUE(h.best_curve().empty());
}

TEST(HboRun, VanillaIsGammaZero) {
  TuneFixture f;
  const TuningHistory v = vbo_run(f.model, f.data, f.cfg);
  f.cfg.gamma = 0.0;
  const TuningHistory g = hbo_run(f.model, f.data, f.cfg);
  EXPECT_EQ(v.best_curve(), g.best_curve());
  EXPECT_EQ(v.best_config, g.best_config);
  EXPECT_EQ(history_csv(v), history_csv(g));
}

TEST(HboRun, BitReproducible) {
  TuneFixture f;
  const TuningHistory a = hbo_run(f.model, f.data, f.cfg);
  const TuningHistory b = hbo_run(f.model, f.data, f.cfg);
  EXPECT_EQ(history_csv(a), history_csv(b));
  EXPECT_EQ(a.best_z, b.best_z);
  f.cfg.seed = 4;
  EXPECT_NE(history_csv(hbo_run(f.model, f.data, f.cfg)), history_csv(a));
}

TEST(HboRun, ConfigValidation) {
  HboConfig c;
  c.good_quantile = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.sigma_rbf = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.gamma = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(HboRun, ConfigJsonUsesNames) {
  const auto space = fixtures::unit_space(2);
  EXPECT_NE(config_json(space, {0.25, 1.0}).find("\"p1\""), std::string::npos);
}

}  // namespace
}  // namespace reltune
