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

#include "oracles.hpp"
#include "reltune/community.hpp"
#include "reltune/simbench.hpp"

namespace reltune {
namespace {

RelationalGraph random_graph(Rng& r, std::size_t n, double p) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (r.uniform() < p) e.emplace_back(i, j);
  if (e.empty()) e.emplace_back(0, 1);
  return RelationalGraph::from_edges(n, e);
}

RelationalGraph clique_pair(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) e.emplace_back(b * k + i, b * k + j);
  return RelationalGraph::from_edges(2 * k, e);
}

TEST(Modularity, TwoTriangles) {
  EXPECT_NEAR(modularity(clique_pair(3), Partition{{0, 0, 0, 1, 1, 1}}), 0.5, 1e-15);
}

TEST(Modularity, SingleEdgeSingletons) {
  EXPECT_NEAR(modularity(RelationalGraph::from_edges(2, {{0, 1}}), Partition{{0, 1}}), -0.5, 1e-15);
}

TEST(Modularity, OneCommunityIsZero) {
  Rng r(4);
  const auto g = random_graph(r, 9, 0.4);
  EXPECT_NEAR(modularity(g, Partition{std::vector<std::size_t>(9, 3)}), 0.0, 1e-15);
}

TEST(Modularity, MatchesPairSumOracle) {
  Rng r(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + r.index(10);
    const auto g = random_graph(r, n, r.uniform(0.1, 0.9));
    const auto labels = oracle::random_labels(r, n, 1 + r.index(4));
    const double q = modularity(g, Partition{labels});
    EXPECT_NEAR(q, oracle::modularity(n, g.edges(), labels), 1e-12);
    EXPECT_GE(q, -1.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST(Modularity, Preconditions) {
  const auto g = RelationalGraph::from_edges(3, {});
  EXPECT_THROW(modularity(g, Partition{{0, 1, 2}}), std::invalid_argument);
  EXPECT_THROW(modularity(clique_pair(3), Partition{{0, 1}}), std::invalid_argument);
}

TEST(Louvain, SeparatesCliques) {
  const auto p = louvain(clique_pair(5), 1);
  ASSERT_EQ(p.community_count(), 2u);
  for (std::size_t i = 1; i < 5; ++i) {
    EXPECT_EQ(p.labels[i], p.labels[0]);
    EXPECT_EQ(p.labels[5 + i], p.labels[5]);
  }
  EXPECT_NE(p.labels[0], p.labels[5]);
}

TEST(Louvain, CompleteGraphIsOneCommunity) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j) e.emplace_back(i, j);
  EXPECT_EQ(louvain(RelationalGraph::from_edges(7, e), 3).community_count(), 1u);
}

TEST(Louvain, RecoversPlantedBlocks) {
  Rng r(2024);
  const std::size_t n = 30;
  std::vector<std::size_t> truth(n);
  for (std::size_t i = 0; i < n; ++i) truth[i] = i / 10;
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (r.uniform() < (truth[i] == truth[j] ? 0.9 : 0.05)) e.emplace_back(i, j);
  const auto p = louvain(RelationalGraph::from_edges(n, e), 5);
  EXPECT_GE(nmi(p, Partition{truth}), 0.9);
}

TEST(Louvain, LocallyOptimalAndNoWorseThanSingletons) {
  Rng r(77);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + r.index(12);
    const auto g = random_graph(r, n, r.uniform(0.15, 0.6));
    const auto p = louvain(g, r.next_u64());
    const double q = oracle::modularity(n, g.edges(), p.labels);
    std::vector<std::size_t> singles(n);
    for (std::size_t i = 0; i < n; ++i) singles[i] = i;
    EXPECT_GE(q, oracle::modularity(n, g.edges(), singles) - 1e-12);
    // No single-node relabel (including a fresh community) raises Q.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c <= n; ++c) {
        auto moved = p.labels;
        moved[i] = c == n ? 1000 : p.labels[c];
        EXPECT_LE(oracle::modularity(n, g.edges(), moved), q + 1e-12);
      }
    }
  }
}

TEST(Louvain, DeterministicGivenSeed) {
  Rng r(5);
  const auto g = random_graph(r, 20, 0.25);
  EXPECT_EQ(louvain(g, 9), louvain(g, 9));
}

TEST(Nmi, ClosedForms) {
  EXPECT_NEAR(nmi(Partition{{0, 0, 1, 1}}, Partition{{5, 5, 2, 2}}), 1.0, 1e-15);
  EXPECT_NEAR(nmi(Partition{{0, 0, 1, 1}}, Partition{{0, 1, 0, 1}}), 0.0, 1e-15);
  EXPECT_EQ(nmi(Partition{{0, 0, 0}}, Partition{{1, 1, 1}}), 1.0);
  EXPECT_EQ(nmi(Partition{{0, 0, 0}}, Partition{{0, 1, 1}}), 0.0);
}

TEST(Nmi, MatchesContingencyOracle) {
  Rng r(13);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + r.index(15);
    const auto p = oracle::random_labels(r, n, 1 + r.index(4));
    const auto q = oracle::random_labels(r, n, 1 + r.index(4));
    const double v = nmi(Partition{p}, Partition{q});
    EXPECT_NEAR(v, oracle::nmi(p, q), 1e-12);
    EXPECT_GE(v, -1e-15);
    EXPECT_LE(v, 1.0 + 1e-12);
  }
}

TEST(Ari, ClosedForms) {
  EXPECT_NEAR(ari(Partition{{0, 0, 1, 1}}, Partition{{0, 1, 0, 1}}), -0.5, 1e-15);
  EXPECT_EQ(ari(Partition{{0, 1, 1, 2}}, Partition{{4, 0, 0, 9}}), 1.0);
  EXPECT_THROW(ari(Partition{{0}}, Partition{{0}}), std::invalid_argument);
}

TEST(Ari, MatchesPairEnumerationOracle) {
  Rng r(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + r.index(15);
    const auto p = oracle::random_labels(r, n, 1 + r.index(4));
    const auto q = oracle::random_labels(r, n, 1 + r.index(4));
    EXPECT_NEAR(ari(Partition{p}, Partition{q}), oracle::ari(p, q), 1e-12);
  }
}

TEST(SubsystemPartition, PrefixGrouping) {
  EXPECT_EQ(subsystem_partition({"innodb_a", "innodb_b", "optimizer_x"}).labels, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(subsystem_partition({"a", "b"}).labels, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(subsystem_partition({"log_a", "log_b", "log_c"}).community_count(), 1u);
}

TEST(ThresholdSweep, OneRowPerTau) {
  const auto emb = subsystem_embeddings(3, 1);
  const std::vector<double> one{0.75};
  EXPECT_EQ(threshold_sweep(emb, one, 1).size(), 1u);
  const std::vector<double> five{0.65, 0.70, 0.75, 0.80, 0.85};
  const auto reports = threshold_sweep(emb, five, 1);
  ASSERT_EQ(reports.size(), 5u);
  EXPECT_EQ(quality_reports_csv(reports).rfind("tau,edges,communities,modularity,nmi,ari", 0), 0u);
}

TEST(ThresholdSweep, DuplicateVectorsStayLinkedAtEveryTau) {
  Eigen::MatrixXd m(4, 3);
  m << 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  const EmbeddingSet emb({"a_x", "a_y", "b_x", "c_x"}, m);
  const std::vector<double> taus{0.2, 0.6, 1.0};
  for (const auto& rep : threshold_sweep(emb, taus, 3)) {
    EXPECT_FALSE(rep.edgeless);
    EXPECT_EQ(rep.edge_count, 1u);
  }
}

TEST(ThresholdSweep, EdgelessThresholdIsFlagged) {
  const auto emb = subsystem_embeddings(2, 4);
  const std::vector<double> taus{0.999};
  const auto r = threshold_sweep(emb, taus, 1);
  EXPECT_TRUE(r[0].edgeless);
  EXPECT_TRUE(std::isnan(r[0].modularity));
  EXPECT_EQ(r[0].community_count, emb.size());
}

TEST(ThresholdSweep, ModularityRisesWhileAriCollapses) {
  const auto emb = subsystem_embeddings(4, 21);
  const std::vector<double> taus{0.65, 0.70, 0.75, 0.80, 0.85};
  const auto r = threshold_sweep(emb, taus, 1);
  double peak = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i > 0) {
      EXPECT_GE(r[i].modularity, r[i - 1].modularity - 1e-12);
    }
    peak = std::max(peak, r[i].ari);
  }
  EXPECT_LE(r.back().ari, 0.5 * peak);
}

}  // namespace
}  // namespace reltune
