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
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "reltune/simbench.hpp"

namespace reltune {
namespace {

const WorkloadKind kKinds[] = {WorkloadKind::kRwBalanced, WorkloadKind::kReadHeavy, WorkloadKind::kScanHeavy,
                               WorkloadKind::kAnalytic};

TEST(Workload, DeterministicAndSeedSensitive) {
  const auto a = make_workload(WorkloadKind::kAnalytic, 12, 5);
  EXPECT_EQ(workload_to_json(a), workload_to_json(make_workload(WorkloadKind::kAnalytic, 12, 5)));
  EXPECT_NE(workload_to_json(a), workload_to_json(make_workload(WorkloadKind::kAnalytic, 12, 6)));
  EXPECT_THROW(make_workload(WorkloadKind::kAnalytic, 1, 5), std::invalid_argument);
}

TEST(Workload, InteractionAndInertCounts) {
  for (const auto kind : kKinds) {
    for (std::size_t n = 2; n <= 20; ++n) {
      const auto w = make_workload(kind, n, n);
      const std::size_t pairs = (n + 3) / 4;
      EXPECT_EQ(w.interactions.size(), pairs) << n;
      EXPECT_EQ(w.inert.size(), std::min(pairs, n - 2 * pairs)) << n;
      std::set<std::size_t> used;
      for (const auto& it : w.interactions) {
        EXPECT_TRUE(used.insert(it.i).second);
        EXPECT_TRUE(used.insert(it.j).second);
      }
      for (auto i : w.inert) EXPECT_FALSE(used.count(i));
      const auto pe = planted_edges(w);
      EXPECT_TRUE(std::is_sorted(pe.begin(), pe.end()));
      for (const auto& [i, j] : pe) EXPECT_LT(i, j);
      EXPECT_NO_THROW(w.validate());
    }
  }
}

TEST(Evaluate, ReferenceGivesBaseThroughput) {
  for (const auto kind : kKinds) {
    auto w = make_workload(kind, 12, 3);
    // Integer midpoints can round off 0.5, so use a space where they cannot.
    std::vector<ParamSpec> specs;
    for (const auto& p : w.space.params()) specs.push_back({p.name, 0.0, 1.0, ParamKind::kContinuous});
    w.space = ParameterSpace(specs);
    EXPECT_NEAR(evaluate_config(w, reference_config(w)).tps, w.base_tps, 1e-9 * w.base_tps);
  }
}

TEST(Evaluate, InteractionFlipsSign) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 12, 4);
  for (const auto& it : w.interactions) {
    auto at = [&](double ui, double uj) {
      Eigen::VectorXd u = normalize_config(w.space, reference_config(w));
      u[static_cast<Eigen::Index>(it.i)] = ui;
      u[static_cast<Eigen::Index>(it.j)] = uj;
      return evaluate_config(w, denormalize_config(w.space, u)).tps;
    };
    const double gain_low = at(1, 0) - at(0, 0);
    const double gain_high = at(1, 1) - at(0, 1);
    EXPECT_NEAR(gain_low - gain_high, 4.0 * it.gain * w.base_tps, 1e-9 * w.base_tps);
    if (it.gain > 0) {
      EXPECT_GT(gain_low, gain_high);
    }
  }
}

TEST(Evaluate, BoundsAndNoise) {
  const auto w = make_workload(WorkloadKind::kScanHeavy, 6, 2);
  auto x = reference_config(w);
  const Measurement clean = evaluate_config(w, x);
  EXPECT_GT(clean.tps, 0.0);
  EXPECT_GT(clean.latency, 0.0);
  const Measurement n1 = evaluate_config(w, x, true, 9);
  EXPECT_EQ(n1.tps, evaluate_config(w, x, true, 9).tps);
  EXPECT_NE(n1.tps, evaluate_config(w, x, true, 10).tps);
  EXPECT_NEAR(n1.tps, clean.tps, 0.2 * clean.tps);
  x[0] = w.space[0].upper + 1.0;
  EXPECT_THROW(evaluate_config(w, x), std::invalid_argument);
  EXPECT_THROW(evaluate_config(w, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(Dataset, LatinHypercubeFillsDeciles) {
  const auto w = make_workload(WorkloadKind::kReadHeavy, 10, 1);
  const auto data = generate_dataset(w, 200, 3);
  ASSERT_EQ(data.size(), 200u);
  for (std::size_t k = 0; k < w.space.dimension(); ++k) {
    if (w.space[k].kind != ParamKind::kContinuous) continue;
    std::vector<int> count(10, 0);
    for (const auto& s : data) {
      const double u = (s.x[k] - w.space[k].lower) / (w.space[k].upper - w.space[k].lower);
      ++count[std::min<std::size_t>(9, static_cast<std::size_t>(u * 10.0))];
    }
    for (int c : count) EXPECT_EQ(c, 20) << w.space[k].name;
  }
  for (const auto& s : data) EXPECT_TRUE(w.space.contains(s.x));
  EXPECT_EQ(dataset_to_csv(data, 10), dataset_to_csv(generate_dataset(w, 200, 3), 10));
}

TEST(Oracle, BudgetOneIsASingleSample) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 8, 1);
  const OracleResult r = oracle_best(w, 1, 4);
  EXPECT_EQ(r.tps, evaluate_config(w, r.x).tps);
  EXPECT_EQ(r.score, r.tps);
  EXPECT_THROW(oracle_best(w, 0, 4), std::invalid_argument);
}

TEST(Oracle, LargerBudgetNoWorseThanReference) {
  const auto w = make_workload(WorkloadKind::kAnalytic, 8, 2);
  const OracleResult r = oracle_best(w, 3000, 1);
  EXPECT_GE(r.score, evaluate_config(w, reference_config(w)).tps);
  const ScoreFn low_latency = [](const Measurement& m) { return -m.latency; };
  const OracleResult l = oracle_best(w, 3000, 1, low_latency);
  EXPECT_EQ(l.score, -l.latency);
  EXPECT_LE(l.latency, r.latency);
}

TEST(Oracle, FindsQuadraticOptimum) {
  WorkloadSpec w;
  w.space = ParameterSpace({{"a", 0.0, 1.0, ParamKind::kContinuous}, {"b", 0.0, 10.0, ParamKind::kContinuous}});
  w.main_effects = {{MainShape::kQuadratic, 0.3, 0.3}, {MainShape::kQuadratic, 0.2, 0.8}};
  w.latency_penalty = {0.0, 0.0};
  w.validate();
  const OracleResult r = oracle_best(w, 2000, 7);
  EXPECT_NEAR(r.x[0], 0.3, 0.01);
  EXPECT_NEAR(r.x[1], 8.0, 0.1);
  EXPECT_NEAR(r.tps, w.base_tps * (1.0 + w.main_effects[0](0.3) + w.main_effects[1](0.8)), 1e-3 * w.base_tps);
}

TEST(MainEffect, Shapes) {
  const MainEffect q{MainShape::kQuadratic, 2.0, 0.25};
  EXPECT_DOUBLE_EQ(q.raw(0.25), 2.0);
  EXPECT_DOUBLE_EQ(q(0.5), 0.0);
  const MainEffect r{MainShape::kRamp, 1.0, 0.5};
  EXPECT_DOUBLE_EQ(r.raw(0.25), 0.5);
  EXPECT_DOUBLE_EQ(r.raw(0.9), 1.0);
  const MainEffect l{MainShape::kLinear, 3.0, 0.5};
  EXPECT_DOUBLE_EQ(l(1.0), 1.5);
}

double cosine(const EmbeddingSet& e, std::size_t i, std::size_t j) { return cosine_similarity(e.row(i), e.row(j)); }

TEST(Embeddings, PlantedPairsRecovered) {
  for (const auto kind : kKinds) {
    const auto w = make_workload(kind, 12, 8);
    const auto e = planted_embeddings(w, 32, 3);
    ASSERT_EQ(e.size(), 12u);
    EXPECT_EQ(build_adjacency(e, kDefaultTau).edges(), planted_edges(w));
    for (const auto& [i, j] : planted_edges(w)) EXPECT_NEAR(cosine(e, i, j), 0.9, 0.05);
  }
  EXPECT_THROW(planted_embeddings(make_workload(WorkloadKind::kRwBalanced, 12, 8), 4, 3), std::invalid_argument);
}

TEST(Embeddings, SubsystemLevels) {
  const auto e = subsystem_embeddings(3, 5);
  ASSERT_EQ(e.size(), 24u);
  EXPECT_NEAR(cosine(e, 0, 1), 0.92, 0.05);
  EXPECT_NEAR(cosine(e, 0, 2), 0.78, 0.05);
  EXPECT_NEAR(cosine(e, 0, 4), 0.68, 0.05);
  EXPECT_NEAR(cosine(e, 0, 8), 0.0, 0.1);
}

TEST(Heatmap, ShapeAndAdditivityOfIndependentPairs) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 12, 7);
  const auto fixed = reference_config(w);
  const auto [pi, pj] = planted_edges(w).front();
  std::set<std::size_t> paired;
  for (const auto& [i, j] : planted_edges(w)) paired.insert({i, j});
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < 12; ++k)
    if (!paired.count(k) && w.space[k].kind == ParamKind::kContinuous) free.push_back(k);
  ASSERT_GE(free.size(), 2u);

  const auto M = heatmap_slice(w, free[0], free[1], 7, fixed);
  ASSERT_EQ(M.rows(), 7);
  ASSERT_EQ(M.cols(), 7);
  for (int a = 1; a < 7; ++a)
    for (int b = 1; b < 7; ++b) EXPECT_NEAR(M(a, b) - M(a, 0) - M(0, b) + M(0, 0), 0.0, 1e-9 * w.base_tps);

  const auto P = heatmap_slice(w, pi, pj, 7, fixed);
  EXPECT_GT(std::abs(P(6, 6) - P(6, 0) - P(0, 6) + P(0, 0)), 1e-3 * w.base_tps);
  const std::string text = heatmap_csv(w, pi, pj, P);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 50);
  EXPECT_EQ(text.rfind(w.space[pi].name + "," + w.space[pj].name + ",tps\n", 0), 0u);
}

TEST(WorkloadJson, RoundTrip) {
  for (const auto kind : kKinds) {
    const auto w = make_workload(kind, 9, 11);
    const std::string text = workload_to_json(w);
    const auto back = workload_from_json(text);
    EXPECT_EQ(workload_to_json(back), text);
    const auto x = reference_config(w);
    EXPECT_EQ(evaluate_config(back, x).tps, evaluate_config(w, x).tps);
  }
  EXPECT_THROW(workload_from_json("{\"schema\": \"other\"}"), std::runtime_error);
}

}  // namespace
}  // namespace reltune
