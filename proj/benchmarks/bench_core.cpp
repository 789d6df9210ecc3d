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


#include <benchmark/benchmark.h>

#include "reltune/community.hpp"
#include "reltune/gnn_train.hpp"
#include "reltune/gp.hpp"
#include "reltune/hbo.hpp"
#include "reltune/rng.hpp"
#include "reltune/simbench.hpp"

namespace reltune {
namespace {

Eigen::MatrixXd uniform_matrix(Rng& r, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.uniform();
  return m;
}

void BM_GpPosterior(benchmark::State& state) {
  Rng r(1);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd X = uniform_matrix(r, n, 32);
  Eigen::VectorXd y(n);
  for (auto& v : y) v = r.normal();
  GpHyperSpec spec;
  spec.fixed = {2.0, 1.0, 1e-4};
  const GpState gp = gp_fit(X, y, spec);
  const Eigen::MatrixXd Q = uniform_matrix(r, 1024, 32);
  Eigen::VectorXd mean, sd;
  for (auto _ : state) {
    gp.posterior(Q, mean, sd);
    benchmark::DoNotOptimize(sd.data());
  }
  state.SetItemsProcessed(state.iterations() * Q.rows());
}
BENCHMARK(BM_GpPosterior)->Arg(16)->Arg(128)->Arg(316);

void BM_GpFitAuto(benchmark::State& state) {
  Rng r(2);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd X = uniform_matrix(r, n, 32);
  Eigen::VectorXd y(n);
  for (auto& v : y) v = r.normal();
  GpHyperSpec spec;
  spec.auto_select = true;
  spec.scale = std::sqrt(32.0);
  for (auto _ : state) benchmark::DoNotOptimize(gp_fit(X, y, spec).log_marginal_likelihood());
}
BENCHMARK(BM_GpFitAuto)->Arg(64)->Arg(316);

void BM_Encode(benchmark::State& state) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 12, 7);
  const auto graph = build_adjacency(planted_embeddings(w, 32, 11), kDefaultTau);
  TrainConfig tc;
  tc.encoder = state.range(0) ? EncoderKind::kGat : EncoderKind::kMlp;
  const Model m = init_model(tc.arch(12), w.space, graph, 1);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(12, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(encode(m, x).data());
}
BENCHMARK(BM_Encode)->Arg(1)->Arg(0);

void BM_TrainEpoch(benchmark::State& state) {
  const auto w = make_workload(WorkloadKind::kRwBalanced, 12, 7);
  const auto graph = build_adjacency(planted_embeddings(w, 32, 11), kDefaultTau);
  const auto data = generate_dataset(w, 512, 7);
  TrainConfig tc;
  tc.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(data, graph, w.space, tc).final_loss);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

void BM_Louvain(benchmark::State& state) {
  const auto emb = subsystem_embeddings(static_cast<std::size_t>(state.range(0)), 3);
  const auto graph = build_adjacency(emb, 0.65);
  for (auto _ : state) benchmark::DoNotOptimize(louvain(graph, 1));
}
BENCHMARK(BM_Louvain)->Arg(4)->Arg(16)->Arg(64);

void BM_EvaluateConfig(benchmark::State& state) {
  const auto w = make_workload(WorkloadKind::kAnalytic, 12, 3);
  const auto x = reference_config(w);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_config(w, x).tps);
}
BENCHMARK(BM_EvaluateConfig);

}  // namespace
}  // namespace reltune

BENCHMARK_MAIN();
