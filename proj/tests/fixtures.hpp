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
// Small models and spaces shared by the unit tests.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reltune/gnn.hpp"
#include "reltune/rng.hpp"

namespace fixtures {

inline reltune::ParameterSpace unit_space(std::size_t n) {
  std::vector<reltune::ParamSpec> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back({"p" + std::to_string(i), 0.0, 1.0, reltune::ParamKind::kContinuous});
  return reltune::ParameterSpace(p);
}

inline reltune::EmbeddingSet random_embeddings(reltune::Rng& r, std::size_t n, std::size_t d) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.normal();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return reltune::EmbeddingSet(names, m);
}

inline reltune::ModelArch tiny_arch(std::size_t n, reltune::EncoderKind kind = reltune::EncoderKind::kGat) {
  reltune::ModelArch a;
  a.encoder = kind;
  a.n_params = n;
  a.semantic_dim = 2;
  a.gat_layers = 2;
  a.hidden_dim = 4;
  a.heads = 1;
  a.latent_dim = 3;
  a.decoder_hidden = 6;
  a.head_hidden = 6;
  return a;
}

inline reltune::Model tiny_model(std::uint64_t seed, std::size_t n = 4,
                                 reltune::EncoderKind kind = reltune::EncoderKind::kGat) {
  reltune::Rng r(seed);
  const auto g = reltune::build_adjacency(random_embeddings(r, n, 5), 0.0);
  return reltune::init_model(tiny_arch(n, kind), unit_space(n), g, seed);
}

inline Eigen::VectorXd random_unit(reltune::Rng& r, std::size_t n) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = r.uniform();
  return x;
}

}  // namespace fixtures
