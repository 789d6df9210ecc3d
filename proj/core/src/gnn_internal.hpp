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

// Forward caches shared by inference and backpropagation.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "reltune/gnn.hpp"

namespace reltune::detail {

struct HeadCache {
  RowMatrix transformed;   // n x head_dim, W e_j for every node
  Eigen::VectorXd source;  // a_src . (W e_i)
  Eigen::VectorXd target;  // a_nb . (W e_j)
  std::vector<double> logit;  // pre-LeakyReLU, aligned with NodeContext::indices
  std::vector<double> alpha;  // aligned with NodeContext::indices
};

struct LayerCache {
  RowMatrix input;
  std::vector<HeadCache> heads;
  RowMatrix aggregate;  // pre-activation, heads concatenated
  RowMatrix output;     // ELU(aggregate)
};

struct DenseCache {
  Eigen::RowVectorXd input;
  Eigen::RowVectorXd pre;
  Eigen::RowVectorXd out;
};

struct ForwardCache {
  std::vector<LayerCache> gat;
  std::vector<DenseCache> mlp_encoder;
  Eigen::RowVectorXd z;
  std::vector<DenseCache> decoder;
  std::vector<DenseCache> head;
};

inline double elu_grad_from_pre(double pre) { return pre > 0.0 ? 1.0 : std::exp(pre); }
inline double leaky(double x) { return x > 0.0 ? x : kLeakySlope * x; }
inline double leaky_grad(double x) { return x > 0.0 ? 1.0 : kLeakySlope; }

void gat_layer(const RowMatrix& input, const NodeContext& nodes, const ModelWeights& w, std::size_t layer,
               LayerCache& cache);

/// Accumulates weight gradients into `grad` and returns d(loss)/d(input).
RowMatrix gat_layer_backward(const RowMatrix& d_output, const LayerCache& cache, const NodeContext& nodes,
                             const ModelWeights& w, std::size_t layer, ModelWeights& grad, bool need_input_grad);

void forward(const Model& model, const Eigen::VectorXd& x_norm, ForwardCache& cache);
Eigen::RowVectorXd encode_cached(const Model& model, const Eigen::VectorXd& x_norm, ForwardCache& cache);
void decode_cached(const Model& model, const Eigen::RowVectorXd& z, std::vector<DenseCache>& cache);
void head_cached(const Model& model, const Eigen::RowVectorXd& z, std::vector<DenseCache>& cache);

}  // namespace reltune::detail
