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

// Graph-attention autoencoder with a metric-prediction head.
//
// A configuration becomes an instance graph: every parameter node carries
// [normalized value | reduced semantic embedding]. Stacked attention layers
// (ELU activations, LeakyReLU(0.2) attention logits, self loop always in the
// neighbourhood) are mean-pooled into a latent vector z. A logistic-output MLP
// decodes z back to a normalized configuration and a linear-output MLP
// predicts z-scored (throughput, latency).
//
// All weights live in one flat vector (see ModelWeights) so that gradients,
// optimizer state and checkpoints share a single layout.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reltune/parameter_space.hpp"
#include "reltune/relgraph.hpp"

namespace reltune {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class EncoderKind { kGat, kMlp };

const char* to_string(EncoderKind kind);
EncoderKind parse_encoder_kind(const std::string& s);

inline constexpr double kLeakySlope = 0.2;

struct ModelArch {
  EncoderKind encoder = EncoderKind::kGat;
  std::size_t n_params = 0;
  std::size_t semantic_dim = 8;
  std::size_t gat_layers = 2;
  std::size_t hidden_dim = 32;  // GAT hidden width, or MLP-encoder hidden width
  std::size_t heads = 1;        // per GAT layer; head outputs are concatenated
  std::size_t latent_dim = 32;
  std::size_t decoder_hidden = 64;
  std::size_t head_hidden = 64;

  std::size_t feature_dim() const { return 1 + semantic_dim; }
  /// Output width of GAT layer l (last layer produces the latent).
  std::size_t gat_out_dim(std::size_t l) const { return l + 1 == gat_layers ? latent_dim : hidden_dim; }
  std::size_t gat_in_dim(std::size_t l) const { return l == 0 ? feature_dim() : hidden_dim; }
  /// Throws std::invalid_argument for zero sizes or widths not divisible by heads.
  void validate() const;
};

struct TensorSlot {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;
  std::size_t size() const { return rows * cols; }
};

/// Flat row-major parameter storage with named tensor slots.
class ModelWeights {
 public:
  struct GatHead {
    std::size_t W;  // in x head_dim
    std::size_t a;  // 1 x 2*head_dim: [source half | neighbour half]
  };
  struct Dense {
    std::size_t W;  // in x out
    std::size_t b;  // 1 x out
  };

  ModelWeights() = default;
  /// Zero-initialized weights laid out for `arch`.
  explicit ModelWeights(const ModelArch& arch);

  std::size_t size() const { return static_cast<std::size_t>(data_.size()); }
  Eigen::VectorXd& data() { return data_; }
  const Eigen::VectorXd& data() const { return data_; }
  const std::vector<TensorSlot>& slots() const { return slots_; }
  const TensorSlot& slot(std::size_t i) const { return slots_[i]; }

  Eigen::Map<RowMatrix> mat(std::size_t slot);
  Eigen::Map<const RowMatrix> mat(std::size_t slot) const;
  Eigen::Map<Eigen::RowVectorXd> vec(std::size_t slot);
  Eigen::Map<const Eigen::RowVectorXd> vec(std::size_t slot) const;

  /// Same layout, all zeros.
  ModelWeights zeros_like() const;

  std::vector<std::vector<GatHead>> gat;  // [layer][head]
  std::vector<Dense> mlp_encoder;         // two dense layers, only for EncoderKind::kMlp
  std::vector<Dense> decoder;             // hidden, output
  std::vector<Dense> metric_head;         // hidden, output

 private:
  std::size_t add(std::string name, std::size_t rows, std::size_t cols);

  Eigen::VectorXd data_;
  std::vector<TensorSlot> slots_;
};

/// Per-node neighbourhoods (self first, then graph neighbours in index order)
/// in CSR form plus the static semantic features.
struct NodeContext {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<std::size_t> indices;
  Eigen::MatrixXd semantic;  // n x semantic_dim

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::span<const std::size_t> neighbourhood(std::size_t i) const {
    return {indices.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

NodeContext make_node_context(const RelationalGraph& graph, Eigen::MatrixXd semantic);

/// PCA of the embedding rows to `dim` components (zero-padded when fewer exist).
/// Component signs are fixed so the largest-magnitude score is positive.
Eigen::MatrixXd reduce_embeddings(const EmbeddingSet& emb, std::size_t dim);

/// Per-metric z-score statistics of the training set.
struct MetricStats {
  double tps_mean = 0.0;
  double tps_std = 1.0;
  double latency_mean = 0.0;
  double latency_std = 1.0;
  // Normalized range seen in training; predictions are clamped to it.
  Eigen::Vector2d lower = Eigen::Vector2d::Constant(-std::numeric_limits<double>::infinity());
  Eigen::Vector2d upper = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());

  Eigen::Vector2d normalize(double tps, double latency) const;
  std::pair<double, double> denormalize(const Eigen::Vector2d& y) const;
};

MetricStats compute_metric_stats(const std::vector<ConfigSample>& data);

struct Model {
  ModelArch arch;
  ParameterSpace space;
  NodeContext nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::uint64_t graph_hash = 0;
  ModelWeights weights;
  MetricStats stats;
};

/// Builds a model with Glorot-uniform weights (zero biases) drawn from `seed`.
/// Semantic features come from the graph's embeddings, PCA-reduced; a graph
/// without embeddings gets all-zero semantic features.
Model init_model(const ModelArch& arch, const ParameterSpace& space, const RelationalGraph& graph,
                 std::uint64_t seed);

/// Single-head attention weights of node i over its neighbourhood.
/// `h_self` is e_i, `h_neighbours` holds e_j row-wise (self included),
/// W is in x out and `a` has length 2*out.
std::vector<double> attention_coefficients(const Eigen::VectorXd& h_self, const Eigen::MatrixXd& h_neighbours,
                                           const Eigen::MatrixXd& W, const Eigen::VectorXd& a);

/// One attention layer: out_i = ELU(sum_j alpha_ij W e_j), heads concatenated.
/// Throws std::invalid_argument on shape mismatch.
RowMatrix gat_layer_forward(const RowMatrix& features, const NodeContext& nodes, const ModelWeights& w,
                            std::size_t layer);

/// Node features [x_norm | semantic] for one sample.
RowMatrix node_features(const Model& model, const Eigen::VectorXd& x_norm);

Eigen::VectorXd encode(const Model& model, const Eigen::VectorXd& x_norm);
Eigen::VectorXd decode(const Model& model, const Eigen::VectorXd& z);
/// z-scored (throughput, latency), clamped to the normalized range of the
/// training data so latent points far from the data cannot extrapolate
/// beyond observed performance.
Eigen::Vector2d predict_metrics(const Model& model, const Eigen::VectorXd& z);

double elu(double x);

}  // namespace reltune
