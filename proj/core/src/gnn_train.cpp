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

#include "reltune/gnn_train.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gnn_internal.hpp"
#include "reltune/rng.hpp"

namespace reltune {
namespace {

// Backward through a dense layer given d(loss)/d(pre). Returns d(loss)/d(input).
Eigen::RowVectorXd dense_backward(const Eigen::RowVectorXd& d_pre, const detail::DenseCache& c,
                                  const ModelWeights& w, const ModelWeights::Dense& layer, ModelWeights& grad) {
  grad.mat(layer.W).noalias() += c.input.transpose() * d_pre;
  grad.vec(layer.b) += d_pre;
  return d_pre * w.mat(layer.W).transpose();
}

Eigen::RowVectorXd elu_backward(const Eigen::RowVectorXd& d_out, const detail::DenseCache& c) {
  return d_out.array() * c.pre.unaryExpr([](double v) { return detail::elu_grad_from_pre(v); }).array();
}

// Accumulates the gradient of scale * loss(example) into grad; returns the loss.
double accumulate_example(const Model& model, const Example& ex, const TrainConfig& cfg, double scale,
                          detail::ForwardCache& cache, ModelWeights& grad) {
  const auto& w = model.weights;
  detail::forward(model, ex.x, cache);
  const Eigen::RowVectorXd& x_hat = cache.decoder[1].out;
  const Eigen::RowVectorXd& y_hat = cache.head[1].out;
  const Eigen::RowVectorXd rx = x_hat - ex.x.transpose();
  const Eigen::RowVectorXd ry = y_hat - ex.y.transpose();
  const double value = cfg.lambda_recon * rx.squaredNorm() + cfg.lambda_metric * ry.squaredNorm();

  // Decoder: logistic output.
  Eigen::RowVectorXd d_pre = (2.0 * scale * cfg.lambda_recon) * rx.array() * x_hat.array() * (1.0 - x_hat.array());
  Eigen::RowVectorXd d_hidden = dense_backward(d_pre, cache.decoder[1], w, w.decoder[1], grad);
  Eigen::RowVectorXd d_z = dense_backward(elu_backward(d_hidden, cache.decoder[0]), cache.decoder[0], w,
                                          w.decoder[0], grad);
  // Metric head: linear output.
  d_pre = (2.0 * scale * cfg.lambda_metric) * ry;
  d_hidden = dense_backward(d_pre, cache.head[1], w, w.metric_head[1], grad);
  d_z += dense_backward(elu_backward(d_hidden, cache.head[0]), cache.head[0], w, w.metric_head[0], grad);

  if (model.arch.encoder == EncoderKind::kGat) {
    const auto n = static_cast<Eigen::Index>(model.nodes.size());
    RowMatrix d_out = (d_z / static_cast<double>(n)).replicate(n, 1);
    for (std::size_t l = w.gat.size(); l-- > 0;) {
      d_out = detail::gat_layer_backward(d_out, cache.gat[l], model.nodes, w, l, grad, l > 0);
    }
  } else {
    Eigen::RowVectorXd d = elu_backward(d_z, cache.mlp_encoder[1]);
    d = dense_backward(d, cache.mlp_encoder[1], w, w.mlp_encoder[1], grad);
    d = elu_backward(d, cache.mlp_encoder[0]);
    dense_backward(d, cache.mlp_encoder[0], w, w.mlp_encoder[0], grad);
  }
  return value;
}

}  // namespace

ModelArch TrainConfig::arch(std::size_t n_params) const {
  ModelArch a;
  a.encoder = encoder;
  a.n_params = n_params;
  a.semantic_dim = semantic_dim;
  a.gat_layers = gat_layers;
  a.hidden_dim = hidden_dim;
  a.heads = heads;
  a.latent_dim = latent_dim;
  a.decoder_hidden = decoder_hidden;
  a.head_hidden = head_hidden;
  return a;
}

void TrainConfig::validate() const {
  if (lambda_recon < 0.0 || lambda_metric < 0.0) throw std::invalid_argument("train: lambdas must be >= 0");
  if (!(lambda_recon + lambda_metric > 0.0)) throw std::invalid_argument("train: lambdas must not both be zero");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
}

std::vector<Example> make_examples(const Model& model, const std::vector<ConfigSample>& data) {
  std::vector<Example> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back({normalize_config(model.space, s.x), model.stats.normalize(s.tps, s.latency)});
  return out;
}

double loss(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat, const Eigen::Vector2d& y,
            const Eigen::Vector2d& y_hat, const TrainConfig& cfg) {
  if (x.size() != x_hat.size()) throw std::invalid_argument("loss: configuration length mismatch");
  return cfg.lambda_recon * (x - x_hat).squaredNorm() + cfg.lambda_metric * (y - y_hat).squaredNorm();
}

double dataset_loss(const Model& model, std::span<const Example> batch, const TrainConfig& cfg) {
  if (batch.empty()) return 0.0;
  detail::ForwardCache cache;
  double total = 0.0;
  for (const auto& ex : batch) {
    detail::forward(model, ex.x, cache);
    total += loss(ex.x, cache.decoder[1].out.transpose(), ex.y, cache.head[1].out.transpose(), cfg);
  }
  return total / static_cast<double>(batch.size());
}

ModelWeights gradient(const Model& model, std::span<const Example> batch, const TrainConfig& cfg,
                      double* batch_loss) {
  if (batch.empty()) throw std::invalid_argument("gradient: empty batch");
  ModelWeights grad = model.weights.zeros_like();
  detail::ForwardCache cache;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const auto& ex : batch) total += accumulate_example(model, ex, cfg, scale, cache, grad);
  total *= scale;
  if (!std::isfinite(total) || !grad.data().allFinite()) {
    throw std::runtime_error("gradient: non-finite loss or gradient (loss = " + std::to_string(total) +
                             "); reduce the learning rate");
  }
  if (batch_loss) *batch_loss = total;
  return grad;
}

TrainResult train(const std::vector<ConfigSample>& data, const RelationalGraph& graph, const ParameterSpace& space,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() < 2) throw std::invalid_argument("train: need at least two samples");
  if (graph.node_count() != space.dimension()) {
    throw std::invalid_argument("train: graph node count differs from parameter count");
  }
  TrainResult result;
  result.model = init_model(cfg.arch(space.dimension()), space, graph, cfg.seed);
  Model& model = result.model;
  model.stats = compute_metric_stats(data);
  const std::vector<Example> examples = make_examples(model, data);
  result.initial_loss = dataset_loss(model, examples, cfg);

  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(model.weights.data().size());
  Eigen::VectorXd v = m;
  std::size_t step = 0;

  Rng rng(mix_seed(cfg.seed, 0x7261696eULL));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Example> batch;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(examples[order[k]]);
      double batch_loss = 0.0;
      ModelWeights g;
      try {
        g = gradient(model, batch, cfg, &batch_loss);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("train: diverged at epoch " + std::to_string(epoch) + ": " + e.what());
      }
      epoch_total += batch_loss * static_cast<double>(end - start);
      ++step;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      m = beta1 * m + (1.0 - beta1) * g.data();
      v = beta2 * v + (1.0 - beta2) * g.data().cwiseAbs2();
      model.weights.data().array() -=
          cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(order.size()));
  }
  result.final_loss = dataset_loss(model, examples, cfg);
  if (!std::isfinite(result.final_loss)) throw std::runtime_error("train: final loss is not finite");
  return result;
}

}  // namespace reltune
