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

#include "gnn_internal.hpp"
#include "reltune/gnn.hpp"
#include "reltune/rng.hpp"

namespace reltune {

const char* to_string(EncoderKind kind) { return kind == EncoderKind::kGat ? "gat" : "mlp"; }

EncoderKind parse_encoder_kind(const std::string& s) {
  if (s == "gat") return EncoderKind::kGat;
  if (s == "mlp") return EncoderKind::kMlp;
  throw std::invalid_argument("unknown encoder kind '" + s + "'");
}

void ModelArch::validate() const {
  if (n_params == 0) throw std::invalid_argument("model: n_params must be positive");
  if (latent_dim == 0 || hidden_dim == 0 || decoder_hidden == 0 || head_hidden == 0) {
    throw std::invalid_argument("model: layer widths must be positive");
  }
  if (encoder == EncoderKind::kGat) {
    if (gat_layers == 0 || heads == 0) throw std::invalid_argument("model: need at least one GAT layer and head");
    for (std::size_t l = 0; l < gat_layers; ++l) {
      if (gat_out_dim(l) % heads != 0) {
        throw std::invalid_argument("model: GAT widths must be divisible by the head count");
      }
    }
  }
}

ModelWeights::ModelWeights(const ModelArch& arch) {
  arch.validate();
  if (arch.encoder == EncoderKind::kGat) {
    gat.resize(arch.gat_layers);
    for (std::size_t l = 0; l < arch.gat_layers; ++l) {
      const std::size_t head_dim = arch.gat_out_dim(l) / arch.heads;
      for (std::size_t h = 0; h < arch.heads; ++h) {
        const std::string prefix = "gat." + std::to_string(l) + ".head" + std::to_string(h);
        GatHead gh;
        gh.W = add(prefix + ".W", arch.gat_in_dim(l), head_dim);
        gh.a = add(prefix + ".a", 1, 2 * head_dim);
        gat[l].push_back(gh);
      }
    }
  } else {
    mlp_encoder.push_back({add("enc.0.W", arch.n_params, arch.hidden_dim), add("enc.0.b", 1, arch.hidden_dim)});
    mlp_encoder.push_back({add("enc.1.W", arch.hidden_dim, arch.latent_dim), add("enc.1.b", 1, arch.latent_dim)});
  }
  decoder.push_back({add("dec.0.W", arch.latent_dim, arch.decoder_hidden), add("dec.0.b", 1, arch.decoder_hidden)});
  decoder.push_back({add("dec.1.W", arch.decoder_hidden, arch.n_params), add("dec.1.b", 1, arch.n_params)});
  metric_head.push_back({add("head.0.W", arch.latent_dim, arch.head_hidden), add("head.0.b", 1, arch.head_hidden)});
  metric_head.push_back({add("head.1.W", arch.head_hidden, 2), add("head.1.b", 1, 2)});
  std::size_t total = 0;
  for (const auto& s : slots_) total += s.size();
  data_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

std::size_t ModelWeights::add(std::string name, std::size_t rows, std::size_t cols) {
  std::size_t offset = 0;
  if (!slots_.empty()) offset = slots_.back().offset + slots_.back().size();
  slots_.push_back({std::move(name), rows, cols, offset});
  return slots_.size() - 1;
}

Eigen::Map<RowMatrix> ModelWeights::mat(std::size_t i) {
  const auto& s = slots_[i];
  return {data_.data() + s.offset, static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols)};
}
Eigen::Map<const RowMatrix> ModelWeights::mat(std::size_t i) const {
  const auto& s = slots_[i];
  return {data_.data() + s.offset, static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols)};
}
Eigen::Map<Eigen::RowVectorXd> ModelWeights::vec(std::size_t i) {
  const auto& s = slots_[i];
  return {data_.data() + s.offset, static_cast<Eigen::Index>(s.size())};
}
Eigen::Map<const Eigen::RowVectorXd> ModelWeights::vec(std::size_t i) const {
  const auto& s = slots_[i];
  return {data_.data() + s.offset, static_cast<Eigen::Index>(s.size())};
}

ModelWeights ModelWeights::zeros_like() const {
  ModelWeights out = *this;
  out.data_.setZero();
  return out;
}

NodeContext make_node_context(const RelationalGraph& graph, Eigen::MatrixXd semantic) {
  const std::size_t n = graph.node_count();
  if (static_cast<std::size_t>(semantic.rows()) != n) {
    throw std::invalid_argument("node context: semantic feature rows must match node count");
  }
  NodeContext ctx;
  ctx.offsets.reserve(n + 1);
  ctx.offsets.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    ctx.indices.push_back(i);
    for (std::size_t j : graph.neighbors(i)) ctx.indices.push_back(j);
    ctx.offsets.push_back(ctx.indices.size());
  }
  ctx.semantic = std::move(semantic);
  return ctx;
}

Eigen::MatrixXd reduce_embeddings(const EmbeddingSet& emb, std::size_t dim) {
  const Eigen::Index n = static_cast<Eigen::Index>(emb.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(dim));
  if (dim == 0) return out;
  const Eigen::MatrixXd centered = emb.vectors().rowwise() - emb.vectors().colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd scores = svd.matrixU() * svd.singularValues().asDiagonal();
  const Eigen::Index k = std::min<Eigen::Index>(static_cast<Eigen::Index>(dim), scores.cols());
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index r = 1; r < n; ++r)
      if (std::abs(scores(r, c)) > std::abs(scores(arg, c)) + 1e-12) arg = r;
    const double sign = scores(arg, c) < 0.0 ? -1.0 : 1.0;
    out.col(c) = sign * scores.col(c);
  }
  return out;
}

Eigen::Vector2d MetricStats::normalize(double tps, double latency) const {
  return {(tps - tps_mean) / tps_std, (latency - latency_mean) / latency_std};
}

std::pair<double, double> MetricStats::denormalize(const Eigen::Vector2d& y) const {
  return {y[0] * tps_std + tps_mean, y[1] * latency_std + latency_mean};
}

MetricStats compute_metric_stats(const std::vector<ConfigSample>& data) {
  if (data.empty()) throw std::invalid_argument("metric stats: empty dataset");
  MetricStats s;
  const double n = static_cast<double>(data.size());
  for (const auto& d : data) {
    s.tps_mean += d.tps / n;
    s.latency_mean += d.latency / n;
  }
  double vt = 0.0, vl = 0.0;
  for (const auto& d : data) {
    vt += (d.tps - s.tps_mean) * (d.tps - s.tps_mean) / n;
    vl += (d.latency - s.latency_mean) * (d.latency - s.latency_mean) / n;
  }
  s.tps_std = vt > 0.0 ? std::sqrt(vt) : 1.0;
  s.latency_std = vl > 0.0 ? std::sqrt(vl) : 1.0;
  s.lower = s.upper = s.normalize(data[0].tps, data[0].latency);
  for (const auto& d : data) {
    const Eigen::Vector2d y = s.normalize(d.tps, d.latency);
    s.lower = s.lower.cwiseMin(y);
    s.upper = s.upper.cwiseMax(y);
  }
  return s;
}

Model init_model(const ModelArch& arch, const ParameterSpace& space, const RelationalGraph& graph,
                 std::uint64_t seed) {
  if (graph.node_count() != space.dimension() || arch.n_params != space.dimension()) {
    throw std::invalid_argument("init_model: graph, space and architecture disagree on parameter count");
  }
  Model m;
  m.arch = arch;
  m.space = space;
  Eigen::MatrixXd semantic =
      graph.has_embeddings()
          ? reduce_embeddings(graph.embeddings(), arch.semantic_dim)
          : Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(graph.node_count()),
                                  static_cast<Eigen::Index>(arch.semantic_dim));
  m.nodes = make_node_context(graph, std::move(semantic));
  m.edges = graph.edges();
  m.graph_hash = graph.structure_hash();
  m.weights = ModelWeights(arch);

  Rng rng(seed);
  for (std::size_t i = 0; i < m.weights.slots().size(); ++i) {
    const auto& s = m.weights.slot(i);
    const bool is_bias = s.name.size() >= 2 && s.name.compare(s.name.size() - 2, 2, ".b") == 0;
    if (is_bias) continue;
    const bool is_attention = s.name.size() >= 2 && s.name.compare(s.name.size() - 2, 2, ".a") == 0;
    const double fan_in = is_attention ? static_cast<double>(s.cols) : static_cast<double>(s.rows);
    const double fan_out = is_attention ? 1.0 : static_cast<double>(s.cols);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    auto v = m.weights.vec(i);
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.uniform(-limit, limit);
  }
  return m;
}

RowMatrix node_features(const Model& model, const Eigen::VectorXd& x_norm) {
  const auto n = static_cast<Eigen::Index>(model.nodes.size());
  if (x_norm.size() != n) throw std::invalid_argument("node_features: configuration length mismatch");
  RowMatrix h(n, 1 + model.nodes.semantic.cols());
  h.col(0) = x_norm;
  h.rightCols(model.nodes.semantic.cols()) = model.nodes.semantic;
  return h;
}

namespace detail {
namespace {

void dense(const ModelWeights& w, const ModelWeights::Dense& layer, const Eigen::RowVectorXd& in, DenseCache& c) {
  c.input = in;
  c.pre.noalias() = in * w.mat(layer.W);
  c.pre += w.vec(layer.b);
}

}  // namespace

Eigen::RowVectorXd encode_cached(const Model& model, const Eigen::VectorXd& x_norm, ForwardCache& cache) {
  const auto& w = model.weights;
  if (model.arch.encoder == EncoderKind::kGat) {
    cache.gat.resize(w.gat.size());
    RowMatrix h = node_features(model, x_norm);
    for (std::size_t l = 0; l < w.gat.size(); ++l) {
      gat_layer(l == 0 ? h : cache.gat[l - 1].output, model.nodes, w, l, cache.gat[l]);
    }
    cache.z = cache.gat.back().output.colwise().mean();
  } else {
    if (static_cast<std::size_t>(x_norm.size()) != model.arch.n_params) {
      throw std::invalid_argument("encode: configuration length mismatch");
    }
    cache.mlp_encoder.resize(2);
    dense(w, w.mlp_encoder[0], x_norm.transpose(), cache.mlp_encoder[0]);
    cache.mlp_encoder[0].out = cache.mlp_encoder[0].pre.unaryExpr([](double v) { return elu(v); });
    dense(w, w.mlp_encoder[1], cache.mlp_encoder[0].out, cache.mlp_encoder[1]);
    cache.mlp_encoder[1].out = cache.mlp_encoder[1].pre.unaryExpr([](double v) { return elu(v); });
    cache.z = cache.mlp_encoder[1].out;
  }
  return cache.z;
}

void decode_cached(const Model& model, const Eigen::RowVectorXd& z, std::vector<DenseCache>& c) {
  const auto& w = model.weights;
  c.resize(2);
  dense(w, w.decoder[0], z, c[0]);
  c[0].out = c[0].pre.unaryExpr([](double v) { return elu(v); });
  dense(w, w.decoder[1], c[0].out, c[1]);
  c[1].out = c[1].pre.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

void head_cached(const Model& model, const Eigen::RowVectorXd& z, std::vector<DenseCache>& c) {
  const auto& w = model.weights;
  c.resize(2);
  dense(w, w.metric_head[0], z, c[0]);
  c[0].out = c[0].pre.unaryExpr([](double v) { return elu(v); });
  dense(w, w.metric_head[1], c[0].out, c[1]);
  c[1].out = c[1].pre;
}

void forward(const Model& model, const Eigen::VectorXd& x_norm, ForwardCache& cache) {
  encode_cached(model, x_norm, cache);
  decode_cached(model, cache.z, cache.decoder);
  head_cached(model, cache.z, cache.head);
}

}  // namespace detail

Eigen::VectorXd encode(const Model& model, const Eigen::VectorXd& x_norm) {
  detail::ForwardCache cache;
  return detail::encode_cached(model, x_norm, cache).transpose();
}

Eigen::VectorXd decode(const Model& model, const Eigen::VectorXd& z) {
  if (static_cast<std::size_t>(z.size()) != model.arch.latent_dim) {
    throw std::invalid_argument("decode: latent dimension mismatch");
  }
  std::vector<detail::DenseCache> c;
  detail::decode_cached(model, z.transpose(), c);
  return c[1].out.transpose();
}

Eigen::Vector2d predict_metrics(const Model& model, const Eigen::VectorXd& z) {
  if (static_cast<std::size_t>(z.size()) != model.arch.latent_dim) {
    throw std::invalid_argument("predict_metrics: latent dimension mismatch");
  }
  std::vector<detail::DenseCache> c;
  detail::head_cached(model, z.transpose(), c);
  return c[1].out.transpose().cwiseMax(model.stats.lower).cwiseMin(model.stats.upper);
}

}  // namespace reltune
