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
#include <limits>
#include <stdexcept>

#include "gnn_internal.hpp"
#include "reltune/gnn.hpp"

namespace reltune {

double elu(double x) { return x > 0.0 ? x : std::expm1(x); }

std::vector<double> attention_coefficients(const Eigen::VectorXd& h_self, const Eigen::MatrixXd& h_neighbours,
                                           const Eigen::MatrixXd& W, const Eigen::VectorXd& a) {
  if (h_neighbours.rows() == 0) throw std::invalid_argument("attention_coefficients: empty neighbourhood");
  if (W.rows() != h_self.size() || W.rows() != h_neighbours.cols() || a.size() != 2 * W.cols()) {
    throw std::invalid_argument("attention_coefficients: shape mismatch");
  }
  const Eigen::Index f = W.cols();
  const Eigen::VectorXd wi = W.transpose() * h_self;
  const double source = a.head(f).dot(wi);
  std::vector<double> logits(static_cast<std::size_t>(h_neighbours.rows()));
  double max_logit = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < h_neighbours.rows(); ++k) {
    const Eigen::VectorXd wj = W.transpose() * h_neighbours.row(k).transpose();
    const double e = detail::leaky(source + a.tail(f).dot(wj));
    logits[static_cast<std::size_t>(k)] = e;
    max_logit = std::max(max_logit, e);
  }
  double total = 0.0;
  for (double& e : logits) {
    e = std::exp(e - max_logit);
    total += e;
  }
  for (double& e : logits) e /= total;
  return logits;
}

RowMatrix gat_layer_forward(const RowMatrix& features, const NodeContext& nodes, const ModelWeights& w,
                            std::size_t layer) {
  detail::LayerCache cache;
  detail::gat_layer(features, nodes, w, layer, cache);
  return cache.output;
}

namespace detail {

void gat_layer(const RowMatrix& input, const NodeContext& nodes, const ModelWeights& w, std::size_t layer,
               LayerCache& cache) {
  if (layer >= w.gat.size()) throw std::invalid_argument("gat_layer: no such layer");
  const auto& heads = w.gat[layer];
  const std::size_t n = nodes.size();
  if (static_cast<std::size_t>(input.rows()) != n) throw std::invalid_argument("gat_layer: node count mismatch");
  const std::size_t in_dim = w.slot(heads[0].W).rows;
  if (static_cast<std::size_t>(input.cols()) != in_dim) {
    throw std::invalid_argument("gat_layer: feature dimension mismatch");
  }
  const Eigen::Index f = static_cast<Eigen::Index>(w.slot(heads[0].W).cols);
  cache.input = input;
  cache.heads.resize(heads.size());
  cache.aggregate.setZero(static_cast<Eigen::Index>(n), f * static_cast<Eigen::Index>(heads.size()));

  for (std::size_t h = 0; h < heads.size(); ++h) {
    HeadCache& hc = cache.heads[h];
    const auto W = w.mat(heads[h].W);
    const auto a = w.vec(heads[h].a);
    hc.transformed.noalias() = input * W;
    hc.source = hc.transformed * a.head(f).transpose();
    hc.target = hc.transformed * a.tail(f).transpose();
    hc.logit.resize(nodes.indices.size());
    hc.alpha.resize(nodes.indices.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t begin = nodes.offsets[i];
      const std::size_t end = nodes.offsets[i + 1];
      double max_e = -std::numeric_limits<double>::infinity();
      for (std::size_t k = begin; k < end; ++k) {
        const double pre = hc.source[static_cast<Eigen::Index>(i)] +
                           hc.target[static_cast<Eigen::Index>(nodes.indices[k])];
        hc.logit[k] = pre;
        max_e = std::max(max_e, leaky(pre));
      }
      double total = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        hc.alpha[k] = std::exp(leaky(hc.logit[k]) - max_e);
        total += hc.alpha[k];
      }
      auto agg = cache.aggregate.row(static_cast<Eigen::Index>(i)).segment(static_cast<Eigen::Index>(h) * f, f);
      for (std::size_t k = begin; k < end; ++k) {
        hc.alpha[k] /= total;
        agg.noalias() += hc.alpha[k] * hc.transformed.row(static_cast<Eigen::Index>(nodes.indices[k]));
      }
    }
  }
  cache.output = cache.aggregate.unaryExpr([](double v) { return elu(v); });
}

RowMatrix gat_layer_backward(const RowMatrix& d_output, const LayerCache& cache, const NodeContext& nodes,
                             const ModelWeights& w, std::size_t layer, ModelWeights& grad, bool need_input_grad) {
  const auto& heads = w.gat[layer];
  const std::size_t n = nodes.size();
  const Eigen::Index f = static_cast<Eigen::Index>(w.slot(heads[0].W).cols);
  RowMatrix d_agg = d_output.array() * cache.aggregate.unaryExpr([](double v) { return elu_grad_from_pre(v); }).array();
  RowMatrix d_input;
  if (need_input_grad) d_input.setZero(cache.input.rows(), cache.input.cols());

  for (std::size_t h = 0; h < heads.size(); ++h) {
    const HeadCache& hc = cache.heads[h];
    const auto W = w.mat(heads[h].W);
    const auto a = w.vec(heads[h].a);
    RowMatrix d_transformed = RowMatrix::Zero(static_cast<Eigen::Index>(n), f);
    Eigen::VectorXd d_source = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd d_target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    std::vector<double> d_alpha;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t begin = nodes.offsets[i];
      const std::size_t end = nodes.offsets[i + 1];
      const auto g_i = d_agg.row(static_cast<Eigen::Index>(i)).segment(static_cast<Eigen::Index>(h) * f, f);
      d_alpha.assign(end - begin, 0.0);
      double weighted = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const auto j = static_cast<Eigen::Index>(nodes.indices[k]);
        d_transformed.row(j).noalias() += hc.alpha[k] * g_i;
        d_alpha[k - begin] = g_i.dot(hc.transformed.row(j));
        weighted += hc.alpha[k] * d_alpha[k - begin];
      }
      for (std::size_t k = begin; k < end; ++k) {
        const double d_logit = hc.alpha[k] * (d_alpha[k - begin] - weighted) * leaky_grad(hc.logit[k]);
        d_source[static_cast<Eigen::Index>(i)] += d_logit;
        d_target[static_cast<Eigen::Index>(nodes.indices[k])] += d_logit;
      }
    }
    auto ga = grad.vec(heads[h].a);
    ga.head(f).noalias() += (hc.transformed.transpose() * d_source).transpose();
    ga.tail(f).noalias() += (hc.transformed.transpose() * d_target).transpose();
    d_transformed.noalias() += d_source * a.head(f);
    d_transformed.noalias() += d_target * a.tail(f);
    grad.mat(heads[h].W).noalias() += cache.input.transpose() * d_transformed;
    if (need_input_grad) d_input.noalias() += d_transformed * W.transpose();
  }
  return d_input;
}

}  // namespace detail
}  // namespace reltune
