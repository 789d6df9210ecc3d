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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "reltune/gnn.hpp"

namespace reltune {

struct TrainConfig {
  double lambda_recon = 1.0;
  double lambda_metric = 1.0;
  double learning_rate = 1e-3;
  std::size_t epochs = 300;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  EncoderKind encoder = EncoderKind::kGat;

  std::size_t latent_dim = 32;
  std::size_t hidden_dim = 32;
  std::size_t gat_layers = 2;
  std::size_t heads = 1;
  std::size_t semantic_dim = 8;
  std::size_t decoder_hidden = 64;
  std::size_t head_hidden = 64;

  ModelArch arch(std::size_t n_params) const;
  /// Throws std::invalid_argument when the lambdas are negative or both zero.
  void validate() const;
};

/// Normalized training pair.
struct Example {
  Eigen::VectorXd x;  // in [0,1]^n
  Eigen::Vector2d y;  // z-scored metrics
};

std::vector<Example> make_examples(const Model& model, const std::vector<ConfigSample>& data);

/// lambda_recon |x - x_hat|^2 + lambda_metric |y - y_hat|^2.
double loss(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat, const Eigen::Vector2d& y,
            const Eigen::Vector2d& y_hat, const TrainConfig& cfg);

/// Mean loss over examples.
double dataset_loss(const Model& model, std::span<const Example> batch, const TrainConfig& cfg);

/// Analytic gradient of the mean batch loss with respect to every weight.
/// Throws std::runtime_error if the loss is not finite.
ModelWeights gradient(const Model& model, std::span<const Example> batch, const TrainConfig& cfg,
                      double* batch_loss = nullptr);

struct TrainResult {
  Model model;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> epoch_loss;  // mean minibatch loss per epoch
};

/// Adam (beta1 0.9, beta2 0.999) over shuffled minibatches. Deterministic given
/// cfg.seed. Throws std::invalid_argument for fewer than two samples or a graph
/// whose node count differs from the space; std::runtime_error on divergence.
TrainResult train(const std::vector<ConfigSample>& data, const RelationalGraph& graph, const ParameterSpace& space,
                  const TrainConfig& cfg);

}  // namespace reltune
