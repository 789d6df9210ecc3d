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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reltune {

/// Per-parameter semantic embeddings, one row per parameter.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  /// Throws std::invalid_argument on duplicate names, ragged/empty rows or a
  /// zero-norm row.
  EmbeddingSet(std::vector<std::string> names, Eigen::MatrixXd vectors);

  std::size_t size() const { return names_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  const std::vector<std::string>& names() const { return names_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  Eigen::VectorXd row(std::size_t i) const { return vectors_.row(static_cast<Eigen::Index>(i)); }

 private:
  std::vector<std::string> names_;
  Eigen::MatrixXd vectors_;
};

/// CSV with header `name,e0,...,e{d-1}`.
EmbeddingSet read_embeddings_csv(const std::filesystem::path& path);
EmbeddingSet parse_embeddings_csv(const std::string& text);
std::string embeddings_to_csv(const EmbeddingSet& emb);

/// a.b / (|a||b|). Throws std::invalid_argument on dimension mismatch or a
/// zero-norm input.
double cosine_similarity(std::span<const double> a, std::span<const double> b);
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Undirected parameter graph. The stored adjacency never has self loops.
class RelationalGraph {
 public:
  RelationalGraph() = default;
  RelationalGraph(EmbeddingSet embeddings, double tau, std::vector<std::uint8_t> adjacency);

  /// Graph from an explicit edge list; used by tests and by checkpoints.
  static RelationalGraph from_edges(std::size_t n,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t node_count() const { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j] != 0; }
  std::size_t degree(std::size_t i) const { return neighbors_[i].size(); }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_[i]; }
  std::size_t edge_count() const { return edge_count_; }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  double tau() const { return tau_; }
  const EmbeddingSet& embeddings() const { return embeddings_; }
  bool has_embeddings() const { return embeddings_.size() == n_ && n_ > 0; }

  /// FNV-1a over node count and upper-triangular adjacency bits.
  std::uint64_t structure_hash() const;

 private:
  void index();

  std::size_t n_ = 0;
  double tau_ = 0.0;
  EmbeddingSet embeddings_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::size_t edge_count_ = 0;
};

/// A_ij = 1 iff cos(e_i, e_j) >= tau for i != j. tau must lie in [-1, 1].
RelationalGraph build_adjacency(const EmbeddingSet& emb, double tau);

inline constexpr double kDefaultTau = 0.75;

}  // namespace reltune
