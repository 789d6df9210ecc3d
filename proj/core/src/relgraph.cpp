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

#include "reltune/relgraph.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "reltune/csv.hpp"

namespace reltune {

EmbeddingSet::EmbeddingSet(std::vector<std::string> names, Eigen::MatrixXd vectors)
    : names_(std::move(names)), vectors_(std::move(vectors)) {
  if (names_.empty()) throw std::invalid_argument("embedding set is empty");
  if (static_cast<Eigen::Index>(names_.size()) != vectors_.rows()) {
    throw std::invalid_argument("embedding set: name count does not match row count");
  }
  if (vectors_.cols() == 0) throw std::invalid_argument("embedding set: zero dimension");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!seen.insert(names_[i]).second) {
      throw std::invalid_argument("embedding set: duplicate name '" + names_[i] + "'");
    }
    const double norm = vectors_.row(static_cast<Eigen::Index>(i)).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::invalid_argument("embedding set: row '" + names_[i] + "' has zero or non-finite norm");
    }
  }
}

EmbeddingSet parse_embeddings_csv(const std::string& text) {
  auto table = csv::parse(text);
  if (table.header.size() < 2 || table.header[0] != "name") {
    throw std::runtime_error("embedding csv: header must be name,e0,...");
  }
  const std::size_t d = table.header.size() - 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (table.header[k + 1] != "e" + std::to_string(k)) {
      throw std::runtime_error("embedding csv: unexpected column '" + table.header[k + 1] + "'");
    }
  }
  std::vector<std::string> names;
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    names.push_back(table.rows[r][0]);
    for (std::size_t k = 0; k < d; ++k) {
      vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          csv::parse_double(table.rows[r][k + 1]);
    }
  }
  return EmbeddingSet(std::move(names), std::move(vectors));
}

EmbeddingSet read_embeddings_csv(const std::filesystem::path& path) {
  return parse_embeddings_csv(csv::read_text(path));
}

std::string embeddings_to_csv(const EmbeddingSet& emb) {
  std::string out = "name";
  for (std::size_t k = 0; k < emb.dim(); ++k) out += ",e" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out += emb.names()[i];
    for (std::size_t k = 0; k < emb.dim(); ++k) {
      out += ',';
      out += csv::format_double(emb.vectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    out += '\n';
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw std::invalid_argument("cosine_similarity: zero-norm vector");
  const double s = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(s, -1.0, 1.0);
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return cosine_similarity(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                           std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

RelationalGraph::RelationalGraph(EmbeddingSet embeddings, double tau, std::vector<std::uint8_t> adjacency)
    : n_(embeddings.size()), tau_(tau), embeddings_(std::move(embeddings)), adjacency_(std::move(adjacency)) {
  if (adjacency_.size() != n_ * n_) throw std::invalid_argument("adjacency size mismatch");
  index();
}

RelationalGraph RelationalGraph::from_edges(std::size_t n,
                                            const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  RelationalGraph g;
  g.n_ = n;
  g.tau_ = std::nan("");
  g.adjacency_.assign(n * n, 0);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n) throw std::invalid_argument("from_edges: node index out of range");
    if (i == j) throw std::invalid_argument("from_edges: self loops are not stored");
    g.adjacency_[i * n + j] = 1;
    g.adjacency_[j * n + i] = 1;
  }
  g.index();
  return g;
}

void RelationalGraph::index() {
  neighbors_.assign(n_, {});
  edge_count_ = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (adjacency_[i * n_ + i]) throw std::invalid_argument("adjacency has a self loop");
    for (std::size_t j = 0; j < n_; ++j) {
      if (adjacency_[i * n_ + j] != adjacency_[j * n_ + i]) {
        throw std::invalid_argument("adjacency is not symmetric");
      }
      if (adjacency_[i * n_ + j]) {
        neighbors_[i].push_back(j);
        if (j > i) ++edge_count_;
      }
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> RelationalGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (has_edge(i, j)) out.emplace_back(i, j);
  return out;
}

std::uint64_t RelationalGraph::structure_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  for (int s = 0; s < 64; s += 8) mix((n_ >> s) & 0xFF);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) mix(adjacency_[i * n_ + j]);
  return h;
}

RelationalGraph build_adjacency(const EmbeddingSet& emb, double tau) {
  if (emb.size() == 0) throw std::invalid_argument("build_adjacency: empty embedding set");
  if (!(tau >= -1.0 && tau <= 1.0)) throw std::invalid_argument("build_adjacency: tau must lie in [-1, 1]");
  const std::size_t n = emb.size();
  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd ei = emb.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (cosine_similarity(ei, emb.row(j)) >= tau) {
        adj[i * n + j] = 1;
        adj[j * n + i] = 1;
      }
    }
  }
  return RelationalGraph(emb, tau, std::move(adj));
}

}  // namespace reltune
