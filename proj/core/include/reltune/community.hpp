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
#include <string>
#include <vector>

#include "reltune/relgraph.hpp"

namespace reltune {

/// Community assignment, one label per node. Labels are compared by equality.
struct Partition {
  std::vector<std::size_t> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t community_count() const;
  bool operator==(const Partition&) const = default;
};

/// Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j), summed over all
/// ordered pairs including i == j. Throws std::invalid_argument for an
/// edgeless graph or a partition of the wrong length.
double modularity(const RelationalGraph& g, const Partition& p);

/// Louvain community detection at resolution 1. Node visit order is shuffled
/// from `seed`; equal gains go to the lowest community id. The result is
/// finished with node-level moves on the original graph, so no single-node move
/// increases Q. Throws std::invalid_argument for an edgeless graph.
Partition louvain(const RelationalGraph& g, std::uint64_t seed);

enum class NmiNormalization { kSqrt, kArithmetic, kMax };

/// Normalized mutual information with natural-log entropies. Two
/// single-cluster partitions give 1.0; a single-cluster partition against a
/// multi-cluster one gives 0.0.
double nmi(const Partition& p, const Partition& q,
           NmiNormalization norm = NmiNormalization::kSqrt);

/// Adjusted Rand index in pair-count form. Requires at least two elements.
/// When the index is undefined (max == expected) returns 1.0 for identical
/// groupings and 0.0 otherwise.
double ari(const Partition& p, const Partition& q);

/// Groups names by the token before their first underscore. Ids are assigned
/// in order of first appearance; names without an underscore are singletons.
Partition subsystem_partition(const std::vector<std::string>& names);

struct GraphQualityReport {
  double tau = 0.0;
  double modularity = 0.0;  // NaN when the graph is edgeless
  double nmi = 0.0;
  double ari = 0.0;
  std::size_t edge_count = 0;
  std::size_t community_count = 0;
  bool edgeless = false;
};

/// Builds the graph at every tau, runs Louvain and scores it against the
/// subsystem partition. Edgeless thresholds are reported with `edgeless` set
/// and the all-singletons partition in place of Louvain.
std::vector<GraphQualityReport> threshold_sweep(const EmbeddingSet& emb,
                                                std::span<const double> taus,
                                                std::uint64_t seed);

/// CSV with header `tau,edges,communities,modularity,nmi,ari`.
std::string quality_reports_csv(const std::vector<GraphQualityReport>& reports);

}  // namespace reltune
