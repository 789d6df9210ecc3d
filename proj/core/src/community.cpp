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

#include "reltune/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "reltune/csv.hpp"
#include "reltune/rng.hpp"

namespace reltune {
namespace {

constexpr double kGainEps = 1e-12;

// Weighted undirected graph used across Louvain levels. `loops[i]` is the
// total weight of edges internal to super-node i (each counted once).
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;
  std::vector<double> loops;
  std::vector<double> degree;
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }

  void finalize() {
    degree.assign(size(), 0.0);
    two_m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      double k = 2.0 * loops[i];
      for (auto& [j, w] : adj[i]) k += w;
      degree[i] = k;
      two_m += k;
    }
  }
};

WeightedGraph from_relational(const RelationalGraph& g) {
  WeightedGraph wg;
  wg.adj.resize(g.node_count());
  wg.loops.assign(g.node_count(), 0.0);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    for (std::size_t j : g.neighbors(i)) wg.adj[i].emplace_back(j, 1.0);
  wg.finalize();
  return wg;
}

// Repeated local moves until a full pass changes nothing. Returns true if any
// node moved.
bool local_moves(const WeightedGraph& g, std::vector<std::size_t>& comm, const std::vector<std::size_t>& order) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];

  bool any_move = false;
  std::map<std::size_t, double> links;  // ordered so ties resolve to the lowest id
  while (true) {
    bool moved = false;
    for (std::size_t i : order) {
      const double ki = g.degree[i];
      if (ki == 0.0) continue;
      const std::size_t own = comm[i];
      links.clear();
      links[own] = 0.0;
      for (auto& [j, w] : g.adj[i]) links[comm[j]] += w;
      tot[own] -= ki;
      const double own_gain = links[own] - tot[own] * ki / g.two_m;
      std::size_t best = own;
      double best_gain = own_gain;
      for (auto& [c, w] : links) {
        if (c == own) continue;
        const double gain = w - tot[c] * ki / g.two_m;
        if (gain > best_gain + kGainEps) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        moved = true;
        any_move = true;
      }
    }
    if (!moved) break;
  }
  return any_move;
}

// Renumbers labels contiguously by first appearance.
std::size_t relabel(std::vector<std::size_t>& labels) {
  std::unordered_map<std::size_t, std::size_t> remap;
  for (auto& l : labels) {
    auto [it, inserted] = remap.try_emplace(l, remap.size());
    l = it->second;
  }
  return remap.size();
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& comm, std::size_t k) {
  WeightedGraph out;
  out.adj.resize(k);
  out.loops.assign(k, 0.0);
  std::vector<std::map<std::size_t, double>> acc(k);
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.loops[comm[i]] += g.loops[i];
    for (auto& [j, w] : g.adj[i]) {
      if (comm[i] == comm[j]) {
        if (i < j) out.loops[comm[i]] += w;
      } else {
        acc[comm[i]][comm[j]] += w;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c)
    for (auto& [d, w] : acc[c]) out.adj[c].emplace_back(d, w);
  out.finalize();
  return out;
}

std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  return order;
}

void check_same_length(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw std::invalid_argument("partitions have different lengths");
  if (p.size() == 0) throw std::invalid_argument("partitions are empty");
}

struct Contingency {
  std::vector<double> row_sums;
  std::vector<double> col_sums;
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  double n = 0.0;
};

Contingency contingency(const Partition& p, const Partition& q) {
  Contingency c;
  auto a = p.labels;
  auto b = q.labels;
  const std::size_t ka = relabel(a);
  const std::size_t kb = relabel(b);
  c.row_sums.assign(ka, 0.0);
  c.col_sums.assign(kb, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.row_sums[a[i]] += 1.0;
    c.col_sums[b[i]] += 1.0;
    c.cells[{a[i], b[i]}] += 1.0;
  }
  c.n = static_cast<double>(a.size());
  return c;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts)
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  return h;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

std::size_t Partition::community_count() const {
  auto copy = labels;
  std::sort(copy.begin(), copy.end());
  return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
}

double modularity(const RelationalGraph& g, const Partition& p) {
  if (p.size() != g.node_count()) throw std::invalid_argument("modularity: partition length mismatch");
  if (g.edge_count() == 0) throw std::invalid_argument("modularity: undefined for an edgeless graph");
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  // Per-community totals: sum of intra edges (both directions) and of degrees.
  std::unordered_map<std::size_t, double> intra, tot;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    tot[p.labels[i]] += static_cast<double>(g.degree(i));
    for (std::size_t j : g.neighbors(i))
      if (p.labels[i] == p.labels[j]) intra[p.labels[i]] += 1.0;
  }
  // Sum in label order so the result does not depend on hash iteration order.
  std::vector<std::size_t> keys;
  for (auto& [c, t] : tot) keys.push_back(c);
  std::sort(keys.begin(), keys.end());
  double q = 0.0;
  for (std::size_t c : keys) {
    q += intra[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
  }
  return q;
}

Partition louvain(const RelationalGraph& g, std::uint64_t seed) {
  if (g.edge_count() == 0) throw std::invalid_argument("louvain: graph has no edges");
  Rng rng(seed);
  const WeightedGraph base = from_relational(g);

  std::vector<std::size_t> membership(g.node_count());
  std::iota(membership.begin(), membership.end(), 0);

  WeightedGraph level = base;
  for (int depth = 0; depth < 64; ++depth) {
    std::vector<std::size_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0);
    const bool moved = local_moves(level, comm, shuffled_order(level.size(), rng));
    if (!moved) break;
    const std::size_t k = relabel(comm);
    for (auto& m : membership) m = comm[m];
    if (k == level.size()) break;
    level = aggregate(level, comm, k);
  }

  // Node-level polish on the original graph.
  local_moves(base, membership, shuffled_order(base.size(), rng));
  relabel(membership);
  return Partition{std::move(membership)};
}

double nmi(const Partition& p, const Partition& q, NmiNormalization norm) {
  check_same_length(p, q);
  const Contingency c = contingency(p, q);
  const double hp = entropy(c.row_sums, c.n);
  const double hq = entropy(c.col_sums, c.n);
  if (hp == 0.0 && hq == 0.0) return 1.0;
  if (hp == 0.0 || hq == 0.0) return 0.0;
  double mi = 0.0;
  for (auto& [ij, nij] : c.cells) {
    mi += (nij / c.n) * std::log(c.n * nij / (c.row_sums[ij.first] * c.col_sums[ij.second]));
  }
  double denom = 0.0;
  switch (norm) {
    case NmiNormalization::kSqrt: denom = std::sqrt(hp * hq); break;
    case NmiNormalization::kArithmetic: denom = 0.5 * (hp + hq); break;
    case NmiNormalization::kMax: denom = std::max(hp, hq); break;
  }
  return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const Partition& p, const Partition& q) {
  check_same_length(p, q);
  if (p.size() < 2) throw std::invalid_argument("ari: needs at least two elements");
  const Contingency c = contingency(p, q);
  double index = 0.0;
  for (auto& [ij, nij] : c.cells) index += choose2(nij);
  double sum_a = 0.0, sum_b = 0.0;
  for (double a : c.row_sums) sum_a += choose2(a);
  for (double b : c.col_sums) sum_b += choose2(b);
  const double expected = sum_a * sum_b / choose2(c.n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return index == max_index ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

Partition subsystem_partition(const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::size_t> ids;
  Partition p;
  p.labels.reserve(names.size());
  std::size_t next = 0;
  for (const auto& name : names) {
    const auto pos = name.find('_');
    if (pos == std::string::npos) {
      p.labels.push_back(next++);
      continue;
    }
    auto [it, inserted] = ids.try_emplace(name.substr(0, pos), next);
    if (inserted) ++next;
    p.labels.push_back(it->second);
  }
  return p;
}

std::vector<GraphQualityReport> threshold_sweep(const EmbeddingSet& emb, std::span<const double> taus,
                                                std::uint64_t seed) {
  const Partition reference = subsystem_partition(emb.names());
  std::vector<GraphQualityReport> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    const RelationalGraph g = build_adjacency(emb, tau);
    GraphQualityReport r;
    r.tau = tau;
    r.edge_count = g.edge_count();
    Partition found;
    if (g.edge_count() == 0) {
      r.edgeless = true;
      r.modularity = std::numeric_limits<double>::quiet_NaN();
      found.labels.resize(g.node_count());
      std::iota(found.labels.begin(), found.labels.end(), 0);
    } else {
      found = louvain(g, seed);
      r.modularity = modularity(g, found);
    }
    r.community_count = found.community_count();
    r.nmi = nmi(found, reference);
    r.ari = found.size() >= 2 ? ari(found, reference) : 1.0;
    out.push_back(r);
  }
  return out;
}

std::string quality_reports_csv(const std::vector<GraphQualityReport>& reports) {
  std::string out = "tau,edges,communities,modularity,nmi,ari\n";
  for (const auto& r : reports) {
    out += csv::join({csv::format_double(r.tau), std::to_string(r.edge_count), std::to_string(r.community_count),
                      csv::format_double(r.modularity), csv::format_double(r.nmi), csv::format_double(r.ari)});
    out += '\n';
  }
  return out;
}

}  // namespace reltune
