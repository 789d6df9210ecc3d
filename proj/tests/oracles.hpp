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
// Straightforward reference implementations used to check the library. They
// favour obviousness over speed and share no code with core/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reltune/rng.hpp"

namespace oracle {

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

// Sum over all ordered pairs (i, j), i == j included.
inline double modularity(std::size_t n, const Edges& edges, const std::vector<std::size_t>& labels) {
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (auto [i, j] : edges) A[i][j] = A[j][i] = 1.0;
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += A[i][j];
    two_m += k[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) q += A[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

inline double entropy(const std::map<std::size_t, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) h -= c / n * std::log(c / n);
  return h;
}

// sqrt-normalized NMI from the contingency table.
inline double nmi(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
  const double n = static_cast<double>(p.size());
  std::map<std::size_t, double> cp, cq;
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp[p[i]] += 1;
    cq[q[i]] += 1;
    joint[{p[i], q[i]}] += 1;
  }
  if (cp.size() == 1 && cq.size() == 1) return 1.0;
  if (cp.size() == 1 || cq.size() == 1) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) mi += c / n * std::log(c * n / (cp[key.first] * cq[key.second]));
  return mi / std::sqrt(entropy(cp, n) * entropy(cq, n));
}

// Adjusted Rand index by enumerating every unordered node pair.
inline double ari(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) {
  double both = 0, only_p = 0, only_q = 0, total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const bool sp = p[i] == p[j], sq = q[i] == q[j];
      both += sp && sq;
      only_p += sp && !sq;
      only_q += !sp && sq;
      total += 1;
    }
  }
  const double pairs_p = both + only_p, pairs_q = both + only_q;
  const double expected = pairs_p * pairs_q / total;
  const double max_index = 0.5 * (pairs_p + pairs_q);
  if (max_index == expected) return only_p == 0 && only_q == 0 ? 1.0 : 0.0;
  return (both - expected) / (max_index - expected);
}

inline double auroc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      pairs += 1;
    }
  }
  return wins / pairs;
}

// Average precision over every distinct score threshold, highest first.
inline double auprc(const std::vector<double>& s, const std::vector<int>& y) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  double positives = 0;
  for (int v : y) positives += v;
  double ap = 0.0, prev_recall = 0.0;
  for (double t : thresholds) {
    double tp = 0, predicted = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        predicted += 1;
        tp += y[i];
      }
    }
    const double recall = tp / positives;
    ap += (recall - prev_recall) * (tp / predicted);
    prev_recall = recall;
  }
  return ap;
}

inline double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI); }
inline double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::sqrt(2.0)); }

inline double expected_improvement(double mu, double sigma, double best) {
  if (sigma <= 0.0) return std::max(0.0, mu - best);
  const double u = (mu - best) / sigma;
  return (mu - best) * normal_cdf(u) + sigma * normal_pdf(u);
}

struct DensePosterior {
  double mean;
  double var;
};

// Builds the Gram matrix element by element and solves with a full-pivot LU.
inline DensePosterior gp_posterior(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lengthscale,
                                   double sf2, double noise, double offset, const Eigen::VectorXd& q) {
  const Eigen::Index n = X.rows();
  auto k = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double d2 = 0.0;
    for (Eigen::Index c = 0; c < a.size(); ++c) d2 += (a[c] - b[c]) * (a[c] - b[c]);
    return sf2 * std::exp(-d2 / (2.0 * lengthscale * lengthscale));
  };
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = k(X.row(i).transpose(), X.row(j).transpose());
    K(i, i) += noise;
    ks[i] = k(X.row(i).transpose(), q);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  const Eigen::VectorXd alpha = lu.solve((y.array() - offset).matrix());
  const Eigen::VectorXd v = lu.solve(ks);
  return {offset + ks.dot(alpha), sf2 - ks.dot(v)};
}

inline double leaky(double x) { return x > 0.0 ? x : 0.2 * x; }
inline double elu(double x) { return x > 0.0 ? x : std::exp(x) - 1.0; }

// Single-head attention weights with explicit loops.
inline std::vector<double> attention(const std::vector<double>& h_self, const std::vector<std::vector<double>>& nbrs,
                                     const std::vector<std::vector<double>>& W, const std::vector<double>& a) {
  const std::size_t in = W.size(), out = W[0].size();
  auto transform = [&](const std::vector<double>& h) {
    std::vector<double> r(out, 0.0);
    for (std::size_t o = 0; o < out; ++o)
      for (std::size_t i = 0; i < in; ++i) r[o] += h[i] * W[i][o];
    return r;
  };
  const auto wi = transform(h_self);
  std::vector<double> e;
  for (const auto& h : nbrs) {
    const auto wj = transform(h);
    double s = 0.0;
    for (std::size_t o = 0; o < out; ++o) s += a[o] * wi[o] + a[out + o] * wj[o];
    e.push_back(std::exp(leaky(s)));
  }
  double total = 0.0;
  for (double v : e) total += v;
  for (double& v : e) v /= total;
  return e;
}

inline std::vector<std::size_t> random_labels(reltune::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> l(n);
  for (auto& v : l) v = rng.index(k);
  return l;
}

}  // namespace oracle
