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

#include "reltune/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "reltune/csv.hpp"

namespace reltune {
namespace {

void check_labels(const LabeledScores& s) {
  if (s.scores.size() != s.labels.size()) throw std::invalid_argument("labeled scores: length mismatch");
  for (int l : s.labels) {
    if (l != 0 && l != 1) throw std::invalid_argument("labeled scores: labels must be 0 or 1");
  }
  for (double v : s.scores) {
    if (std::isnan(v)) throw std::invalid_argument("labeled scores: NaN score");
  }
}

std::vector<std::size_t> descending_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

}  // namespace

std::size_t LabeledScores::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

double auroc(const LabeledScores& s) {
  check_labels(s);
  const double pos = static_cast<double>(s.positives());
  const double neg = static_cast<double>(s.negatives());
  if (pos == 0.0 || neg == 0.0) throw std::invalid_argument("auroc: both classes required");
  std::vector<std::size_t> idx(s.scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && s.scores[idx[j]] == s.scores[idx[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (s.labels[idx[k]] == 1) rank_sum += avg_rank;
    }
    i = j;
  }
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double auprc(const LabeledScores& s) {
  check_labels(s);
  const double pos = static_cast<double>(s.positives());
  if (pos == 0.0) throw std::invalid_argument("auprc: no positives");
  const auto idx = descending_order(s.scores);
  double tp = 0.0, fp = 0.0, ap = 0.0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    double group_pos = 0.0;
    while (j < idx.size() && s.scores[idx[j]] == s.scores[idx[i]]) {
      if (s.labels[idx[j]] == 1) {
        group_pos += 1.0;
      } else {
        fp += 1.0;
      }
      ++j;
    }
    tp += group_pos;
    if (group_pos > 0.0) ap += (tp / (tp + fp)) * (group_pos / pos);
    i = j;
  }
  return ap;
}

std::vector<TrendBin> binned_trend(std::span<const double> xs, std::span<const double> ys, std::size_t n_bins) {
  if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("binned_trend: need equal, nonempty inputs");
  if (n_bins == 0) throw std::invalid_argument("binned_trend: n_bins must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) {
    const double sum = std::accumulate(ys.begin(), ys.end(), 0.0);
    return {TrendBin{lo, sum / static_cast<double>(ys.size()), ys.size()}};
  }
  const double width = (hi - lo) / static_cast<double>(n_bins);
  std::vector<double> sums(n_bins, 0.0);
  std::vector<std::size_t> counts(n_bins, 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto b = std::min(static_cast<std::size_t>((xs[i] - lo) / width), n_bins - 1);
    sums[b] += ys[i];
    ++counts[b];
  }
  std::vector<TrendBin> bins(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    bins[b].center = lo + (static_cast<double>(b) + 0.5) * width;
    bins[b].count = counts[b];
    bins[b].mean = counts[b] ? sums[b] / static_cast<double>(counts[b]) : std::numeric_limits<double>::quiet_NaN();
  }
  return bins;
}

std::string trend_csv(const std::vector<TrendBin>& bins) {
  std::string out = "center,mean,count\n";
  for (const auto& b : bins) {
    out += csv::join({csv::format_double(b.center), b.count ? csv::format_double(b.mean) : "", std::to_string(b.count)});
    out += '\n';
  }
  return out;
}

std::vector<ConvergenceRow> convergence_report(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) throw std::invalid_argument("convergence_report: no curves");
  const std::size_t len = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != len) throw std::invalid_argument("convergence_report: curves differ in length");
  }
  std::vector<ConvergenceRow> rows(len);
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0, mn = curves[0][t], mx = curves[0][t];
    for (const auto& c : curves) {
      sum += c[t];
      mn = std::min(mn, c[t]);
      mx = std::max(mx, c[t]);
    }
    rows[t] = {t + 1, sum / static_cast<double>(curves.size()), mn, mx};
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_report(const std::vector<TuningHistory>& histories) {
  std::vector<std::vector<double>> curves;
  curves.reserve(histories.size());
  for (const auto& h : histories) curves.push_back(h.best_curve());
  return convergence_report(curves);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "iter,mean,min,max\n";
  for (const auto& r : rows) {
    out += csv::join({std::to_string(r.iter), csv::format_double(r.mean), csv::format_double(r.min),
                      csv::format_double(r.max)});
    out += '\n';
  }
  return out;
}

std::size_t iterations_to_fraction(std::span<const double> curve, double fraction) {
  if (curve.empty()) throw std::invalid_argument("iterations_to_fraction: empty curve");
  const double target = curve.front() + fraction * (curve.back() - curve.front());
  for (std::size_t t = 0; t < curve.size(); ++t) {
    if (curve[t] >= target) return t;
  }
  return curve.size() - 1;
}

}  // namespace reltune
