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

#include <span>
#include <string>
#include <vector>

#include "reltune/hbo.hpp"

namespace reltune {

struct LabeledScores {
  std::vector<double> scores;
  std::vector<int> labels;  // 1 = positive, 0 = negative

  std::size_t positives() const;
  std::size_t negatives() const { return labels.size() - positives(); }
};

/// Mann-Whitney AUC with average ranks (ties count one half).
/// Throws std::invalid_argument unless both classes are present.
double auroc(const LabeledScores& s);

/// Average precision over a descending sweep; each tie group is one operating
/// point. Throws std::invalid_argument without positives.
double auprc(const LabeledScores& s);

struct TrendBin {
  double center = 0.0;
  double mean = 0.0;  // NaN when count == 0
  std::size_t count = 0;
};

/// Equal-width bins over [min(xs), max(xs)]; a single bin when all xs are
/// equal. Throws std::invalid_argument for empty or mismatched input or
/// n_bins == 0.
std::vector<TrendBin> binned_trend(std::span<const double> xs, std::span<const double> ys, std::size_t n_bins);

/// CSV `center,mean,count` (empty bins have an empty mean field).
std::string trend_csv(const std::vector<TrendBin>& bins);

struct ConvergenceRow {
  std::size_t iter = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per-iteration aggregate of equal-length curves.
std::vector<ConvergenceRow> convergence_report(const std::vector<std::vector<double>>& curves);
/// Aggregates best-so-far hybrid scores.
std::vector<ConvergenceRow> convergence_report(const std::vector<TuningHistory>& histories);

/// CSV `iter,mean,min,max`.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// First index t with curve[t] >= curve[0] + fraction * (curve.back() - curve[0]).
std::size_t iterations_to_fraction(std::span<const double> curve, double fraction = 0.95);

}  // namespace reltune
