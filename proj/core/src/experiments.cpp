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

#include "reltune/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "reltune/csv.hpp"
#include "reltune/rng.hpp"

namespace reltune {

double true_score(const WorkloadSpec& w, const MetricStats& stats, std::span<const double> x, double alpha) {
  const Measurement m = evaluate_config(w, x);
  const Eigen::Vector2d y = stats.normalize(m.tps, m.latency);
  return y[0] - alpha * y[1];
}

AffinityReport affinity_validation(const Model& model, const std::vector<ConfigSample>& data, std::size_t k,
                                   const HboConfig& cfg, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("affinity_validation: k must be >= 1");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(mix_seed(seed, 0x73706c6974));
  rng.shuffle(idx);
  const std::size_t n_train = data.size() - data.size() / 5;
  const std::size_t n_test = data.size() - n_train;
  if (n_test < 2 * k || n_train == 0) {
    throw std::invalid_argument("affinity_validation: dataset too small for k = " + std::to_string(k));
  }
  std::vector<ConfigSample> train, test;
  for (std::size_t r = 0; r < data.size(); ++r) (r < n_train ? train : test).push_back(data[idx[r]]);

  AffinityReport rep;
  const Eigen::MatrixXd Z_good = select_good_set(model, train, cfg.good_quantile, cfg.alpha);
  rep.good_count = static_cast<std::size_t>(Z_good.rows());
  rep.sigma_rbf = cfg.sigma_rbf ? *cfg.sigma_rbf : median_bandwidth(Z_good);

  std::vector<double> perf(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) perf[i] = f_metric(model.stats.normalize(test[i].tps, test[i].latency), cfg.alpha);
  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return perf[a] > perf[b]; });

  std::vector<double> xs, ys;
  const auto add = [&](std::size_t i, int label) {
    const Eigen::VectorXd z = encode(model, normalize_config(model.space, test[i].x));
    const double a = f_affinity(z, Z_good, rep.sigma_rbf);
    rep.labeled.scores.push_back(a);
    rep.labeled.labels.push_back(label);
    xs.push_back(a);
    ys.push_back(perf[i]);
  };
  for (std::size_t r = 0; r < k; ++r) add(order[r], 1);
  for (std::size_t r = 0; r < k; ++r) add(order[order.size() - 1 - r], 0);
  rep.auroc = auroc(rep.labeled);
  rep.auprc = auprc(rep.labeled);
  rep.bins = binned_trend(xs, ys, 10);
  return rep;
}

std::string affinity_scores_csv(const AffinityReport& r) {
  std::string out = "affinity,label\n";
  for (std::size_t i = 0; i < r.labeled.scores.size(); ++i) {
    out += csv::format_double(r.labeled.scores[i]) + "," + std::to_string(r.labeled.labels[i]) + "\n";
  }
  return out;
}

std::vector<double> true_score_curve(const WorkloadSpec& w, const Model& model, const TuningHistory& h, double alpha) {
  const auto score_of = [&](const Eigen::VectorXd& z) {
    return true_score(w, model.stats, denormalize_config(model.space, decode(model, z)), alpha);
  };
  double best = -std::numeric_limits<double>::infinity();
  double current = 0.0;
  for (const auto& s : h.warm_start) {
    if (s.hybrid > best) {
      best = s.hybrid;
      current = score_of(s.z);
    }
  }
  std::vector<double> curve{current};
  for (const auto& s : h.steps) {
    if (s.hybrid > best) {
      best = s.hybrid;
      current = score_of(s.z);
    }
    curve.push_back(current);
  }
  return curve;
}

AblationCell summarize_runs(bool rge, bool hbo, const WorkloadSpec& w, const MetricStats& stats,
                            const std::vector<TuningHistory>& runs, double alpha) {
  if (runs.empty()) throw std::invalid_argument("summarize_runs: no runs");
  AblationCell cell{rge, hbo, 0.0, 0.0, 0.0};
  for (const auto& h : runs) {
    const Measurement m = evaluate_config(w, h.best_config);
    cell.tps += m.tps;
    cell.latency += m.latency;
    cell.score += true_score(w, stats, h.best_config, alpha);
  }
  const auto n = static_cast<double>(runs.size());
  cell.tps /= n;
  cell.latency /= n;
  cell.score /= n;
  return cell;
}

std::vector<AblationCell> ablation_grid(const WorkloadSpec& w, const std::vector<ConfigSample>& data,
                                        const std::vector<SeedModels>& models, const HboConfig& cfg) {
  if (models.empty()) throw std::invalid_argument("ablation_grid: no seeds");
  const std::size_t n = models.size();
  // runs[arm][seed], arm = 2 * (rge off) + (hbo off)
  std::vector<std::vector<TuningHistory>> runs(4, std::vector<TuningHistory>(n));
  parallel_for(4 * n, thread_cap(), [&](std::size_t job) {
    const std::size_t arm = job / n, s = job % n;
    const Model& model = arm < 2 ? models[s].gat : models[s].mlp;
    HboConfig c = cfg;
    c.seed = models[s].seed;
    runs[arm][s] = arm % 2 == 0 ? hbo_run(model, data, c) : vbo_run(model, data, c);
  });
  const MetricStats stats = compute_metric_stats(data);
  std::vector<AblationCell> cells;
  for (std::size_t arm = 0; arm < 4; ++arm) cells.push_back(summarize_runs(arm < 2, arm % 2 == 0, w, stats, runs[arm], cfg.alpha));
  return cells;
}

std::string ablation_csv(const std::vector<AblationCell>& cells) {
  std::string out = "rge,hbo,tps,latency\n";
  for (const auto& c : cells) {
    out += csv::join({c.rge ? "on" : "off", c.hbo ? "on" : "off", csv::format_double(c.tps), csv::format_double(c.latency)});
    out += '\n';
  }
  return out;
}

std::size_t thread_cap() {
  const char* env = std::getenv("RELTUNE_THREADS");
  if (env == nullptr) return 1;
  std::size_t v = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) return 1;
  return v;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::vector<std::exception_ptr> errors(count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace reltune
