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

#include "reltune/hbo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "json_util.hpp"
#include "reltune/csv.hpp"
#include "reltune/rng.hpp"

namespace reltune {
namespace {

constexpr std::uint64_t kWarmStream = 0x7761726d;

double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

Eigen::VectorXd uniform_in(const SearchBox& box, Rng& rng) {
  Eigen::VectorXd z(box.lower.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = rng.uniform(box.lower[k], box.upper[k]);
  return z;
}

Eigen::VectorXd batch_ei(const GpState& gp, const Eigen::MatrixXd& Z, double f_best) {
  Eigen::VectorXd mu, sd;
  gp.posterior(Z, mu, sd);
  Eigen::VectorXd ei(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) ei[i] = expected_improvement(mu[i], sd[i], f_best);
  return ei;
}

struct Scorer {
  const Model& model;
  const Eigen::MatrixXd& good;
  double sigma;
  const HboConfig& cfg;
  double cap;

  TuningStep operator()(const Eigen::VectorXd& z) const {
    TuningStep s;
    s.z = z;
    s.metric = std::min(cap, f_metric(model, z, cfg.alpha));
    s.affinity = f_affinity(z, good, sigma);
    s.hybrid = s.metric + cfg.gamma * s.affinity;
    return s;
  }
};

GpState refit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const SearchBox& box) {
  GpHyperSpec spec;
  spec.auto_select = true;
  spec.scale = box.diagonal() > 0.0 ? box.diagonal() : 1.0;
  return gp_fit(X, y, spec, y.mean());
}

}  // namespace

void HboConfig::validate() const {
  if (!(alpha >= 0.0) || !(gamma >= 0.0)) throw std::invalid_argument("hbo: alpha and gamma must be >= 0");
  if (sigma_rbf && !(*sigma_rbf > 0.0)) throw std::invalid_argument("hbo: sigma_rbf must be > 0");
  if (!(good_quantile > 0.0 && good_quantile <= 1.0)) throw std::invalid_argument("hbo: good_quantile must be in (0, 1]");
  if (warm_start == 0) throw std::invalid_argument("hbo: warm_start must be >= 1");
  if (refit_every == 0 || candidates == 0 || refine_starts == 0) {
    throw std::invalid_argument("hbo: refit_every, candidates and refine_starts must be >= 1");
  }
  if (!(refine_step > 0.0 && refine_step <= 1.0)) throw std::invalid_argument("hbo: refine_step must be in (0, 1]");
}

bool SearchBox::contains(const Eigen::VectorXd& z) const {
  return z.size() == lower.size() && (z.array() >= lower.array()).all() && (z.array() <= upper.array()).all();
}

SearchBox SearchBox::bounding(const Eigen::MatrixXd& Z) {
  if (Z.rows() == 0) throw std::invalid_argument("SearchBox: no points");
  return {Z.colwise().minCoeff().transpose(), Z.colwise().maxCoeff().transpose()};
}

double expected_improvement(double mu, double sigma, double f_best) {
  if (sigma < 0.0) throw std::invalid_argument("expected_improvement: sigma < 0");
  const double diff = mu - f_best;
  if (sigma < 1e-12) return std::max(0.0, diff);
  const double u = diff / sigma;
  return std::max(0.0, diff * normal_cdf(u) + sigma * normal_pdf(u));
}

double f_metric(const Eigen::Vector2d& y_norm, double alpha) { return y_norm[0] - alpha * y_norm[1]; }

double f_metric(const Model& model, const Eigen::VectorXd& z, double alpha) {
  return f_metric(predict_metrics(model, z), alpha);
}

double f_affinity(const Eigen::VectorXd& z, const Eigen::MatrixXd& Z_good, double sigma) {
  if (Z_good.rows() == 0) throw std::invalid_argument("f_affinity: empty good set");
  if (!(sigma > 0.0)) throw std::invalid_argument("f_affinity: sigma must be > 0");
  if (Z_good.cols() != z.size()) throw std::invalid_argument("f_affinity: dimension mismatch");
  const double inv = -0.5 / (sigma * sigma);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < Z_good.rows(); ++k) sum += std::exp((Z_good.row(k).transpose() - z).squaredNorm() * inv);
  return sum / static_cast<double>(Z_good.rows());
}

double median_bandwidth(const Eigen::MatrixXd& Z_good) {
  const Eigen::Index m = Z_good.rows();
  if (m < 2) throw std::invalid_argument("median_bandwidth: need at least two points");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) d.push_back((Z_good.row(i) - Z_good.row(j)).norm());
  }
  std::sort(d.begin(), d.end());
  const std::size_t h = d.size() / 2;
  const double med = d.size() % 2 == 1 ? d[h] : 0.5 * (d[h - 1] + d[h]);
  return med > 0.0 ? med : 1.0;
}

Eigen::MatrixXd encode_dataset(const Model& model, const std::vector<ConfigSample>& data) {
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(model.arch.latent_dim));
  for (std::size_t i = 0; i < data.size(); ++i) {
    Z.row(static_cast<Eigen::Index>(i)) = encode(model, normalize_config(model.space, data[i].x)).transpose();
  }
  return Z;
}

std::vector<std::size_t> good_indices(const Model& model, const std::vector<ConfigSample>& data, double quantile,
                                      double alpha) {
  if (data.empty()) throw std::invalid_argument("select_good_set: empty dataset");
  if (!(quantile > 0.0 && quantile <= 1.0)) throw std::invalid_argument("select_good_set: quantile must be in (0, 1]");
  std::vector<double> score(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    score[i] = f_metric(model.stats.normalize(data[i].tps, data[i].latency), alpha);
  }
  std::vector<double> sorted = score;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto keep = static_cast<std::size_t>(
      std::max(1.0, std::ceil(quantile * static_cast<double>(data.size()) - 1e-9)));
  const double cutoff = sorted[std::min(keep, data.size()) - 1];
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (score[i] >= cutoff) idx.push_back(i);
  }
  return idx;
}

Eigen::MatrixXd select_good_set(const Model& model, const std::vector<ConfigSample>& data, double quantile,
                                double alpha) {
  const auto idx = good_indices(model, data, quantile, alpha);
  Eigen::MatrixXd Z(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(model.arch.latent_dim));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    Z.row(static_cast<Eigen::Index>(r)) = encode(model, normalize_config(model.space, data[idx[r]].x)).transpose();
  }
  return Z;
}

double hybrid_score(const Model& model, const Eigen::VectorXd& z, const Eigen::MatrixXd& Z_good,
                    const HboConfig& cfg, double sigma) {
  return f_metric(model, z, cfg.alpha) + cfg.gamma * f_affinity(z, Z_good, sigma);
}

Eigen::VectorXd propose_next(const GpState& gp, const SearchBox& box, double f_best, std::uint64_t seed,
                             const HboConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(box.dimension());
  if (d == 0 || static_cast<std::size_t>(gp.inputs().cols()) != box.dimension()) {
    throw std::invalid_argument("propose_next: box and GP dimensions differ");
  }
  const Eigen::VectorXd width = box.upper - box.lower;
  if ((width.array() < 0.0).any()) throw std::invalid_argument("propose_next: box lower > upper");
  if ((width.array() == 0.0).all()) return box.lower;

  Rng rng(seed);
  const auto m = static_cast<Eigen::Index>(cfg.candidates);
  Eigen::MatrixXd C(m, d);
  for (Eigen::Index i = 0; i < m; ++i) C.row(i) = uniform_in(box, rng).transpose();
  const Eigen::VectorXd ei = batch_ei(gp, C, f_best);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return ei[a] > ei[b]; });

  std::vector<Eigen::Index> active;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (width[k] > 0.0) active.push_back(k);
  }
  Eigen::VectorXd best = C.row(order[0]).transpose();
  double best_ei = ei[order[0]];
  const std::size_t starts = std::min(cfg.refine_starts, order.size());
  Eigen::MatrixXd N(2, d);
  for (std::size_t s = 0; s < starts; ++s) {
    Eigen::VectorXd cur = C.row(order[s]).transpose();
    double cur_ei = ei[order[s]];
    std::size_t idle = 0;
    for (std::size_t step = 0; step < cfg.refine_steps && idle < active.size(); ++step) {
      const Eigen::Index k = active[step % active.size()];
      const double h = cfg.refine_step * width[k];
      N.row(0) = cur.transpose();
      N.row(1) = cur.transpose();
      N(0, k) = std::min(cur[k] + h, box.upper[k]);
      N(1, k) = std::max(cur[k] - h, box.lower[k]);
      const Eigen::VectorXd nei = batch_ei(gp, N, f_best);
      Eigen::Index arg = 0;
      const double top = nei.maxCoeff(&arg);
      if (top > cur_ei) {
        cur = N.row(arg).transpose();
        cur_ei = top;
        idle = 0;
      } else {
        ++idle;
      }
    }
    if (cur_ei > best_ei) {
      best = cur;
      best_ei = cur_ei;
    }
  }
  return best;
}

std::vector<double> TuningHistory::best_curve() const {
  std::vector<double> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.best_so_far);
  return out;
}

TuningHistory hbo_run(const Model& model, const std::vector<ConfigSample>& data, const HboConfig& cfg) {
  cfg.validate();
  if (data.empty()) throw std::invalid_argument("hbo_run: empty dataset");
  const Eigen::MatrixXd Z_all = encode_dataset(model, data);
  const SearchBox box = SearchBox::bounding(Z_all);

  const auto good = good_indices(model, data, cfg.good_quantile, cfg.alpha);
  Eigen::MatrixXd Z_good(static_cast<Eigen::Index>(good.size()), Z_all.cols());
  for (std::size_t r = 0; r < good.size(); ++r) Z_good.row(static_cast<Eigen::Index>(r)) = Z_all.row(static_cast<Eigen::Index>(good[r]));
  const double sigma = cfg.sigma_rbf ? *cfg.sigma_rbf : median_bandwidth(Z_good);

  TuningHistory h;
  h.sigma_rbf = sigma;
  h.good_count = good.size();
  h.metric_cap = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < Z_all.rows(); ++i)
    h.metric_cap = std::max(h.metric_cap, f_metric(model, Eigen::VectorXd(Z_all.row(i).transpose()), cfg.alpha));
  const Scorer score{model, Z_good, sigma, cfg, h.metric_cap};
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Rng warm(mix_seed(cfg.seed, kWarmStream));
  Eigen::MatrixXd X(static_cast<Eigen::Index>(cfg.warm_start), Z_all.cols());
  Eigen::VectorXd y(X.rows());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cfg.warm_start; ++i) {
    TuningStep s = score(uniform_in(box, warm));
    s.gp_mu = s.gp_sigma = nan;
    X.row(static_cast<Eigen::Index>(i)) = s.z.transpose();
    y[static_cast<Eigen::Index>(i)] = s.hybrid;
    if (s.hybrid > best) {
      best = s.hybrid;
      h.best_z = s.z;
    }
    s.best_so_far = best;
    h.warm_start.push_back(std::move(s));
  }

  GpState gp = refit(X, y, box);
  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    if (t > 0 && t % cfg.refit_every == 0) gp = refit(gp.inputs(), gp.targets(), box);
    const Eigen::VectorXd z = propose_next(gp, box, best, mix_seed(cfg.seed, t + 1), cfg);
    const Posterior post = gp.posterior(z);
    TuningStep s = score(z);
    s.gp_mu = post.mean;
    s.gp_sigma = post.stddev;
    if (s.hybrid > best) {
      best = s.hybrid;
      h.best_z = s.z;
    }
    s.best_so_far = best;
    gp.add_observation(z, s.hybrid);
    h.steps.push_back(std::move(s));
  }

  h.best_score = best;
  h.best_x_norm = decode(model, h.best_z);
  h.best_config = denormalize_config(model.space, h.best_x_norm);
  return h;
}

TuningHistory vbo_run(const Model& model, const std::vector<ConfigSample>& data, const HboConfig& cfg) {
  HboConfig v = cfg;
  v.gamma = 0.0;
  return hbo_run(model, data, v);
}

std::string history_csv(const TuningHistory& h) {
  std::string out = "iter,hybrid,metric,affinity,gp_mu,gp_sigma,best_so_far\n";
  for (std::size_t t = 0; t < h.steps.size(); ++t) {
    const auto& s = h.steps[t];
    out += csv::join({std::to_string(t + 1), csv::format_double(s.hybrid), csv::format_double(s.metric),
                      csv::format_double(s.affinity), csv::format_double(s.gp_mu), csv::format_double(s.gp_sigma),
                      csv::format_double(s.best_so_far)});
    out += '\n';
  }
  return out;
}

std::string config_json(const ParameterSpace& space, const std::vector<double>& x) {
  if (x.size() != space.dimension()) throw std::invalid_argument("config_json: length mismatch");
  detail::json j = detail::json::object();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (space[i].kind == ParamKind::kContinuous) {
      j[space[i].name] = x[i];
    } else {
      j[space[i].name] = static_cast<long long>(std::llround(x[i]));
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace reltune
