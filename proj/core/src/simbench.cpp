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

#include "reltune/simbench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json_util.hpp"
#include "reltune/csv.hpp"
#include "reltune/rng.hpp"

namespace reltune {
namespace {

struct Profile {
  double base_tps;
  double base_latency;
  double main_scale;
  double interaction_scale;
};

Profile profile(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kRwBalanced: return {4000.0, 8.0, 1.0, 1.0};
    case WorkloadKind::kReadHeavy: return {9000.0, 3.0, 0.8, 0.7};
    case WorkloadKind::kScanHeavy: return {1200.0, 25.0, 1.2, 1.0};
    case WorkloadKind::kAnalytic: return {150.0, 200.0, 1.0, 1.3};
  }
  throw std::invalid_argument("unknown workload kind");
}

// MySQL-flavoured knobs; sizes in MB unless noted.
const std::array<ParamSpec, 28> kCatalog{{
    {"innodb_buffer_pool_size", 128, 16384, ParamKind::kContinuous},
    {"innodb_buffer_pool_instances", 1, 64, ParamKind::kInteger},
    {"innodb_io_capacity", 100, 20000, ParamKind::kInteger},
    {"innodb_log_file_size", 48, 4096, ParamKind::kContinuous},
    {"innodb_doublewrite", 0, 1, ParamKind::kBoolean},
    {"innodb_thread_concurrency", 0, 128, ParamKind::kInteger},
    {"optimizer_search_depth", 0, 62, ParamKind::kInteger},
    {"table_open_cache", 64, 16384, ParamKind::kInteger},
    {"sort_buffer_size", 0.03, 64, ParamKind::kContinuous},
    {"join_buffer_size", 0.125, 64, ParamKind::kContinuous},
    {"tmp_table_size", 1, 1024, ParamKind::kContinuous},
    {"thread_cache_size", 0, 512, ParamKind::kInteger},
    {"innodb_max_dirty_pages_pct", 0, 99, ParamKind::kContinuous},
    {"innodb_adaptive_hash_index", 0, 1, ParamKind::kBoolean},
    {"innodb_read_io_threads", 1, 64, ParamKind::kInteger},
    {"innodb_write_io_threads", 1, 64, ParamKind::kInteger},
    {"innodb_lru_scan_depth", 128, 8192, ParamKind::kInteger},
    {"innodb_flush_log_at_trx_commit", 0, 2, ParamKind::kInteger},
    {"optimizer_prune_level", 0, 1, ParamKind::kBoolean},
    {"table_definition_cache", 400, 8192, ParamKind::kInteger},
    {"max_connections", 50, 4000, ParamKind::kInteger},
    {"max_heap_table_size", 1, 1024, ParamKind::kContinuous},
    {"read_buffer_size", 0.008, 16, ParamKind::kContinuous},
    {"read_rnd_buffer_size", 0.008, 16, ParamKind::kContinuous},
    {"binlog_cache_size", 0.004, 32, ParamKind::kContinuous},
    {"sync_binlog", 0, 1000, ParamKind::kInteger},
    {"query_prealloc_size", 0.008, 1, ParamKind::kContinuous},
    {"net_buffer_length", 0.001, 1, ParamKind::kContinuous},
}};

ParameterSpace workload_space(std::size_t n) {
  std::vector<ParamSpec> params;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < kCatalog.size()) {
      params.push_back(kCatalog[i]);
    } else {
      params.push_back({"knob_" + std::to_string(i), 0.0, 1.0, ParamKind::kContinuous});
    }
  }
  return ParameterSpace(std::move(params));
}

double min_contribution(const MainEffect& m) {
  double lo = std::min(m(0.0), m(1.0));
  if (m.shape == MainShape::kQuadratic && m.center >= 0.0 && m.center <= 1.0) lo = std::min(lo, m(m.center));
  return lo;
}

double raw_tps_factor(const WorkloadSpec& w, const Eigen::VectorXd& u) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.main_effects.size(); ++i) sum += w.main_effects[i](u[static_cast<Eigen::Index>(i)]);
  for (const auto& g : w.interactions) sum += g(u[static_cast<Eigen::Index>(g.i)], u[static_cast<Eigen::Index>(g.j)]);
  return 1.0 + sum;
}

Eigen::MatrixXd random_orthonormal(std::size_t d, Rng& rng) {
  Eigen::MatrixXd G(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < G.cols(); ++c) {
    for (Eigen::Index r = 0; r < G.rows(); ++r) G(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  return qr.householderQ() * Eigen::MatrixXd::Identity(G.rows(), G.cols());
}

}  // namespace

const char* to_string(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kRwBalanced: return "rw-balanced";
    case WorkloadKind::kReadHeavy: return "read-heavy";
    case WorkloadKind::kScanHeavy: return "scan-heavy";
    case WorkloadKind::kAnalytic: return "analytic";
  }
  return "?";
}

WorkloadKind parse_workload_kind(const std::string& s) {
  for (auto k : {WorkloadKind::kRwBalanced, WorkloadKind::kReadHeavy, WorkloadKind::kScanHeavy, WorkloadKind::kAnalytic}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown workload kind '" + s + "'");
}

const char* to_string(MainShape shape) {
  switch (shape) {
    case MainShape::kQuadratic: return "quadratic";
    case MainShape::kRamp: return "ramp";
    case MainShape::kLinear: return "linear";
  }
  return "?";
}

MainShape parse_main_shape(const std::string& s) {
  for (auto k : {MainShape::kQuadratic, MainShape::kRamp, MainShape::kLinear}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown main-effect shape '" + s + "'");
}

double MainEffect::raw(double u) const {
  switch (shape) {
    case MainShape::kQuadratic: return weight * (1.0 - 4.0 * (u - center) * (u - center));
    case MainShape::kRamp: return weight * std::min(u / center, 1.0);
    case MainShape::kLinear: return weight * u;
  }
  return 0.0;
}

void WorkloadSpec::validate() const {
  const std::size_t n = space.dimension();
  if (n == 0) throw std::invalid_argument("workload: empty parameter space");
  if (main_effects.size() != n || latency_penalty.size() != n) {
    throw std::invalid_argument("workload: main_effects and latency_penalty need one entry per parameter");
  }
  for (const auto& m : main_effects) {
    if (m.shape == MainShape::kRamp && !(m.center > 0.0)) throw std::invalid_argument("workload: ramp knee must be > 0");
  }
  for (const auto& g : interactions) {
    if (g.i >= n || g.j >= n || g.i == g.j) throw std::invalid_argument("workload: invalid interaction indices");
  }
  for (auto i : inert) {
    if (i >= n) throw std::invalid_argument("workload: invalid inert index");
  }
  for (double p : latency_penalty) {
    if (!(p >= 0.0)) throw std::invalid_argument("workload: latency penalties must be >= 0");
  }
  if (!(base_tps > 0.0) || !(base_latency > 0.0)) throw std::invalid_argument("workload: base_tps and base_latency must be > 0");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("workload: noise_std must be >= 0");
}

WorkloadSpec make_workload(WorkloadKind kind, std::size_t n_params, std::uint64_t seed) {
  if (n_params < 2) throw std::invalid_argument("make_workload: need at least two parameters");
  const Profile prof = profile(kind);
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(kind) + 1));

  WorkloadSpec w;
  w.kind = kind;
  w.seed = seed;
  w.space = workload_space(n_params);
  w.base_tps = prof.base_tps;
  w.base_latency = prof.base_latency;
  w.main_effects.resize(n_params);
  w.latency_penalty.assign(n_params, 0.0);

  std::vector<std::size_t> order(n_params);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  const std::size_t pairs = (n_params + 3) / 4;
  const std::size_t inert = std::min(pairs, n_params - 2 * pairs);

  std::vector<bool> is_inert(n_params, false), in_pair(n_params, false);
  for (std::size_t p = 0; p < pairs; ++p) {
    const std::size_t a = order[2 * p], b = order[2 * p + 1];
    in_pair[a] = in_pair[b] = true;
    w.interactions.push_back({a, b, rng.uniform(0.2, 0.35) * prof.interaction_scale});
  }
  for (std::size_t k = 0; k < inert; ++k) {
    is_inert[order[2 * pairs + k]] = true;
    w.inert.push_back(order[2 * pairs + k]);
  }
  std::sort(w.inert.begin(), w.inert.end());

  for (std::size_t i = 0; i < n_params; ++i) {
    MainEffect& m = w.main_effects[i];
    if (is_inert[i]) {
      m = {MainShape::kLinear, rng.uniform(0.001, 0.004), 0.5};
      continue;
    }
    const double weight = rng.uniform(0.08, 0.25) * prof.main_scale * (in_pair[i] ? 0.6 : 1.0);
    if (rng.uniform() < 0.5) {
      m = {MainShape::kQuadratic, weight, rng.uniform(0.6, 0.95)};
    } else {
      m = {MainShape::kRamp, weight, rng.uniform(0.35, 0.8)};
    }
  }

  std::vector<std::size_t> active;
  for (std::size_t i : order) {
    if (!is_inert[i]) active.push_back(i);
  }
  const std::size_t penalized = std::min(active.size(), pairs);
  for (std::size_t k = 0; k < penalized; ++k) w.latency_penalty[active[active.size() - 1 - k]] = rng.uniform(0.1, 0.3) * prof.base_latency;

  // Keep the factor (1 + sum) >= 0.4 everywhere.
  double lower = 0.0;
  for (const auto& m : w.main_effects) lower += min_contribution(m);
  for (const auto& g : w.interactions) lower -= g.gain;
  if (lower < -0.6) {
    const double s = 0.6 / -lower;
    for (auto& m : w.main_effects) m.weight *= s;
    for (auto& g : w.interactions) g.gain *= s;
  }
  w.validate();
  return w;
}

std::vector<std::pair<std::size_t, std::size_t>> planted_edges(const WorkloadSpec& w) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (const auto& g : w.interactions) e.emplace_back(std::min(g.i, g.j), std::max(g.i, g.j));
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

Measurement evaluate_config(const WorkloadSpec& w, std::span<const double> x, bool noisy, std::uint64_t seed) {
  const Eigen::VectorXd u = normalize_config(w.space, x);
  double tps = w.base_tps * raw_tps_factor(w, u);
  if (noisy && w.noise_std > 0.0) {
    Rng rng(seed);
    tps *= 1.0 + w.noise_std * rng.normal();
  }
  tps = std::max(tps, 1e-3 * w.base_tps);
  double latency = w.base_latency * w.base_tps / tps;
  for (std::size_t i = 0; i < w.latency_penalty.size(); ++i) latency += w.latency_penalty[i] * u[static_cast<Eigen::Index>(i)];
  return {tps, latency};
}

std::vector<double> reference_config(const WorkloadSpec& w) {
  std::vector<double> x;
  for (const auto& p : w.space.params()) x.push_back(0.5 * (p.lower + p.upper));
  return x;
}

std::vector<ConfigSample> generate_dataset(const WorkloadSpec& w, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("generate_dataset: n_samples must be >= 1");
  const std::size_t d = w.space.dimension();
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> strata(d, std::vector<std::size_t>(n_samples));
  for (auto& s : strata) {
    std::iota(s.begin(), s.end(), std::size_t{0});
    rng.shuffle(s);
  }
  const double inv = 1.0 / static_cast<double>(n_samples);
  std::vector<ConfigSample> out;
  out.reserve(n_samples);
  Eigen::VectorXd u(static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (std::size_t k = 0; k < d; ++k) u[static_cast<Eigen::Index>(k)] = (static_cast<double>(strata[k][s]) + rng.uniform()) * inv;
    ConfigSample sample;
    sample.x = denormalize_config(w.space, u);
    const Measurement m = evaluate_config(w, sample.x, true, mix_seed(seed, s + 1));
    sample.tps = m.tps;
    sample.latency = m.latency;
    out.push_back(std::move(sample));
  }
  return out;
}

OracleResult oracle_best(const WorkloadSpec& w, std::size_t budget, std::uint64_t seed, const ScoreFn& score) {
  if (budget == 0) throw std::invalid_argument("oracle_best: budget must be >= 1");
  const ScoreFn f = score ? score : ScoreFn([](const Measurement& m) { return m.tps; });
  const std::size_t d = w.space.dimension();
  Rng rng(seed);
  OracleResult best;
  Eigen::VectorXd u(static_cast<Eigen::Index>(d));
  for (std::size_t b = 0; b < budget; ++b) {
    for (std::size_t k = 0; k < d; ++k) u[static_cast<Eigen::Index>(k)] = rng.uniform();
    std::vector<double> x = denormalize_config(w.space, u);
    const Measurement m = evaluate_config(w, x);
    const double s = f(m);
    if (b == 0 || s > best.score) best = {std::move(x), m.tps, m.latency, s};
  }

  std::size_t remaining = budget / 10;
  double step = 0.25;
  while (remaining > 0 && step >= 1e-4) {
    bool improved = false;
    for (std::size_t k = 0; k < d && remaining > 0; ++k) {
      const ParamSpec& p = w.space[k];
      const double span = p.upper - p.lower;
      for (int dir : {1, -1}) {
        if (remaining == 0) break;
        std::vector<double> x = best.x;
        if (p.kind == ParamKind::kBoolean) {
          if (dir < 0) continue;
          x[k] = 1.0 - x[k];
        } else if (p.kind == ParamKind::kInteger) {
          x[k] = std::clamp(x[k] + dir * std::max(1.0, std::round(step * span)), p.lower, p.upper);
        } else {
          x[k] = std::clamp(x[k] + dir * step * span, p.lower, p.upper);
        }
        if (x[k] == best.x[k]) continue;
        --remaining;
        const Measurement m = evaluate_config(w, x);
        const double s = f(m);
        if (s > best.score) {
          best = {std::move(x), m.tps, m.latency, s};
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

EmbeddingSet planted_embeddings(const WorkloadSpec& w, std::size_t d_emb, std::uint64_t seed) {
  const std::size_t n = w.space.dimension();
  if (d_emb < 2) throw std::invalid_argument("planted_embeddings: d_emb must be >= 2");
  std::vector<std::size_t> group(n, SIZE_MAX);
  std::size_t groups = 0;
  for (const auto& [a, b] : planted_edges(w)) {
    if (group[a] != SIZE_MAX || group[b] != SIZE_MAX) throw std::invalid_argument("planted_embeddings: pairs must be disjoint");
    group[a] = group[b] = groups++;
  }
  for (auto& g : group) {
    if (g == SIZE_MAX) g = groups++;
  }
  if (d_emb < groups) {
    throw std::invalid_argument("planted_embeddings: d_emb must be at least " + std::to_string(groups));
  }
  const bool individual = d_emb >= groups + n;
  const auto pairs = planted_edges(w);
  std::vector<bool> paired(n * n, false);
  for (const auto& [a, b] : pairs) paired[a * n + b] = paired[b * n + a] = true;

  Rng rng(mix_seed(seed, 0x656d62));
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Eigen::MatrixXd Q = random_orthonormal(d_emb, rng);
    Eigen::MatrixXd E(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d_emb));
    for (std::size_t i = 0; i < n; ++i) {
      Eigen::VectorXd e = Q.col(static_cast<Eigen::Index>(group[i]));
      if (individual) e += 0.3 * Q.col(static_cast<Eigen::Index>(groups + i));
      for (Eigen::Index k = 0; k < e.size(); ++k) e[k] += 0.02 * rng.normal();
      E.row(static_cast<Eigen::Index>(i)) = e.normalized().transpose();
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        const double c = E.row(static_cast<Eigen::Index>(i)).dot(E.row(static_cast<Eigen::Index>(j)));
        ok = paired[i * n + j] ? c >= 0.8 : c < 0.5;
      }
    }
    if (ok) return EmbeddingSet(w.space.names(), std::move(E));
  }
  throw std::runtime_error("planted_embeddings: could not satisfy similarity constraints");
}

EmbeddingSet subsystem_embeddings(std::size_t subsystems, std::uint64_t seed) {
  static const std::array<const char*, 8> kPrefixes{"innodb", "optimizer", "binlog", "query",
                                                   "thread", "table", "net", "log"};
  if (subsystems == 0) throw std::invalid_argument("subsystem_embeddings: need at least one subsystem");
  constexpr std::size_t kPer = 8;
  // Squared weights of the subsystem, half, pair and individual directions.
  constexpr double kSub = 0.68, kHalf = 0.10, kPair = 0.14, kOwn = 0.08;
  const std::size_t d = subsystems * 16;
  Rng rng(mix_seed(seed, 0x737562));
  const Eigen::MatrixXd Q = random_orthonormal(d, rng);
  std::vector<std::string> names;
  Eigen::MatrixXd E(static_cast<Eigen::Index>(subsystems * kPer), static_cast<Eigen::Index>(d));
  for (std::size_t s = 0; s < subsystems; ++s) {
    const std::string prefix = s < kPrefixes.size() ? kPrefixes[s] : "sub" + std::to_string(s);
    const auto base = static_cast<Eigen::Index>(16 * s);
    for (std::size_t k = 0; k < kPer; ++k) {
      names.push_back(prefix + "_p" + std::to_string(k));
      Eigen::VectorXd e = std::sqrt(kSub) * Q.col(base) +
                          std::sqrt(kHalf) * Q.col(base + 1 + static_cast<Eigen::Index>(k / 4)) +
                          std::sqrt(kPair) * Q.col(base + 3 + static_cast<Eigen::Index>(k / 2)) +
                          std::sqrt(kOwn) * Q.col(base + 7 + static_cast<Eigen::Index>(k));
      for (Eigen::Index c = 0; c < e.size(); ++c) e[c] += 0.002 * rng.normal();
      E.row(static_cast<Eigen::Index>(s * kPer + k)) = e.normalized().transpose();
    }
  }
  return EmbeddingSet(std::move(names), std::move(E));
}

Eigen::MatrixXd heatmap_slice(const WorkloadSpec& w, std::size_t i, std::size_t j, std::size_t grid,
                              std::span<const double> fixed) {
  const std::size_t n = w.space.dimension();
  if (i >= n || j >= n || i == j) throw std::invalid_argument("heatmap_slice: need distinct valid indices");
  if (grid < 2) throw std::invalid_argument("heatmap_slice: grid must be >= 2");
  if (fixed.size() != n || !w.space.contains(fixed)) throw std::invalid_argument("heatmap_slice: fixed vector out of bounds");
  std::vector<double> x(fixed.begin(), fixed.end());
  const auto level = [&](std::size_t k, std::size_t a) {
    const ParamSpec& p = w.space[k];
    return a + 1 == grid ? p.upper : p.lower + (p.upper - p.lower) * static_cast<double>(a) / static_cast<double>(grid - 1);
  };
  Eigen::MatrixXd M(static_cast<Eigen::Index>(grid), static_cast<Eigen::Index>(grid));
  for (std::size_t a = 0; a < grid; ++a) {
    x[i] = level(i, a);
    for (std::size_t b = 0; b < grid; ++b) {
      x[j] = level(j, b);
      M(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = evaluate_config(w, x).tps;
    }
  }
  return M;
}

std::string heatmap_csv(const WorkloadSpec& w, std::size_t i, std::size_t j, const Eigen::MatrixXd& tps) {
  if (i >= w.space.dimension() || j >= w.space.dimension()) throw std::invalid_argument("heatmap_csv: invalid index");
  const auto grid = static_cast<std::size_t>(tps.rows());
  if (grid < 2 || tps.cols() != tps.rows()) throw std::invalid_argument("heatmap_csv: expected a square grid");
  const ParamSpec& pi = w.space[i];
  const ParamSpec& pj = w.space[j];
  std::string out = csv::join({pi.name, pj.name, "tps"}) + "\n";
  for (std::size_t a = 0; a < grid; ++a) {
    const double xi = a + 1 == grid ? pi.upper : pi.lower + (pi.upper - pi.lower) * static_cast<double>(a) / static_cast<double>(grid - 1);
    for (std::size_t b = 0; b < grid; ++b) {
      const double xj = b + 1 == grid ? pj.upper : pj.lower + (pj.upper - pj.lower) * static_cast<double>(b) / static_cast<double>(grid - 1);
      out += csv::join({csv::format_double(xi), csv::format_double(xj),
                        csv::format_double(tps(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)))});
      out += '\n';
    }
  }
  return out;
}

std::string workload_to_json(const WorkloadSpec& w) {
  using detail::json;
  json j;
  j["schema"] = "reltune.workload";
  j["version"] = kWorkloadVersion;
  j["kind"] = to_string(w.kind);
  j["seed"] = w.seed;
  j["base_tps"] = w.base_tps;
  j["base_latency"] = w.base_latency;
  j["noise_std"] = w.noise_std;
  j["space"] = detail::space_to_json(w.space);
  json mains = json::array();
  for (const auto& m : w.main_effects) mains.push_back({{"shape", to_string(m.shape)}, {"weight", m.weight}, {"center", m.center}});
  j["main_effects"] = std::move(mains);
  json inter = json::array();
  for (const auto& g : w.interactions) inter.push_back({{"i", g.i}, {"j", g.j}, {"gain", g.gain}});
  j["interactions"] = std::move(inter);
  j["inert"] = w.inert;
  j["latency_penalty"] = w.latency_penalty;
  return j.dump(2) + "\n";
}

WorkloadSpec workload_from_json(const std::string& text) {
  using detail::json;
  const json j = json::parse(text);
  if (j.at("schema").get<std::string>() != "reltune.workload") throw std::runtime_error("workload: wrong schema");
  if (j.at("version").get<int>() != kWorkloadVersion) throw std::runtime_error("workload: unsupported version");
  WorkloadSpec w;
  w.kind = parse_workload_kind(j.at("kind").get<std::string>());
  w.seed = j.at("seed").get<std::uint64_t>();
  w.base_tps = j.at("base_tps").get<double>();
  w.base_latency = j.at("base_latency").get<double>();
  w.noise_std = j.at("noise_std").get<double>();
  w.space = detail::space_from_json(j.at("space"));
  for (const auto& m : j.at("main_effects")) {
    w.main_effects.push_back({parse_main_shape(m.at("shape").get<std::string>()), m.at("weight").get<double>(),
                              m.at("center").get<double>()});
  }
  for (const auto& g : j.at("interactions")) {
    w.interactions.push_back({g.at("i").get<std::size_t>(), g.at("j").get<std::size_t>(), g.at("gain").get<double>()});
  }
  w.inert = j.at("inert").get<std::vector<std::size_t>>();
  w.latency_penalty = j.at("latency_penalty").get<std::vector<double>>();
  w.validate();
  return w;
}

void save_workload(const WorkloadSpec& w, const std::filesystem::path& path) { csv::write_text(path, workload_to_json(w)); }

WorkloadSpec load_workload(const std::filesystem::path& path) { return workload_from_json(csv::read_text(path)); }

}  // namespace reltune
