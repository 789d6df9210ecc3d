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

#include "reltune/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "json_util.hpp"
#include "reltune/checkpoint.hpp"
#include "reltune/community.hpp"
#include "reltune/csv.hpp"
#include "reltune/eval.hpp"
#include "reltune/experiments.hpp"
#include "reltune/relgraph.hpp"

namespace reltune {

using detail::json;

namespace {

constexpr int kManifestVersion = 1;

// Literals in code are signed while parsed non-negative integers are unsigned.
bool is_count(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}

json defaults() {
  json j;
  j["workload"] = {{"kind", "rw-balanced"}, {"n_params", 12}, {"seed", 7}, {"n_samples", 5000}, {"noise_std", 0.02}};
  j["embeddings"] = {{"path", ""}, {"d_emb", 32}, {"seed", 11}};
  j["dataset"] = {{"path", ""}};
  j["graph"] = {{"tau", 0.75}, {"sweep_taus", {0.65, 0.70, 0.75, 0.80, 0.85}}, {"louvain_seed", 1}};
  j["train"] = {{"lambda_recon", 1.0}, {"lambda_metric", 1.0}, {"learning_rate", 1e-3}, {"epochs", 300},
                {"batch_size", 32},    {"latent_dim", 32},     {"hidden_dim", 32},       {"gat_layers", 2},
                {"heads", 1},          {"semantic_dim", 8},    {"decoder_hidden", 64},   {"head_hidden", 64}};
  j["hbo"] = {{"alpha", 0.5},       {"gamma", 1.0},          {"sigma_rbf", "median"}, {"good_quantile", 0.2},
              {"iterations", 300},  {"warm_start", 16},      {"refit_every", 10},     {"candidates", 1024},
              {"refine_starts", 8}, {"refine_steps", 50},    {"refine_step", 0.01}};
  j["validate"] = {{"k", 30}};
  j["heatmap"] = {{"pairs", json::array()}, {"grid", 21}};
  j["seeds"] = {1, 2, 3, 4, 5};
  j["output_dir"] = "reltune_out";
  j["stages"] = pipeline_stages();
  return j;
}

// Overlays `user` on `base`, reporting keys the schema does not know.
void merge(json& base, const json& user, const std::string& prefix, std::vector<std::string>& diags) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) {
      diags.push_back(path + ": unknown field");
      continue;
    }
    json& slot = base[it.key()];
    if (slot.is_object()) {
      if (!it.value().is_object()) {
        diags.push_back(path + ": expected an object");
      } else {
        merge(slot, it.value(), path, diags);
      }
    } else {
      slot = it.value();
    }
  }
}

class Reader {
 public:
  Reader(const json& root, std::vector<std::string>& diags) : root_(root), diags_(diags) {}

  const json& at(const std::string& path) const {
    const json* node = &root_;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = path.find('.', start);
      node = &node->at(path.substr(start, dot - start));
      if (dot == std::string::npos) return *node;
      start = dot + 1;
    }
  }

  double number(const std::string& path, double fallback) {
    const json& v = at(path);
    if (!v.is_number() || !std::isfinite(v.get<double>())) return fail(path, "expected a finite number", fallback);
    return v.get<double>();
  }

  std::uint64_t uint(const std::string& path, std::uint64_t fallback) {
    const json& v = at(path);
    if (!is_count(v)) return fail(path, "expected a non-negative integer", fallback);
    return v.get<std::uint64_t>();
  }

  std::size_t count(const std::string& path, std::size_t min, std::size_t fallback) {
    const std::uint64_t v = uint(path, fallback);
    if (v < min) return fail(path, "must be >= " + std::to_string(min), fallback);
    return static_cast<std::size_t>(v);
  }

  std::string string(const std::string& path) {
    const json& v = at(path);
    if (!v.is_string()) return fail(path, "expected a string", std::string());
    return v.get<std::string>();
  }

  template <typename T>
  T fail(const std::string& path, const std::string& what, T fallback) {
    diags_.push_back(path + ": " + what);
    return fallback;
  }

  void check(bool ok, const std::string& path, const std::string& what) {
    if (!ok) diags_.push_back(path + ": " + what);
  }

 private:
  const json& root_;
  std::vector<std::string>& diags_;
};

struct Loaded {
  ExperimentConfig cfg;
  std::vector<std::string> diags;
};

Loaded load(const std::string& text, const RunOptions* opts) {
  Loaded out;
  auto& diags = out.diags;
  json user;
  try {
    user = json::parse(text);
  } catch (const json::parse_error& e) {
    diags.push_back(std::string("config: malformed JSON: ") + e.what());
    return out;
  }
  if (user.is_object() && user.value("schema", "") == "reltune.manifest") user = user.value("config", json::object());
  if (!user.is_object()) {
    diags.push_back("config: expected a JSON object");
    return out;
  }
  json j = defaults();
  merge(j, user, "", diags);
  if (opts) {
    if (opts->out) j["output_dir"] = *opts->out;
    if (opts->seed) j["seeds"] = {*opts->seed};
    if (opts->stages) j["stages"] = *opts->stages;
  }

  Reader r(j, diags);
  ExperimentConfig& c = out.cfg;
  try {
    c.workload_kind = parse_workload_kind(r.string("workload.kind"));
  } catch (const std::invalid_argument&) {
    diags.push_back("workload.kind: expected one of rw-balanced, read-heavy, scan-heavy, analytic");
  }
  c.n_params = r.count("workload.n_params", 2, c.n_params);
  c.workload_seed = r.uint("workload.seed", c.workload_seed);
  c.n_samples = r.count("workload.n_samples", 2, c.n_samples);
  c.noise_std = r.number("workload.noise_std", c.noise_std);
  r.check(c.noise_std >= 0.0, "workload.noise_std", "must be >= 0");

  c.embeddings_path = r.string("embeddings.path");
  c.d_emb = r.count("embeddings.d_emb", 2, c.d_emb);
  c.embeddings_seed = r.uint("embeddings.seed", c.embeddings_seed);
  if (!c.embeddings_path.empty()) {
    r.check(std::filesystem::is_regular_file(c.embeddings_path), "embeddings.path", "file does not exist");
  }
  c.dataset_path = r.string("dataset.path");
  if (!c.dataset_path.empty()) {
    r.check(std::filesystem::is_regular_file(c.dataset_path), "dataset.path", "file does not exist");
  }

  c.tau = r.number("graph.tau", c.tau);
  r.check(c.tau >= -1.0 && c.tau <= 1.0, "graph.tau", "must lie in [-1, 1]");
  if (!j["graph"]["sweep_taus"].is_array() || j["graph"]["sweep_taus"].empty()) {
    diags.push_back("graph.sweep_taus: expected a nonempty array");
  } else {
    c.sweep_taus.clear();
    for (const auto& v : j["graph"]["sweep_taus"]) {
      if (!v.is_number() || v.get<double>() < -1.0 || v.get<double>() > 1.0) {
        diags.push_back("graph.sweep_taus: every entry must be a number in [-1, 1]");
        break;
      }
      c.sweep_taus.push_back(v.get<double>());
    }
  }
  c.louvain_seed = r.uint("graph.louvain_seed", c.louvain_seed);

  TrainConfig& t = c.train;
  t.lambda_recon = r.number("train.lambda_recon", t.lambda_recon);
  t.lambda_metric = r.number("train.lambda_metric", t.lambda_metric);
  r.check(t.lambda_recon >= 0.0, "train.lambda_recon", "must be >= 0");
  r.check(t.lambda_metric >= 0.0, "train.lambda_metric", "must be >= 0");
  r.check(t.lambda_recon + t.lambda_metric > 0.0, "train.lambda_recon", "lambda_recon + lambda_metric must be > 0");
  t.learning_rate = r.number("train.learning_rate", t.learning_rate);
  r.check(t.learning_rate > 0.0, "train.learning_rate", "must be > 0");
  t.epochs = r.count("train.epochs", 1, t.epochs);
  t.batch_size = r.count("train.batch_size", 1, t.batch_size);
  t.latent_dim = r.count("train.latent_dim", 1, t.latent_dim);
  t.hidden_dim = r.count("train.hidden_dim", 1, t.hidden_dim);
  t.gat_layers = r.count("train.gat_layers", 1, t.gat_layers);
  t.heads = r.count("train.heads", 1, t.heads);
  t.semantic_dim = r.count("train.semantic_dim", 1, t.semantic_dim);
  t.decoder_hidden = r.count("train.decoder_hidden", 1, t.decoder_hidden);
  t.head_hidden = r.count("train.head_hidden", 1, t.head_hidden);
  r.check(t.hidden_dim % t.heads == 0 && t.latent_dim % t.heads == 0, "train.heads",
          "must divide hidden_dim and latent_dim");

  HboConfig& h = c.hbo;
  h.alpha = r.number("hbo.alpha", h.alpha);
  r.check(h.alpha >= 0.0, "hbo.alpha", "must be >= 0");
  h.gamma = r.number("hbo.gamma", h.gamma);
  r.check(h.gamma >= 0.0, "hbo.gamma", "must be >= 0");
  const json& sigma = j["hbo"]["sigma_rbf"];
  if (sigma.is_string() && sigma.get<std::string>() == "median") {
    h.sigma_rbf.reset();
  } else if (sigma.is_number() && sigma.get<double>() > 0.0) {
    h.sigma_rbf = sigma.get<double>();
  } else {
    diags.push_back("hbo.sigma_rbf: expected \"median\" or a number > 0");
  }
  h.good_quantile = r.number("hbo.good_quantile", h.good_quantile);
  r.check(h.good_quantile > 0.0 && h.good_quantile <= 1.0, "hbo.good_quantile", "must lie in (0, 1]");
  h.iterations = r.count("hbo.iterations", 0, h.iterations);
  h.warm_start = r.count("hbo.warm_start", 1, h.warm_start);
  h.refit_every = r.count("hbo.refit_every", 1, h.refit_every);
  h.candidates = r.count("hbo.candidates", 1, h.candidates);
  h.refine_starts = r.count("hbo.refine_starts", 1, h.refine_starts);
  h.refine_steps = r.count("hbo.refine_steps", 0, h.refine_steps);
  h.refine_step = r.number("hbo.refine_step", h.refine_step);
  r.check(h.refine_step > 0.0 && h.refine_step <= 1.0, "hbo.refine_step", "must lie in (0, 1]");

  c.validate_k = r.count("validate.k", 1, c.validate_k);
  c.heatmap_grid = r.count("heatmap.grid", 2, c.heatmap_grid);
  const json& pairs = j["heatmap"]["pairs"];
  c.heatmap_pairs.clear();
  if (!pairs.is_array()) {
    diags.push_back("heatmap.pairs: expected an array of [i, j] pairs");
  } else {
    for (const auto& p : pairs) {
      if (!p.is_array() || p.size() != 2 || !is_count(p[0]) || !is_count(p[1]) ||
          p[0] == p[1] || p[0].get<std::size_t>() >= c.n_params || p[1].get<std::size_t>() >= c.n_params) {
        diags.push_back("heatmap.pairs: each entry must be two distinct parameter indices below workload.n_params");
        break;
      }
      c.heatmap_pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    }
  }

  const json& seeds = j["seeds"];
  c.seeds.clear();
  if (!seeds.is_array() || seeds.empty()) {
    diags.push_back("seeds: expected a nonempty array of non-negative integers");
  } else {
    for (const auto& s : seeds) {
      if (!is_count(s)) {
        diags.push_back("seeds: expected a nonempty array of non-negative integers");
        break;
      }
      c.seeds.push_back(s.get<std::uint64_t>());
    }
    std::set<std::uint64_t> unique(c.seeds.begin(), c.seeds.end());
    r.check(unique.size() == c.seeds.size(), "seeds", "must be distinct");
  }
  c.output_dir = r.string("output_dir");
  r.check(!c.output_dir.empty(), "output_dir", "must not be empty");

  const json& stages = j["stages"];
  c.stages.clear();
  if (!stages.is_array()) {
    diags.push_back("stages: expected an array of stage names");
  } else {
    const auto& known = pipeline_stages();
    for (const auto& s : stages) {
      if (!s.is_string() || std::find(known.begin(), known.end(), s.get<std::string>()) == known.end()) {
        diags.push_back("stages: unknown stage " + s.dump());
        continue;
      }
      c.stages.push_back(s.get<std::string>());
    }
  }
  const auto has = [&](const char* s) { return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end(); };
  if (has("train") && !has("gen-data") && c.dataset_path.empty() &&
      !std::filesystem::is_regular_file(std::filesystem::path(c.output_dir) / "dataset.csv")) {
    diags.push_back("dataset.path: required when `train` runs without `gen-data` and the output directory has no dataset");
  }
  return out;
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["workload"] = {{"kind", to_string(c.workload_kind)}, {"n_params", c.n_params}, {"seed", c.workload_seed},
                   {"n_samples", c.n_samples}, {"noise_std", c.noise_std}};
  j["embeddings"] = {{"path", c.embeddings_path}, {"d_emb", c.d_emb}, {"seed", c.embeddings_seed}};
  j["dataset"] = {{"path", c.dataset_path}};
  j["graph"] = {{"tau", c.tau}, {"sweep_taus", c.sweep_taus}, {"louvain_seed", c.louvain_seed}};
  const TrainConfig& t = c.train;
  j["train"] = {{"lambda_recon", t.lambda_recon}, {"lambda_metric", t.lambda_metric},
                {"learning_rate", t.learning_rate}, {"epochs", t.epochs},
                {"batch_size", t.batch_size},       {"latent_dim", t.latent_dim},
                {"hidden_dim", t.hidden_dim},       {"gat_layers", t.gat_layers},
                {"heads", t.heads},                 {"semantic_dim", t.semantic_dim},
                {"decoder_hidden", t.decoder_hidden}, {"head_hidden", t.head_hidden}};
  const HboConfig& h = c.hbo;
  j["hbo"] = {{"alpha", h.alpha},
              {"gamma", h.gamma},
              {"sigma_rbf", h.sigma_rbf ? json(*h.sigma_rbf) : json("median")},
              {"good_quantile", h.good_quantile},
              {"iterations", h.iterations},
              {"warm_start", h.warm_start},
              {"refit_every", h.refit_every},
              {"candidates", h.candidates},
              {"refine_starts", h.refine_starts},
              {"refine_steps", h.refine_steps},
              {"refine_step", h.refine_step}};
  j["validate"] = {{"k", c.validate_k}};
  json pairs = json::array();
  for (const auto& [a, b] : c.heatmap_pairs) pairs.push_back({a, b});
  j["heatmap"] = {{"pairs", pairs}, {"grid", c.heatmap_grid}};
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir;
  j["stages"] = c.stages;
  return j;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Everything a stage needs, derived deterministically from the config.
class Run {
 public:
  Run(ExperimentConfig cfg, std::ostream& log) : cfg_(std::move(cfg)), dir_(cfg_.output_dir), log_(log) {
    workload_ = make_workload(cfg_.workload_kind, cfg_.n_params, cfg_.workload_seed);
    workload_.noise_std = cfg_.noise_std;
  }

  void stage(const std::string& name) {
    static const std::map<std::string, void (Run::*)()> kStages{
        {"gen-data", &Run::gen_data},   {"build-graph", &Run::build_graph},
        {"sweep-threshold", &Run::sweep}, {"train", &Run::train_models},
        {"tune", &Run::tune},           {"validate-affinity", &Run::validate},
        {"ablate", &Run::ablate},       {"heatmap", &Run::heatmap}};
    log_ << "[" << name << "]\n";
    (this->*kStages.at(name))();
  }

  // Stages accumulate across invocations on the same output directory, so a
  // per-stage rerun leaves the manifest as a full run would.
  void write_manifest(const std::vector<std::string>& stages) {
    std::vector<std::string> done = stages;
    const auto path = dir_ / "manifest.json";
    if (std::filesystem::is_regular_file(path)) {
      try {
        const json old = json::parse(csv::read_text(path));
        if (old.contains("stages") && old["stages"].is_array())
          for (const auto& s : old["stages"])
            if (s.is_string()) done.push_back(s.get<std::string>());
      } catch (const json::exception&) {
      }
    }
    std::vector<std::string> ordered;
    for (const auto& s : pipeline_stages())
      if (std::find(done.begin(), done.end(), s) != done.end()) ordered.push_back(s);
    ExperimentConfig recorded = cfg_;
    recorded.stages = ordered;
    json j;
    j["schema"] = "reltune.manifest";
    j["version"] = kManifestVersion;
    const std::string canonical = config_json(recorded).dump();
    j["config_hash"] = detail::hex64(fnv1a(canonical));
    j["seeds"] = cfg_.seeds;
    j["workload_seed"] = cfg_.workload_seed;
    j["stages"] = ordered;
    j["config"] = config_json(recorded);
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name != "manifest.json" && name.find(".tmp") == std::string::npos) files.push_back(name);
    }
    std::sort(files.begin(), files.end());
    json outputs = json::array();
    for (const auto& f : files) outputs.push_back({{"file", f}, {"fnv1a", detail::hex64(fnv1a(csv::read_text(dir_ / f)))}});
    j["outputs"] = std::move(outputs);
    csv::write_text(dir_ / "manifest.json", j.dump(2) + "\n");
  }

 private:
  void put(const std::string& file, const std::string& text) {
    csv::write_text(dir_ / file, text);
    log_ << "  wrote " << (dir_ / file).string() << "\n";
  }

  EmbeddingSet embeddings() const {
    if (cfg_.embeddings_path.empty()) return planted_embeddings(workload_, cfg_.d_emb, cfg_.embeddings_seed);
    EmbeddingSet emb = read_embeddings_csv(cfg_.embeddings_path);
    if (emb.names() != workload_.space.names()) {
      throw std::runtime_error("embedding names do not match the workload parameters in order");
    }
    return emb;
  }

  RelationalGraph graph() const { return build_adjacency(embeddings(), cfg_.tau); }

  const std::vector<ConfigSample>& dataset() {
    if (data_.empty()) {
      const std::filesystem::path p = cfg_.dataset_path.empty() ? dir_ / "dataset.csv" : std::filesystem::path(cfg_.dataset_path);
      if (!std::filesystem::is_regular_file(p)) throw std::runtime_error("dataset not found: " + p.string());
      data_ = read_dataset_csv(p);
      for (const auto& s : data_) {
        if (s.x.size() != workload_.space.dimension() || !workload_.space.contains(s.x)) {
          throw std::runtime_error("dataset does not fit the workload parameter space");
        }
      }
    }
    return data_;
  }

  Model load(const std::string& file) const {
    const auto p = dir_ / file;
    if (!std::filesystem::is_regular_file(p)) throw std::runtime_error("missing " + p.string() + "; run `train` first");
    return load_model(p);
  }

  static std::string seed_file(const char* stem, std::uint64_t seed, const char* ext) {
    return std::string(stem) + "_seed" + std::to_string(seed) + ext;
  }

  void gen_data() {
    put("workload.json", workload_to_json(workload_));
    data_ = generate_dataset(workload_, cfg_.n_samples, cfg_.workload_seed);
    put("dataset.csv", dataset_to_csv(data_, workload_.space.dimension()));
    put("embeddings.csv", embeddings_to_csv(embeddings()));
  }

  void build_graph() {
    const RelationalGraph g = graph();
    const EmbeddingSet& emb = g.embeddings();
    std::string text = "i,j,name_i,name_j,similarity\n";
    for (const auto& [a, b] : g.edges()) {
      text += csv::join({std::to_string(a), std::to_string(b), emb.names()[a], emb.names()[b],
                         csv::format_double(cosine_similarity(emb.row(a), emb.row(b)))});
      text += '\n';
    }
    put("graph.csv", text);
    json j{{"tau", g.tau()}, {"nodes", g.node_count()}, {"edges", g.edge_count()},
           {"hash", detail::hex64(g.structure_hash())}};
    put("graph.json", j.dump(2) + "\n");
  }

  void sweep() {
    put("quality.csv", quality_reports_csv(threshold_sweep(embeddings(), cfg_.sweep_taus, cfg_.louvain_seed)));
  }

  Model train_one(std::uint64_t seed, EncoderKind kind, const RelationalGraph& g) {
    TrainConfig t = cfg_.train;
    t.seed = seed;
    t.encoder = kind;
    TrainResult r = reltune::train(dataset(), g, workload_.space, t);
    log_ << "  " << to_string(kind) << " seed " << seed << ": loss " << csv::format_double(r.initial_loss) << " -> "
         << csv::format_double(r.final_loss) << "\n";
    std::string curve = "epoch,loss\n";
    for (std::size_t e = 0; e < r.epoch_loss.size(); ++e) curve += std::to_string(e + 1) + "," + csv::format_double(r.epoch_loss[e]) + "\n";
    const char* stem = kind == EncoderKind::kGat ? "train_loss" : "train_loss_mlp";
    put(seed_file(stem, seed, ".csv"), curve);
    return std::move(r.model);
  }

  void train_models() {
    const RelationalGraph g = graph();
    dataset();
    std::vector<Model> models(cfg_.seeds.size());
    for (std::size_t i = 0; i < cfg_.seeds.size(); ++i) {
      models[i] = train_one(cfg_.seeds[i], EncoderKind::kGat, g);
      put(seed_file("model", cfg_.seeds[i], ".json"), model_to_json(models[i]));
    }
  }

  void tune() {
    const auto& data = dataset();
    const std::size_t n = cfg_.seeds.size();
    std::vector<Model> models(n);
    for (std::size_t i = 0; i < n; ++i) models[i] = load(seed_file("model", cfg_.seeds[i], ".json"));
    std::vector<TuningHistory> hbo(n), vbo(n);
    parallel_for(2 * n, thread_cap(), [&](std::size_t job) {
      const std::size_t i = job % n;
      HboConfig h = cfg_.hbo;
      h.seed = cfg_.seeds[i];
      if (job < n) {
        hbo[i] = hbo_run(models[i], data, h);
      } else {
        vbo[i] = vbo_run(models[i], data, h);
      }
    });
    std::string summary = "seed,method,hybrid,true_score,tps,latency\n";
    std::vector<std::vector<double>> hbo_true, vbo_true;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t s = cfg_.seeds[i];
      for (const auto* m : {"hbo", "vbo"}) {
        const TuningHistory& h = m[0] == 'h' ? hbo[i] : vbo[i];
        put(seed_file(("history_" + std::string(m)).c_str(), s, ".csv"), history_csv(h));
        put(seed_file(("best_config_" + std::string(m)).c_str(), s, ".json"), config_json(workload_.space, h.best_config));
        const Measurement meas = evaluate_config(workload_, h.best_config);
        summary += csv::join({std::to_string(s), m, csv::format_double(h.best_score),
                              csv::format_double(true_score(workload_, models[i].stats, h.best_config, cfg_.hbo.alpha)),
                              csv::format_double(meas.tps), csv::format_double(meas.latency)});
        summary += '\n';
        (m[0] == 'h' ? hbo_true : vbo_true).push_back(true_score_curve(workload_, models[i], h, cfg_.hbo.alpha));
      }
    }
    put("tune_summary.csv", summary);
    put("convergence_hbo.csv", convergence_csv(convergence_report(hbo)));
    put("convergence_vbo.csv", convergence_csv(convergence_report(vbo)));
    put("true_convergence_hbo.csv", convergence_csv(convergence_report(hbo_true)));
    put("true_convergence_vbo.csv", convergence_csv(convergence_report(vbo_true)));
  }

  void validate() {
    const auto& data = dataset();
    std::string table = "seed,auroc,auprc,good_count,sigma_rbf\n";
    for (std::uint64_t s : cfg_.seeds) {
      const Model model = load(seed_file("model", s, ".json"));
      HboConfig h = cfg_.hbo;
      h.seed = s;
      const AffinityReport rep = affinity_validation(model, data, cfg_.validate_k, h, s);
      table += csv::join({std::to_string(s), csv::format_double(rep.auroc), csv::format_double(rep.auprc),
                          std::to_string(rep.good_count), csv::format_double(rep.sigma_rbf)});
      table += '\n';
      put(seed_file("affinity_bins", s, ".csv"), trend_csv(rep.bins));
      put(seed_file("affinity_scores", s, ".csv"), affinity_scores_csv(rep));
    }
    put("affinity.csv", table);
  }

  void ablate() {
    const RelationalGraph g = graph();
    const auto& data = dataset();
    std::vector<SeedModels> models;
    for (std::uint64_t s : cfg_.seeds) {
      SeedModels m;
      m.seed = s;
      m.gat = load(seed_file("model", s, ".json"));
      m.mlp = train_one(s, EncoderKind::kMlp, g);
      put(seed_file("model_mlp", s, ".json"), model_to_json(m.mlp));
      models.push_back(std::move(m));
    }
    put("ablation.csv", ablation_csv(ablation_grid(workload_, data, models, cfg_.hbo)));
  }

  void heatmap() {
    auto pairs = cfg_.heatmap_pairs;
    if (pairs.empty()) {
      const auto planted = planted_edges(workload_);
      if (!planted.empty()) pairs.push_back(planted.front());
      std::vector<bool> interacting(workload_.space.dimension(), false);
      for (const auto& [a, b] : planted) interacting[a] = interacting[b] = true;
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < interacting.size(); ++i) {
        if (!interacting[i]) free.push_back(i);
      }
      if (free.size() >= 2) pairs.emplace_back(free[0], free[1]);
    }
    const auto x = reference_config(workload_);
    for (const auto& [a, b] : pairs) {
      const Eigen::MatrixXd m = heatmap_slice(workload_, a, b, cfg_.heatmap_grid, x);
      put("heatmap_" + std::to_string(a) + "_" + std::to_string(b) + ".csv", heatmap_csv(workload_, a, b, m));
    }
  }

  ExperimentConfig cfg_;
  std::filesystem::path dir_;
  std::ostream& log_;
  WorkloadSpec workload_;
  std::vector<ConfigSample> data_;
};

}  // namespace

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> kStages{"gen-data", "build-graph",       "sweep-threshold", "train",
                                                "tune",     "validate-affinity", "ablate",          "heatmap"};
  return kStages;
}

namespace {
std::string join_diagnostics(const std::vector<std::string>& d) {
  std::string s;
  for (const auto& x : d) s += (s.empty() ? "" : "; ") + x;
  return s;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string default_config_json() { return defaults().dump(2) + "\n"; }

std::vector<std::string> validate_config(const std::string& json_text) { return load(json_text, nullptr).diags; }

ExperimentConfig parse_config(const std::string& json_text) {
  Loaded l = load(json_text, nullptr);
  if (!l.diags.empty()) throw ConfigError(std::move(l.diags));
  return l.cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

int run_pipeline(const std::filesystem::path& config_path, const std::string& subcommand, const RunOptions& opts,
                 std::ostream& out, std::ostream& err) {
  const auto& known = pipeline_stages();
  if (subcommand != "all" && std::find(known.begin(), known.end(), subcommand) == known.end()) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return 1;
  }
  std::string text;
  try {
    text = csv::read_text(config_path);
  } catch (const std::exception& e) {
    err << "error: cannot read config: " << e.what() << "\n";
    return 1;
  }
  RunOptions effective = opts;
  if (subcommand != "all") effective.stages = std::vector<std::string>{subcommand};
  Loaded l = load(text, &effective);
  if (!l.diags.empty()) {
    for (const auto& d : l.diags) err << "config error: " << d << "\n";
    return 1;
  }
  std::vector<std::string> stages;
  for (const auto& s : known) {
    if (std::find(l.cfg.stages.begin(), l.cfg.stages.end(), s) != l.cfg.stages.end()) stages.push_back(s);
  }
  try {
    Run run(l.cfg, out);
    std::filesystem::create_directories(l.cfg.output_dir);
    for (const auto& s : stages) run.stage(s);
    run.write_manifest(stages);
  } catch (const std::exception& e) {
    err << "stage failed: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace reltune
