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

#include "reltune/checkpoint.hpp"

#include <stdexcept>

#include "json_util.hpp"
#include "reltune/csv.hpp"

namespace reltune {

using detail::json;

std::string model_to_json(const Model& model) {
  const auto& a = model.arch;
  json j;
  j["schema"] = "reltune.model";
  j["version"] = kCheckpointVersion;
  j["arch"] = {{"encoder", to_string(a.encoder)},   {"n_params", a.n_params},
               {"semantic_dim", a.semantic_dim},    {"gat_layers", a.gat_layers},
               {"hidden_dim", a.hidden_dim},        {"heads", a.heads},
               {"latent_dim", a.latent_dim},        {"decoder_hidden", a.decoder_hidden},
               {"head_hidden", a.head_hidden}};
  j["space"] = detail::space_to_json(model.space);
  json edges = json::array();
  for (auto [u, v] : model.edges) edges.push_back({u, v});
  j["graph"] = {{"hash", detail::hex64(model.graph_hash)}, {"nodes", model.nodes.size()}, {"edges", edges}};
  json semantic = json::array();
  for (Eigen::Index r = 0; r < model.nodes.semantic.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.nodes.semantic.cols(); ++c) row.push_back(model.nodes.semantic(r, c));
    semantic.push_back(row);
  }
  j["semantic"] = semantic;
  json tensors = json::array();
  for (std::size_t i = 0; i < model.weights.slots().size(); ++i) {
    const auto& s = model.weights.slot(i);
    const auto v = model.weights.vec(i);
    tensors.push_back({{"name", s.name}, {"rows", s.rows}, {"cols", s.cols},
                       {"data", std::vector<double>(v.data(), v.data() + v.size())}});
  }
  j["weights"] = tensors;
  j["stats"] = {{"tps_mean", model.stats.tps_mean},
                {"tps_std", model.stats.tps_std},
                {"latency_mean", model.stats.latency_mean},
                {"latency_std", model.stats.latency_std}};
  if (model.stats.lower.allFinite() && model.stats.upper.allFinite()) {
    j["stats"]["lower"] = {model.stats.lower[0], model.stats.lower[1]};
    j["stats"]["upper"] = {model.stats.upper[0], model.stats.upper[1]};
  }
  return j.dump(1) + "\n";
}

Model model_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("schema", "") != "reltune.model") throw std::runtime_error("checkpoint: not a reltune model");
  if (j.value("version", 0) != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(j.value("version", 0)));
  }
  Model m;
  const auto& a = j.at("arch");
  m.arch.encoder = parse_encoder_kind(a.at("encoder").get<std::string>());
  m.arch.n_params = a.at("n_params").get<std::size_t>();
  m.arch.semantic_dim = a.at("semantic_dim").get<std::size_t>();
  m.arch.gat_layers = a.at("gat_layers").get<std::size_t>();
  m.arch.hidden_dim = a.at("hidden_dim").get<std::size_t>();
  m.arch.heads = a.at("heads").get<std::size_t>();
  m.arch.latent_dim = a.at("latent_dim").get<std::size_t>();
  m.arch.decoder_hidden = a.at("decoder_hidden").get<std::size_t>();
  m.arch.head_hidden = a.at("head_hidden").get<std::size_t>();
  m.space = detail::space_from_json(j.at("space"));

  const auto& g = j.at("graph");
  const auto n = g.at("nodes").get<std::size_t>();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : g.at("edges")) edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  const RelationalGraph graph = RelationalGraph::from_edges(n, edges);
  if (graph.structure_hash() != detail::parse_hex64(g.at("hash").get<std::string>())) {
    throw std::runtime_error("checkpoint: graph hash does not match edge list");
  }
  Eigen::MatrixXd semantic(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m.arch.semantic_dim));
  const auto& sem = j.at("semantic");
  if (sem.size() != n) throw std::runtime_error("checkpoint: semantic rows mismatch");
  for (std::size_t r = 0; r < n; ++r) {
    if (sem[r].size() != m.arch.semantic_dim) throw std::runtime_error("checkpoint: semantic width mismatch");
    for (std::size_t c = 0; c < m.arch.semantic_dim; ++c)
      semantic(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sem[r][c].get<double>();
  }
  m.nodes = make_node_context(graph, std::move(semantic));
  m.edges = graph.edges();
  m.graph_hash = graph.structure_hash();

  m.weights = ModelWeights(m.arch);
  const auto& tensors = j.at("weights");
  if (tensors.size() != m.weights.slots().size()) throw std::runtime_error("checkpoint: tensor count mismatch");
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& t = tensors[i];
    const auto& s = m.weights.slot(i);
    if (t.at("name").get<std::string>() != s.name || t.at("rows").get<std::size_t>() != s.rows ||
        t.at("cols").get<std::size_t>() != s.cols) {
      throw std::runtime_error("checkpoint: tensor '" + s.name + "' has unexpected name or shape");
    }
    const auto values = t.at("data").get<std::vector<double>>();
    if (values.size() != s.size()) throw std::runtime_error("checkpoint: tensor '" + s.name + "' size mismatch");
    auto v = m.weights.vec(i);
    for (std::size_t k = 0; k < values.size(); ++k) v[static_cast<Eigen::Index>(k)] = values[k];
  }
  const auto& st = j.at("stats");
  m.stats.tps_mean = st.at("tps_mean").get<double>();
  m.stats.tps_std = st.at("tps_std").get<double>();
  m.stats.latency_mean = st.at("latency_mean").get<double>();
  m.stats.latency_std = st.at("latency_std").get<double>();
  if (st.contains("lower") && st.contains("upper")) {
    const auto lo = st.at("lower").get<std::vector<double>>();
    const auto hi = st.at("upper").get<std::vector<double>>();
    if (lo.size() != 2 || hi.size() != 2) throw std::runtime_error("checkpoint: bad metric range");
    m.stats.lower = {lo[0], lo[1]};
    m.stats.upper = {hi[0], hi[1]};
  }
  return m;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  csv::write_text(path, model_to_json(model));
}

Model load_model(const std::filesystem::path& path) { return model_from_json(csv::read_text(path)); }

}  // namespace reltune
