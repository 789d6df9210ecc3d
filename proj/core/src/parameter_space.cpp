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

#include "reltune/parameter_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "reltune/csv.hpp"

namespace reltune {

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::kContinuous: return "continuous";
    case ParamKind::kInteger: return "integer";
    case ParamKind::kBoolean: return "boolean";
  }
  return "continuous";
}

ParamKind parse_param_kind(const std::string& s) {
  if (s == "continuous") return ParamKind::kContinuous;
  if (s == "integer") return ParamKind::kInteger;
  if (s == "boolean") return ParamKind::kBoolean;
  throw std::invalid_argument("unknown parameter kind '" + s + "'");
}

ParameterSpace::ParameterSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
  std::set<std::string> seen;
  for (auto& p : params_) {
    if (!seen.insert(p.name).second) throw std::invalid_argument("duplicate parameter name '" + p.name + "'");
    if (p.kind == ParamKind::kBoolean) {
      p.lower = 0.0;
      p.upper = 1.0;
    } else if (!(p.lower < p.upper)) {
      throw std::invalid_argument("parameter '" + p.name + "': lower must be < upper");
    }
  }
}

std::vector<std::string> ParameterSpace::names() const {
  std::vector<std::string> out;
  for (const auto& p : params_) out.push_back(p.name);
  return out;
}

bool ParameterSpace::contains(std::span<const double> x) const {
  if (x.size() != params_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= params_[i].lower && x[i] <= params_[i].upper)) return false;
  return true;
}

bool ParameterSpace::operator==(const ParameterSpace& other) const {
  if (params_.size() != other.params_.size()) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto& a = params_[i];
    const auto& b = other.params_[i];
    if (a.name != b.name || a.lower != b.lower || a.upper != b.upper || a.kind != b.kind) return false;
  }
  return true;
}

Eigen::VectorXd normalize_config(const ParameterSpace& space, std::span<const double> x) {
  if (x.size() != space.dimension()) throw std::invalid_argument("normalize_config: length mismatch");
  Eigen::VectorXd u(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& p = space[i];
    if (!(x[i] >= p.lower && x[i] <= p.upper)) {
      throw std::invalid_argument("normalize_config: '" + p.name + "' = " + csv::format_double(x[i]) +
                                  " outside [" + csv::format_double(p.lower) + ", " +
                                  csv::format_double(p.upper) + "]");
    }
    u[static_cast<Eigen::Index>(i)] = (x[i] - p.lower) / (p.upper - p.lower);
  }
  return u;
}

std::vector<double> denormalize_config(const ParameterSpace& space, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != space.dimension()) {
    throw std::invalid_argument("denormalize_config: length mismatch");
  }
  std::vector<double> x(space.dimension());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& p = space[i];
    const double v = std::clamp(u[static_cast<Eigen::Index>(i)], 0.0, 1.0);
    switch (p.kind) {
      case ParamKind::kContinuous:
        x[i] = v == 1.0 ? p.upper : p.lower + v * (p.upper - p.lower);
        break;
      case ParamKind::kInteger:
        x[i] = std::clamp(std::round(p.lower + v * (p.upper - p.lower)), std::ceil(p.lower), std::floor(p.upper));
        break;
      case ParamKind::kBoolean:
        x[i] = v >= 0.5 ? 1.0 : 0.0;
        break;
    }
  }
  return x;
}

std::string dataset_to_csv(const std::vector<ConfigSample>& data, std::size_t n_params) {
  std::string out;
  for (std::size_t i = 0; i < n_params; ++i) out += "p" + std::to_string(i) + ",";
  out += "tps,latency\n";
  for (const auto& s : data) {
    if (s.x.size() != n_params) throw std::invalid_argument("dataset_to_csv: sample length mismatch");
    for (double v : s.x) {
      out += csv::format_double(v);
      out += ',';
    }
    out += csv::format_double(s.tps) + "," + csv::format_double(s.latency) + "\n";
  }
  return out;
}

std::vector<ConfigSample> parse_dataset_csv(const std::string& text) {
  auto table = csv::parse(text);
  const auto& h = table.header;
  if (h.size() < 3 || h[h.size() - 2] != "tps" || h.back() != "latency") {
    throw std::runtime_error("dataset csv: header must end with tps,latency");
  }
  const std::size_t n = h.size() - 2;
  for (std::size_t i = 0; i < n; ++i) {
    if (h[i] != "p" + std::to_string(i)) throw std::runtime_error("dataset csv: unexpected column '" + h[i] + "'");
  }
  std::vector<ConfigSample> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    ConfigSample s;
    for (std::size_t i = 0; i < n; ++i) s.x.push_back(csv::parse_double(row[i]));
    s.tps = csv::parse_double(row[n]);
    s.latency = csv::parse_double(row[n + 1]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ConfigSample> read_dataset_csv(const std::filesystem::path& path) {
  return parse_dataset_csv(csv::read_text(path));
}

}  // namespace reltune
