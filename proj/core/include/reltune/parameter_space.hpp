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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reltune {

enum class ParamKind { kContinuous, kInteger, kBoolean };

const char* to_string(ParamKind kind);
ParamKind parse_param_kind(const std::string& s);

struct ParamSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  ParamKind kind = ParamKind::kContinuous;
};

/// Ordered parameter descriptors; the order is the configuration vector layout.
class ParameterSpace {
 public:
  ParameterSpace() = default;
  /// Throws std::invalid_argument on duplicate names or lower >= upper.
  /// Boolean parameters always get bounds [0, 1].
  explicit ParameterSpace(std::vector<ParamSpec> params);

  std::size_t dimension() const { return params_.size(); }
  const ParamSpec& operator[](std::size_t i) const { return params_[i]; }
  const std::vector<ParamSpec>& params() const { return params_; }
  std::vector<std::string> names() const;
  bool contains(std::span<const double> x) const;

  bool operator==(const ParameterSpace&) const;

 private:
  std::vector<ParamSpec> params_;
};

/// One measured configuration.
struct ConfigSample {
  std::vector<double> x;  // native units, space layout
  double tps = 0.0;       // ops/s
  double latency = 0.0;   // ms
};

/// Min-max map to [0, 1]. Throws std::invalid_argument for a component outside
/// its bounds or a length mismatch.
Eigen::VectorXd normalize_config(const ParameterSpace& space, std::span<const double> x);

/// Inverse min-max. Integers round to nearest, booleans threshold at 0.5.
/// Inputs are clamped to [0, 1] first.
std::vector<double> denormalize_config(const ParameterSpace& space, const Eigen::VectorXd& u);

/// CSV `p0,...,p{n-1},tps,latency`.
std::string dataset_to_csv(const std::vector<ConfigSample>& data, std::size_t n_params);
std::vector<ConfigSample> parse_dataset_csv(const std::string& text);
std::vector<ConfigSample> read_dataset_csv(const std::filesystem::path& path);

}  // namespace reltune
