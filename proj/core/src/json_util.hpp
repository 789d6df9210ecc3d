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

#include <cstdint>
#include <cstdio>
#include <string>

#include "json.hpp"
#include "reltune/parameter_space.hpp"

namespace reltune::detail {

using json = nlohmann::ordered_json;

inline json space_to_json(const ParameterSpace& space) {
  json arr = json::array();
  for (const auto& p : space.params()) {
    arr.push_back({{"name", p.name}, {"lower", p.lower}, {"upper", p.upper}, {"kind", to_string(p.kind)}});
  }
  return arr;
}

inline ParameterSpace space_from_json(const json& arr) {
  std::vector<ParamSpec> params;
  for (const auto& p : arr) {
    params.push_back({p.at("name").get<std::string>(), p.at("lower").get<double>(), p.at("upper").get<double>(),
                      parse_param_kind(p.at("kind").get<std::string>())});
  }
  return ParameterSpace(std::move(params));
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::uint64_t parse_hex64(const std::string& s) { return std::stoull(s, nullptr, 16); }

}  // namespace reltune::detail
