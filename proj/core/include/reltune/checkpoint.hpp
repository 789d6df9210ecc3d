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
#include <string>

#include "reltune/gnn.hpp"

namespace reltune {

inline constexpr int kCheckpointVersion = 1;

/// Versioned JSON checkpoint: architecture, parameter space, graph hash and
/// edge list, semantic node features, every weight tensor (row-major doubles)
/// and the metric normalization statistics.
std::string model_to_json(const Model& model);
/// Throws std::runtime_error on schema/version mismatch or a graph hash that
/// does not match the stored edge list.
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace reltune
