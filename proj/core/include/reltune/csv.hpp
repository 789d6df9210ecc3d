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
#include <string_view>
#include <vector>

namespace reltune::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses comma-separated text. Quoting is not supported; every row must have
/// the same number of fields as the header. Throws std::runtime_error.
Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation; "nan"/"inf" for non-finite.
std::string format_double(double v);
double parse_double(std::string_view field);

std::string join(const std::vector<std::string>& fields);

/// Writes text atomically enough for our purposes: to a temp file then rename.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace reltune::csv
