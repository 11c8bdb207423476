// Copyright 2026 The weakstance Authors
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
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace stance {

// Minimal RFC 4180 reader: quoted fields may contain separators, doubled
// quotes and newlines. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     char sep = ',');

// Quotes the field only when it contains the separator, a quote or a newline.
std::string csv_escape(std::string_view field, char sep = ',');

std::ifstream open_input(const std::filesystem::path& path);
// Creates parent directories as needed.
std::ofstream open_output(const std::filesystem::path& path);

// Reads a whole file; throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace stance
