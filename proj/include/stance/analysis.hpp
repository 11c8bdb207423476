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

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "stance/cotrain.hpp"
#include "stance/graph.hpp"

namespace stance {

struct EntityStanceEntry {
  Entity entity;
  Stance stance = Stance::kNone;
  double confidence = 0.0;
  double usage = 0.0;  // total edge weight of the entity
};

struct EntityStanceReport {
  double theta = 0.0;
  std::size_t top_n = 0;
  // Sorted by usage descending, then entity key.
  std::vector<EntityStanceEntry> pro;
  std::vector<EntityStanceEntry> anti;

  nlohmann::json to_json() const;
  // side,kind,entity,confidence,usage
  void write_csv(const std::filesystem::path& path) const;
};

// One user -> entity threshold pass from the users' joint stances. Entities
// that pass `theta` are kept, at most `top_n` per (side, kind) by usage; 0
// keeps all. Matrix rows missing from `users` count as neutral.
EntityStanceReport entity_stance_report(const BipartiteMatrix& matrix,
                                        const StanceTable& users, double theta,
                                        std::size_t top_n);

// counts[a][b] with index 0 = Pro, 1 = Anti.
struct CrossTab {
  std::array<std::array<std::size_t, 2>, 2> counts{};
  std::array<std::size_t, 2> row_totals{};
  std::array<std::size_t, 2> col_totals{};
  std::size_t total = 0;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

// Counts users with a non-zero stance in both tables.
CrossTab stance_cross_tab(const StanceTable& a, const StanceTable& b);

}  // namespace stance
