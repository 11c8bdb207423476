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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stance/common.hpp"
#include "stance/graph.hpp"

namespace stance {

// Stances indexed like the rows (users) or columns (entities) of a matrix.
// confidence[i] == 0 exactly when values[i] == kNone.
struct StanceVector {
  std::vector<Stance> values;
  std::vector<double> confidence;

  StanceVector() = default;
  explicit StanceVector(std::size_t n)
      : values(n, Stance::kNone), confidence(n, 0.0) {}

  std::size_t size() const { return values.size(); }
  std::size_t count(Stance s) const;
};

// Hashtag name (lowercase, no '#') -> kPro or kAnti.
using SeedHashtagSet = std::map<std::string, Stance>;

// Parses "#thankyoutrump: Pro, #iranuprising: Anti" (commas or newlines
// between entries; ':' '=' or whitespace between tag and label). Throws
// InvalidInputError on a neutral label or a tag labeled both ways.
SeedHashtagSet parse_seed_hashtags(std::string_view text);
std::string format_seed_hashtags(const SeedHashtagSet& seeds);

// Scores each user by the signed sum of seed-hashtag weights in `m`'s
// hashtag columns. Confidence is |pro - anti| / (pro + anti) over the seed
// columns. Throws InvalidInputError for an empty seed set.
StanceVector seed_user_stance(const BipartiteMatrix& m,
                              const SeedHashtagSet& seeds);

// User -> entity threshold step over column-normalized weights. An entity
// becomes kPro when the normalized stance sum exceeds theta, kAnti when it is
// below -theta. Confidence is the share of the column weight coming from
// users with the entity's stance.
StanceVector propagate_to_entities(const BipartiteMatrix& m,
                                   const StanceVector& users, double theta);

// Entity -> user threshold step over row-normalized weights, with the
// edge-agreement confidence of network_confidence().
StanceVector propagate_to_users(const BipartiteMatrix& m,
                                const StanceVector& entities, double theta);

// Share of a user's edge weight leading to entities with the user's stance;
// 0 for neutral users.
std::vector<double> network_confidence(const BipartiteMatrix& m,
                                       const StanceVector& entities,
                                       std::span<const Stance> users);

// CSV with header "id,stance,confidence".
void write_stance_csv(std::span<const std::string> ids, const StanceVector& v,
                      const std::filesystem::path& path);

}  // namespace stance
