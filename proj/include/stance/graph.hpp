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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stance/corpus.hpp"

namespace stance {

enum class EntityKind : std::uint8_t { kHashtag, kRetweet, kMention, kUrl };

std::string_view to_string(EntityKind kind);
EntityKind parse_entity_kind(std::string_view text);

// Column identity. The kind namespaces the name, so a hashtag and a retweeted
// tweet id never collide.
struct Entity {
  EntityKind kind = EntityKind::kHashtag;
  std::string name;

  // "hashtag:guncontrolnow", "retweet:12345", ...
  std::string key() const;
  static Entity parse(std::string_view key);

  auto operator<=>(const Entity&) const = default;
};

struct EntityHash {
  std::size_t operator()(const Entity& e) const;
};

using Index = std::uint32_t;

// One stored entry addressed by row/column position.
struct Entry {
  Index row = 0;
  Index col = 0;
  double weight = 0.0;
};

// Sparse non-negative user x entity matrix in CSR form. Immutable after
// construction; memory scales with the number of non-zeros.
class BipartiteMatrix {
 public:
  BipartiteMatrix() = default;

  // Duplicate (row, col) entries are summed and zero sums dropped. Throws
  // InvalidInputError on negative weights, out-of-range positions or
  // duplicate row/column ids.
  BipartiteMatrix(std::vector<std::string> rows, std::vector<Entity> cols,
                  std::vector<Entry> entries);

  std::size_t num_rows() const { return row_ids_.size(); }
  std::size_t num_cols() const { return col_ids_.size(); }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::string>& row_ids() const { return row_ids_; }
  const std::vector<Entity>& col_ids() const { return col_ids_; }

  std::span<const Index> row_cols(std::size_t row) const {
    return {col_idx_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }
  std::span<const double> row_values(std::size_t row) const {
    return {values_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }

  std::optional<std::size_t> row_index(std::string_view id) const;
  std::optional<std::size_t> col_index(const Entity& e) const;

  // 0 when absent.
  double weight(std::size_t row, std::size_t col) const;

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
  double total_weight() const;

  std::vector<Entry> entries() const;

 private:
  std::vector<std::string> row_ids_;
  std::vector<Entity> col_ids_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> row_lookup_;
  std::unordered_map<Entity, std::size_t, EntityHash> col_lookup_;
};

// Rows are all corpus users in id order. Columns are the k most used
// hashtags (use = tweets containing the tag; ties by name). Any `forced`
// hashtag present in the corpus is kept, displacing the lowest-ranked tags
// so the column count stays <= k. Entry (u, h) counts u's tweets with h.
BipartiteMatrix build_user_hashtag_matrix(
    const TweetCorpus& corpus, std::size_t k,
    std::span<const std::string> forced = {});

// Columns are the p most retweeted tweet ids; entry (u, t) counts how often
// u retweeted t.
BipartiteMatrix build_user_retweet_matrix(const TweetCorpus& corpus,
                                          std::size_t p);

// Same construction over mentions and URL domains, for entity reports.
BipartiteMatrix build_user_mention_matrix(const TweetCorpus& corpus,
                                          std::size_t top);
BipartiteMatrix build_user_url_matrix(const TweetCorpus& corpus,
                                      std::size_t top);

// Rows are the sorted union of both row sets; columns of `b` follow those of
// `a`. A column present in both is merged by summing weights.
BipartiteMatrix union_matrices(const BipartiteMatrix& a,
                               const BipartiteMatrix& b);

// Each non-empty row sums to 1; empty rows stay empty.
BipartiteMatrix row_normalize(const BipartiteMatrix& m);

// Tab-separated triplets "row_id<TAB>col_key<TAB>weight" behind a header.
// Rows and columns without entries are declared with an empty counterpart
// so that the full universe and column order survive a round trip.
void write_triplets(const BipartiteMatrix& m, const std::filesystem::path& path);
BipartiteMatrix read_triplets(const std::filesystem::path& path);

}  // namespace stance
