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

#include "stance/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <utility>

#include "stance/table_io.hpp"

namespace stance {

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kHashtag:
      return "hashtag";
    case EntityKind::kRetweet:
      return "retweet";
    case EntityKind::kMention:
      return "mention";
    case EntityKind::kUrl:
      return "url";
  }
  return "hashtag";
}

EntityKind parse_entity_kind(std::string_view text) {
  if (text == "hashtag") return EntityKind::kHashtag;
  if (text == "retweet") return EntityKind::kRetweet;
  if (text == "mention") return EntityKind::kMention;
  if (text == "url") return EntityKind::kUrl;
  throw InvalidInputError("unknown entity kind '" + std::string(text) + "'");
}

std::string Entity::key() const {
  std::string out(to_string(kind));
  out.push_back(':');
  out.append(name);
  return out;
}

Entity Entity::parse(std::string_view key) {
  const std::size_t colon = key.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInputError("entity key without kind prefix: '" +
                            std::string(key) + "'");
  }
  return Entity{parse_entity_kind(key.substr(0, colon)),
                std::string(key.substr(colon + 1))};
}

std::size_t EntityHash::operator()(const Entity& e) const {
  return std::hash<std::string>{}(e.name) * 31 +
         static_cast<std::size_t>(e.kind);
}

BipartiteMatrix::BipartiteMatrix(std::vector<std::string> rows,
                                 std::vector<Entity> cols,
                                 std::vector<Entry> entries)
    : row_ids_(std::move(rows)), col_ids_(std::move(cols)) {
  row_lookup_.reserve(row_ids_.size());
  for (std::size_t i = 0; i < row_ids_.size(); ++i) {
    if (!row_lookup_.emplace(row_ids_[i], i).second) {
      throw InvalidInputError("duplicate row id '" + row_ids_[i] + "'");
    }
  }
  col_lookup_.reserve(col_ids_.size());
  for (std::size_t j = 0; j < col_ids_.size(); ++j) {
    if (!col_lookup_.emplace(col_ids_[j], j).second) {
      throw InvalidInputError("duplicate column id '" + col_ids_[j].key() +
                              "'");
    }
  }
  for (const Entry& e : entries) {
    if (e.row >= row_ids_.size() || e.col >= col_ids_.size()) {
      throw InvalidInputError("matrix entry out of range");
    }
    if (!(e.weight >= 0.0)) {
      throw InvalidInputError("matrix weights must be non-negative");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  row_ptr_.assign(row_ids_.size() + 1, 0);
  col_idx_.reserve(entries.size());
  values_.reserve(entries.size());
  std::size_t i = 0;
  while (i < entries.size()) {
    const Index r = entries[i].row;
    const Index c = entries[i].col;
    double w = 0.0;
    while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
      w += entries[i].weight;
      ++i;
    }
    if (w == 0.0) continue;
    col_idx_.push_back(c);
    values_.push_back(w);
    ++row_ptr_[r + 1];
  }
  for (std::size_t r = 0; r < row_ids_.size(); ++r) {
    row_ptr_[r + 1] += row_ptr_[r];
  }
}

std::optional<std::size_t> BipartiteMatrix::row_index(
    std::string_view id) const {
  auto it = row_lookup_.find(std::string(id));
  if (it == row_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> BipartiteMatrix::col_index(const Entity& e) const {
  auto it = col_lookup_.find(e);
  if (it == col_lookup_.end()) return std::nullopt;
  return it->second;
}

double BipartiteMatrix::weight(std::size_t row, std::size_t col) const {
  auto cols = row_cols(row);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Index>(col));
  if (it == cols.end() || *it != col) return 0.0;
  return values_[row_ptr_[row] + static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> BipartiteMatrix::row_sums() const {
  std::vector<double> sums(num_rows(), 0.0);
  for (std::size_t r = 0; r < num_rows(); ++r) {
    for (double w : row_values(r)) sums[r] += w;
  }
  return sums;
}

std::vector<double> BipartiteMatrix::col_sums() const {
  std::vector<double> sums(num_cols(), 0.0);
  for (std::size_t k = 0; k < nnz(); ++k) sums[col_idx_[k]] += values_[k];
  return sums;
}

double BipartiteMatrix::total_weight() const {
  double total = 0.0;
  for (double w : values_) total += w;
  return total;
}

std::vector<Entry> BipartiteMatrix::entries() const {
  std::vector<Entry> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < num_rows(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      out.push_back(Entry{static_cast<Index>(r), col_idx_[k], values_[k]});
    }
  }
  return out;
}

namespace {

using NameExtractor =
    std::function<void(const Tweet&, std::vector<std::string_view>&)>;

// Counts, per name, the tweets carrying it; keeps the top `limit` by count
// (then name) plus any forced names; emits one unit entry per (tweet, name).
BipartiteMatrix build_counted(const TweetCorpus& corpus, EntityKind kind,
                              std::size_t limit,
                              std::span<const std::string> forced,
                              const NameExtractor& extract) {
  std::vector<std::string> rows(corpus.users().begin(), corpus.users().end());
  std::unordered_map<std::string_view, Index> row_of;
  row_of.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_of.emplace(rows[i], static_cast<Index>(i));
  }

  std::unordered_map<std::string_view, std::size_t> totals;
  std::vector<std::string_view> names;
  for (const auto& [id, t] : corpus.tweets()) {
    names.clear();
    extract(t, names);
    for (std::string_view n : names) ++totals[n];
  }

  std::vector<std::pair<std::string_view, std::size_t>> ranked(totals.begin(),
                                                               totals.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::set<std::string_view> keep;
  for (const std::string& f : forced) {
    if (totals.count(f) != 0) keep.insert(f);
  }
  for (const auto& [name, count] : ranked) {
    if (keep.size() >= limit) break;
    keep.insert(name);
  }

  std::vector<Entity> cols;
  std::unordered_map<std::string_view, Index> col_of;
  for (const auto& [name, count] : ranked) {
    if (keep.count(name) == 0) continue;
    col_of.emplace(name, static_cast<Index>(cols.size()));
    cols.push_back(Entity{kind, std::string(name)});
  }

  std::vector<Entry> entries;
  for (const auto& [id, t] : corpus.tweets()) {
    names.clear();
    extract(t, names);
    const Index row = row_of.at(t.user);
    for (std::string_view n : names) {
      auto it = col_of.find(n);
      if (it != col_of.end()) entries.push_back(Entry{row, it->second, 1.0});
    }
  }
  return BipartiteMatrix(std::move(rows), std::move(cols), std::move(entries));
}

}  // namespace

BipartiteMatrix build_user_hashtag_matrix(const TweetCorpus& corpus,
                                          std::size_t k,
                                          std::span<const std::string> forced) {
  if (k == 0) throw InvalidInputError("k must be >= 1");
  return build_counted(corpus, EntityKind::kHashtag, k, forced,
                       [](const Tweet& t, std::vector<std::string_view>& out) {
                         for (const auto& h : t.hashtags) out.push_back(h);
                       });
}

BipartiteMatrix build_user_retweet_matrix(const TweetCorpus& corpus,
                                          std::size_t p) {
  if (p == 0) throw InvalidInputError("p must be >= 1");
  return build_counted(corpus, EntityKind::kRetweet, p, {},
                       [](const Tweet& t, std::vector<std::string_view>& out) {
                         if (t.retweet_of) out.push_back(*t.retweet_of);
                       });
}

BipartiteMatrix build_user_mention_matrix(const TweetCorpus& corpus,
                                          std::size_t top) {
  if (top == 0) throw InvalidInputError("top must be >= 1");
  return build_counted(corpus, EntityKind::kMention, top, {},
                       [](const Tweet& t, std::vector<std::string_view>& out) {
                         for (const auto& m : t.mentions) out.push_back(m);
                       });
}

BipartiteMatrix build_user_url_matrix(const TweetCorpus& corpus,
                                      std::size_t top) {
  if (top == 0) throw InvalidInputError("top must be >= 1");
  return build_counted(corpus, EntityKind::kUrl, top, {},
                       [](const Tweet& t, std::vector<std::string_view>& out) {
                         for (const auto& d : t.url_domains) out.push_back(d);
                       });
}

BipartiteMatrix union_matrices(const BipartiteMatrix& a,
                               const BipartiteMatrix& b) {
  std::vector<std::string> ra = a.row_ids();
  std::vector<std::string> rb = b.row_ids();
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  std::vector<std::string> rows;
  rows.reserve(ra.size() + rb.size());
  std::set_union(ra.begin(), ra.end(), rb.begin(), rb.end(),
                 std::back_inserter(rows));

  std::unordered_map<std::string_view, Index> row_of;
  row_of.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_of.emplace(rows[i], static_cast<Index>(i));
  }

  std::vector<Entity> cols = a.col_ids();
  std::unordered_map<Entity, Index, EntityHash> col_of;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    col_of.emplace(cols[j], static_cast<Index>(j));
  }
  std::vector<Index> b_col(b.num_cols());
  for (std::size_t j = 0; j < b.num_cols(); ++j) {
    const Entity& e = b.col_ids()[j];
    auto [it, inserted] = col_of.emplace(e, static_cast<Index>(cols.size()));
    if (inserted) cols.push_back(e);
    b_col[j] = it->second;
  }

  std::vector<Entry> entries;
  entries.reserve(a.nnz() + b.nnz());
  for (const Entry& e : a.entries()) {
    entries.push_back(Entry{row_of.at(a.row_ids()[e.row]), e.col, e.weight});
  }
  for (const Entry& e : b.entries()) {
    entries.push_back(
        Entry{row_of.at(b.row_ids()[e.row]), b_col[e.col], e.weight});
  }
  return BipartiteMatrix(std::move(rows), std::move(cols), std::move(entries));
}

BipartiteMatrix row_normalize(const BipartiteMatrix& m) {
  const std::vector<double> sums = m.row_sums();
  std::vector<Entry> entries = m.entries();
  for (Entry& e : entries) e.weight /= sums[e.row];
  return BipartiteMatrix(m.row_ids(), m.col_ids(), std::move(entries));
}

void write_triplets(const BipartiteMatrix& m,
                    const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "row_id\tcol_id\tweight\n";
  for (const auto& r : m.row_ids()) out << r << "\t\t\n";
  for (const auto& c : m.col_ids()) out << '\t' << c.key() << "\t\n";
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out << m.row_ids()[r] << '\t' << m.col_ids()[cols[k]].key() << '\t'
          << format_double(vals[k]) << '\n';
    }
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

BipartiteMatrix read_triplets(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("row_id\tcol_id\tweight", 0) != 0) {
    throw InvalidInputError("'" + path.string() +
                            "' is not a triplet file (bad header)");
  }
  std::vector<std::string> rows;
  std::vector<Entity> cols;
  std::unordered_map<std::string, Index> row_of;
  std::unordered_map<Entity, Index, EntityHash> col_of;
  std::vector<Entry> entries;

  auto intern_row = [&](std::string_view id) {
    auto [it, inserted] =
        row_of.emplace(std::string(id), static_cast<Index>(rows.size()));
    if (inserted) rows.emplace_back(id);
    return it->second;
  };
  auto intern_col = [&](std::string_view key) {
    Entity e = Entity::parse(key);
    auto [it, inserted] = col_of.emplace(e, static_cast<Index>(cols.size()));
    if (inserted) cols.push_back(std::move(e));
    return it->second;
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw InvalidInputError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 3 tab-separated fields");
    }
    if (fields[1].empty()) {
      intern_row(fields[0]);
    } else if (fields[0].empty()) {
      intern_col(fields[1]);
    } else {
      const Index r = intern_row(fields[0]);
      const Index c = intern_col(fields[1]);
      const std::string w(fields[2]);
      char* end = nullptr;
      const double weight = std::strtod(w.c_str(), &end);
      if (end == w.c_str()) {
        throw InvalidInputError(path.string() + ":" + std::to_string(line_no) +
                                ": bad weight '" + w + "'");
      }
      entries.push_back(Entry{r, c, weight});
    }
  }
  return BipartiteMatrix(std::move(rows), std::move(cols), std::move(entries));
}

}  // namespace stance
