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

// Shared helpers for the test binaries: temporary directories, tweet
// builders and dense reference implementations of the propagation rules.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stance/common.hpp"
#include "stance/corpus.hpp"
#include "stance/graph.hpp"
#include "stance/propagation.hpp"

namespace stance::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("weakstance-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Tweet tweet(std::string id, std::string user, std::string text,
                   std::optional<std::string> reply_to = std::nullopt,
                   std::optional<std::string> retweet_of = std::nullopt) {
  Tweet t;
  t.id = std::move(id);
  t.user = std::move(user);
  t.text = std::move(text);
  t.reply_to = std::move(reply_to);
  t.retweet_of = std::move(retweet_of);
  return t;
}

// Dense integer copy of a matrix: w[row][col]. Weights must be integral.
using Dense = std::vector<std::vector<long long>>;

inline Dense to_dense(const BipartiteMatrix& m) {
  Dense d(m.num_rows(), std::vector<long long>(m.num_cols(), 0));
  for (const Entry& e : m.entries()) {
    d[e.row][e.col] = static_cast<long long>(std::llround(e.weight));
  }
  return d;
}

// Threshold num / den, so that every comparison is exact in integers.
struct Ratio {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / den; }
};

// sign of sum_i (w_i / total) s_i against theta, as integer comparisons.
inline Stance exact_threshold(long long signed_sum, long long total,
                              Ratio theta) {
  if (total <= 0) return Stance::kNone;
  if (signed_sum * theta.den > theta.num * total) return Stance::kPro;
  if (signed_sum * theta.den < -theta.num * total) return Stance::kAnti;
  return Stance::kNone;
}

inline StanceVector dense_seed(const Dense& w,
                               const std::vector<int>& column_seed) {
  StanceVector out(w.size());
  for (std::size_t r = 0; r < w.size(); ++r) {
    long long pro = 0;
    long long anti = 0;
    for (std::size_t c = 0; c < column_seed.size(); ++c) {
      if (column_seed[c] > 0) pro += w[r][c];
      if (column_seed[c] < 0) anti += w[r][c];
    }
    if (pro == anti) continue;
    out.values[r] = pro > anti ? Stance::kPro : Stance::kAnti;
    out.confidence[r] =
        static_cast<double>(std::llabs(pro - anti)) / (pro + anti);
  }
  return out;
}

// User -> entity: column-normalized signed sum of user stances.
inline StanceVector dense_to_entities(const Dense& w, const StanceVector& users,
                                      Ratio theta) {
  const std::size_t cols = w.empty() ? 0 : w[0].size();
  StanceVector out(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    long long total = 0;
    long long signed_sum = 0;
    for (std::size_t r = 0; r < w.size(); ++r) {
      total += w[r][c];
      signed_sum += w[r][c] * to_int(users.values[r]);
    }
    out.values[c] = exact_threshold(signed_sum, total, theta);
    if (out.values[c] == Stance::kNone) continue;
    long long agree = 0;
    for (std::size_t r = 0; r < w.size(); ++r) {
      if (users.values[r] == out.values[c]) agree += w[r][c];
    }
    out.confidence[c] = static_cast<double>(agree) / total;
  }
  return out;
}

// Entity -> user: row-normalized signed sum of entity stances.
inline StanceVector dense_to_users(const Dense& w, const StanceVector& entities,
                                   Ratio theta) {
  StanceVector out(w.size());
  for (std::size_t r = 0; r < w.size(); ++r) {
    long long total = 0;
    long long signed_sum = 0;
    for (std::size_t c = 0; c < w[r].size(); ++c) {
      total += w[r][c];
      signed_sum += w[r][c] * to_int(entities.values[c]);
    }
    out.values[r] = exact_threshold(signed_sum, total, theta);
    if (out.values[r] == Stance::kNone) continue;
    long long agree = 0;
    for (std::size_t c = 0; c < w[r].size(); ++c) {
      if (entities.values[c] == out.values[r]) agree += w[r][c];
    }
    out.confidence[r] = static_cast<double>(agree) / total;
  }
  return out;
}

// Random hashtag matrix with small integer weights and a random seed
// assignment over its columns.
struct RandomGraph {
  BipartiteMatrix matrix;
  SeedHashtagSet seeds;
  std::vector<int> column_seed;
};

inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t max_users,
                                std::size_t max_entities) {
  std::uniform_int_distribution<std::size_t> users_dist(1, max_users);
  std::uniform_int_distribution<std::size_t> ents_dist(1, max_entities);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, 5);
  const std::size_t n = users_dist(rng);
  const std::size_t k = ents_dist(rng);
  const double density = 0.2 + 0.6 * unit(rng);

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back("u" + std::to_string(i));
  std::vector<Entity> cols;
  for (std::size_t j = 0; j < k; ++j) {
    cols.push_back({EntityKind::kHashtag, "h" + std::to_string(j)});
  }
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (unit(rng) < density) {
        entries.push_back({static_cast<Index>(i), static_cast<Index>(j),
                           static_cast<double>(weight(rng))});
      }
    }
  }
  RandomGraph g{BipartiteMatrix(rows, cols, entries), {}, {}};
  g.column_seed.assign(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    const double r = unit(rng);
    if (r < 0.2) g.column_seed[j] = 1;
    if (r > 0.8) g.column_seed[j] = -1;
  }
  if (std::count(g.column_seed.begin(), g.column_seed.end(), 0) ==
      static_cast<std::ptrdiff_t>(k)) {
    g.column_seed[0] = 1;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (g.column_seed[j] != 0) {
      g.seeds[cols[j].name] = stance_from_int(g.column_seed[j]);
    }
  }
  return g;
}

}  // namespace stance::testing
