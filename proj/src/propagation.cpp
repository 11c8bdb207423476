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

#include "stance/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "stance/table_io.hpp"

namespace stance {
namespace {

// Linear threshold rule; strict on both sides.
Stance threshold(double sum, double theta) {
  if (sum > theta) return Stance::kPro;
  if (sum < -theta) return Stance::kAnti;
  return Stance::kNone;
}

// Per-target weight split by the stance of the other endpoint.
struct WeightSplit {
  double pro = 0.0;
  double anti = 0.0;
  double total = 0.0;

  Stance decide(double theta) const {
    if (total <= 0.0) return Stance::kNone;
    return threshold((pro - anti) / total, theta);
  }
  double agreement(Stance s) const {
    if (s == Stance::kNone || total <= 0.0) return 0.0;
    return (s == Stance::kPro ? pro : anti) / total;
  }
};

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw InvalidInputError("threshold must lie in [0, 1]");
  }
}

}  // namespace

std::size_t StanceVector::count(Stance s) const {
  return static_cast<std::size_t>(std::count(values.begin(), values.end(), s));
}

SeedHashtagSet parse_seed_hashtags(std::string_view text) {
  SeedHashtagSet seeds;
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), '\n', ',');
  for (std::string_view entry : split(normalized, ',')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    std::size_t sep = entry.find_first_of(":=");
    if (sep == std::string_view::npos) sep = entry.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw InvalidInputError("seed entry '" + std::string(entry) +
                              "' lacks a label");
    }
    std::string_view tag = trim(entry.substr(0, sep));
    while (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
    const Stance label = parse_stance(entry.substr(sep + 1));
    if (tag.empty() || label == Stance::kNone) {
      throw InvalidInputError("seed entry '" + std::string(entry) +
                              "' needs a hashtag and a Pro/Anti label");
    }
    const std::string key = to_lower(tag);
    auto [it, inserted] = seeds.emplace(key, label);
    if (!inserted && it->second != label) {
      throw InvalidInputError("seed hashtag '" + key +
                              "' is labeled both Pro and Anti");
    }
  }
  return seeds;
}

std::string format_seed_hashtags(const SeedHashtagSet& seeds) {
  std::string out;
  for (const auto& [tag, label] : seeds) {
    if (!out.empty()) out += ", ";
    out += "#" + tag + ": " + (label == Stance::kPro ? "Pro" : "Anti");
  }
  return out;
}

StanceVector seed_user_stance(const BipartiteMatrix& m,
                              const SeedHashtagSet& seeds) {
  if (seeds.empty()) {
    throw InvalidInputError("seed hashtag set is empty; nothing to propagate");
  }
  // Column position -> seed label, kNone for non-seed columns.
  std::vector<Stance> column_label(m.num_cols(), Stance::kNone);
  for (const auto& [tag, label] : seeds) {
    if (auto col = m.col_index(Entity{EntityKind::kHashtag, tag})) {
      column_label[*col] = label;
    }
  }

  StanceVector out(m.num_rows());
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    WeightSplit split;
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Stance label = column_label[cols[k]];
      if (label == Stance::kPro) split.pro += vals[k];
      if (label == Stance::kAnti) split.anti += vals[k];
    }
    const double score = split.pro - split.anti;
    if (score == 0.0) continue;
    out.values[r] = score > 0 ? Stance::kPro : Stance::kAnti;
    out.confidence[r] = std::abs(score) / (split.pro + split.anti);
  }
  return out;
}

StanceVector propagate_to_entities(const BipartiteMatrix& m,
                                   const StanceVector& users, double theta) {
  check_theta(theta);
  if (users.size() != m.num_rows()) {
    throw InvalidInputError("user stance vector does not match matrix rows");
  }
  std::vector<WeightSplit> splits(m.num_cols());
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    const Stance s = users.values[r];
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      WeightSplit& split = splits[cols[k]];
      split.total += vals[k];
      if (s == Stance::kPro) split.pro += vals[k];
      if (s == Stance::kAnti) split.anti += vals[k];
    }
  }
  StanceVector out(m.num_cols());
  for (std::size_t c = 0; c < splits.size(); ++c) {
    out.values[c] = splits[c].decide(theta);
    out.confidence[c] = splits[c].agreement(out.values[c]);
  }
  return out;
}

StanceVector propagate_to_users(const BipartiteMatrix& m,
                                const StanceVector& entities, double theta) {
  check_theta(theta);
  if (entities.size() != m.num_cols()) {
    throw InvalidInputError(
        "entity stance vector does not match matrix columns");
  }
  StanceVector out(m.num_rows());
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    WeightSplit split;
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      split.total += vals[k];
      const Stance s = entities.values[cols[k]];
      if (s == Stance::kPro) split.pro += vals[k];
      if (s == Stance::kAnti) split.anti += vals[k];
    }
    out.values[r] = split.decide(theta);
    out.confidence[r] = split.agreement(out.values[r]);
  }
  return out;
}

std::vector<double> network_confidence(const BipartiteMatrix& m,
                                       const StanceVector& entities,
                                       std::span<const Stance> users) {
  if (entities.size() != m.num_cols() || users.size() != m.num_rows()) {
    throw InvalidInputError("stance vectors do not match matrix shape");
  }
  std::vector<double> conf(m.num_rows(), 0.0);
  for (std::size_t r = 0; r < m.num_rows(); ++r) {
    if (users[r] == Stance::kNone) continue;
    double agree = 0.0;
    double total = 0.0;
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      total += vals[k];
      if (entities.values[cols[k]] == users[r]) agree += vals[k];
    }
    conf[r] = total > 0.0 ? agree / total : 0.0;
  }
  return conf;
}

void write_stance_csv(std::span<const std::string> ids, const StanceVector& v,
                      const std::filesystem::path& path) {
  if (ids.size() != v.size()) {
    throw InvalidInputError("id list does not match stance vector");
  }
  std::ofstream out = open_output(path);
  out << "id,stance,confidence\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << csv_escape(ids[i]) << ',' << to_int(v.values[i]) << ','
        << format_fixed(v.confidence[i], 6) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace stance
