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

#include "stance/textclf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <unordered_set>

#include "stance/table_io.hpp"

namespace stance {
namespace {

using nlohmann::json;

bool is_term_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_' || u >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, int max_ngram) {
  std::vector<std::string> unigrams;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_term_byte(text[i])) {
      ++i;
      continue;
    }
    const bool hashtag = i > 0 && text[i - 1] == '#' &&
                         (i < 2 || !is_term_byte(text[i - 2]));
    const std::size_t start = i;
    while (i < text.size() && is_term_byte(text[i])) ++i;
    std::string term = hashtag ? "#" : "";
    term += to_lower(text.substr(start, i - start));
    unigrams.push_back(std::move(term));
  }
  if (max_ngram < 2) return unigrams;

  std::vector<std::string> terms = unigrams;
  for (std::size_t k = 1; k < unigrams.size(); ++k) {
    terms.push_back(unigrams[k - 1] + " " + unigrams[k]);
  }
  return terms;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return s;
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) s += value[k] * dense[index[k]];
  return s;
}

double SparseVector::operator[](std::uint32_t i) const {
  auto it = std::lower_bound(index.begin(), index.end(), i);
  if (it == index.end() || *it != i) return 0.0;
  return value[static_cast<std::size_t>(it - index.begin())];
}

void SparseRows::append(const SparseVector& v) {
  index_.insert(index_.end(), v.index.begin(), v.index.end());
  value_.insert(value_.end(), v.value.begin(), v.value.end());
  row_ptr_.push_back(index_.size());
}

double SparseRows::dot(std::size_t row, std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
    s += value_[k] * dense[index_[k]];
  }
  return s;
}

double SparseRows::squared_norm(std::size_t row) const {
  double s = 0.0;
  for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
    s += value_[k] * value_[k];
  }
  return s;
}

Vocabulary Vocabulary::fit(std::span<const std::string> documents, int min_df,
                           int max_ngram) {
  if (documents.empty()) {
    throw InvalidInputError("cannot fit a vocabulary on zero documents");
  }
  std::unordered_map<std::string, std::uint32_t> df;
  std::unordered_set<std::string> seen;
  for (const std::string& doc : documents) {
    seen.clear();
    for (std::string& term : tokenize(doc, max_ngram)) {
      if (seen.insert(term).second) ++df[std::move(term)];
    }
  }

  Vocabulary vocab;
  vocab.num_documents_ = documents.size();
  vocab.max_ngram_ = max_ngram;
  for (auto& [term, count] : df) {
    if (static_cast<int>(count) >= min_df) vocab.terms_.push_back(term);
  }
  std::sort(vocab.terms_.begin(), vocab.terms_.end());
  vocab.df_.reserve(vocab.terms_.size());
  vocab.idf_.reserve(vocab.terms_.size());
  const double n = static_cast<double>(documents.size());
  for (std::size_t i = 0; i < vocab.terms_.size(); ++i) {
    const std::uint32_t d = df.at(vocab.terms_[i]);
    vocab.df_.push_back(d);
    vocab.idf_.push_back(std::log((1.0 + n) / (1.0 + d)) + 1.0);
    vocab.lookup_.emplace(vocab.terms_[i], static_cast<std::uint32_t>(i));
  }
  return vocab;
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  auto it = lookup_.find(std::string(term));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

SparseVector Vocabulary::transform(std::string_view doc) const {
  std::map<std::uint32_t, double> counts;
  for (const std::string& term : tokenize(doc, max_ngram_)) {
    auto it = lookup_.find(term);
    if (it != lookup_.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  v.index.reserve(counts.size());
  v.value.reserve(counts.size());
  double norm = 0.0;
  for (const auto& [i, c] : counts) {
    const double w = c * idf_[i];
    v.index.push_back(i);
    v.value.push_back(w);
    norm += w * w;
  }
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& w : v.value) w /= norm;
  }
  return v;
}

json Vocabulary::to_json() const {
  return json{{"terms", terms_},
              {"df", df_},
              {"idf", idf_},
              {"num_documents", num_documents_},
              {"max_ngram", max_ngram_}};
}

Vocabulary Vocabulary::from_json(const json& j) {
  Vocabulary v;
  v.terms_ = j.at("terms").get<std::vector<std::string>>();
  v.df_ = j.at("df").get<std::vector<std::uint32_t>>();
  v.idf_ = j.at("idf").get<std::vector<double>>();
  v.num_documents_ = j.at("num_documents").get<std::size_t>();
  v.max_ngram_ = j.at("max_ngram").get<int>();
  if (v.df_.size() != v.terms_.size() || v.idf_.size() != v.terms_.size()) {
    throw InvalidInputError("vocabulary arrays have inconsistent lengths");
  }
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    v.lookup_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
  }
  return v;
}

double LinearModel::decision(const SparseVector& x) const {
  double s = bias;
  for (std::size_t k = 0; k < x.index.size(); ++k) {
    if (x.index[k] < weights.size()) s += weights[x.index[k]] * x.value[k];
  }
  return s;
}

double LinearModel::decision(const SparseRows& rows, std::size_t row) const {
  return bias + rows.dot(row, weights);
}

json LinearModel::to_json() const {
  return json{{"weights", weights},
              {"bias", bias},
              {"l2", options.l2},
              {"epochs", options.epochs},
              {"learning_rate", options.learning_rate}};
}

LinearModel LinearModel::from_json(const json& j) {
  LinearModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.options.l2 = j.value("l2", m.options.l2);
  m.options.epochs = j.value("epochs", m.options.epochs);
  m.options.learning_rate = j.value("learning_rate", m.options.learning_rate);
  return m;
}

LinearModel train_linear(const SparseRows& rows,
                         std::span<const std::size_t> subset,
                         std::span<const int> labels,
                         std::span<const double> weights, std::size_t dim,
                         const TrainOptions& options) {
  if (subset.size() != labels.size() ||
      (!weights.empty() && weights.size() != labels.size())) {
    throw InvalidInputError("training subset, labels and weights differ in size");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (int y : labels) {
    if (y != 1 && y != -1) throw InvalidInputError("labels must be +1 or -1");
    (y > 0 ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw InvalidInputError("training data must contain both classes");
  }
  if (options.epochs < 1) throw InvalidInputError("epochs must be >= 1");

  const std::size_t n = subset.size();
  double total_weight = 0.0;
  double max_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (subset[i] >= rows.rows()) {
      throw InvalidInputError("training subset index out of range");
    }
    total_weight += weights.empty() ? 1.0 : weights[i];
    max_sq = std::max(max_sq, rows.squared_norm(subset[i]));
    for (std::uint32_t idx : rows.indices(subset[i])) {
      if (idx >= dim) throw InvalidInputError("feature index exceeds dim");
    }
  }
  if (!(total_weight > 0.0)) {
    throw InvalidInputError("example weights must sum to a positive value");
  }
  const double lambda = options.l2;
  const double smoothness = 2.0 * (max_sq + 1.0) + lambda;
  const double step =
      options.learning_rate > 0.0 ? options.learning_rate : 1.0 / smoothness;

  std::vector<double> w(dim, 0.0);
  std::vector<double> w_prev(dim, 0.0);
  std::vector<double> look(dim, 0.0);
  std::vector<double> grad(dim, 0.0);
  double b = 0.0;
  double b_prev = 0.0;

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    const double momentum = static_cast<double>(epoch - 1) / (epoch + 2);
    for (std::size_t d = 0; d < dim; ++d) {
      look[d] = w[d] + momentum * (w[d] - w_prev[d]);
      grad[d] = lambda * look[d];
    }
    const double look_b = b + momentum * (b - b_prev);
    double grad_b = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t row = subset[i];
      const double y = labels[i];
      const double margin = y * (rows.dot(row, look) + look_b);
      if (margin >= 1.0) continue;
      const double sw = weights.empty() ? 1.0 : weights[i];
      const double coef = -2.0 * sw * y * (1.0 - margin) / total_weight;
      auto idx = rows.indices(row);
      auto val = rows.values(row);
      for (std::size_t k = 0; k < idx.size(); ++k) grad[idx[k]] += coef * val[k];
      grad_b += coef;
    }

    w_prev.swap(w);
    for (std::size_t d = 0; d < dim; ++d) w[d] = look[d] - step * grad[d];
    b_prev = b;
    b = look_b - step * grad_b;
  }

  LinearModel model;
  model.weights = std::move(w);
  model.bias = b;
  model.options = options;
  return model;
}

LinearModel train_linear(std::span<const LabeledExample> examples,
                         std::size_t dim, const TrainOptions& options) {
  SparseRows rows;
  std::vector<std::size_t> subset;
  std::vector<int> labels;
  std::vector<double> weights;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    rows.append(examples[i].features);
    subset.push_back(i);
    labels.push_back(examples[i].label);
    weights.push_back(examples[i].weight);
  }
  return train_linear(rows, subset, labels, weights, dim, options);
}

double LinearTextModel::predict_score(std::string_view doc) const {
  return model.decision(vocabulary.transform(doc));
}

LinearTextModel train_text_model(std::span<const std::string> documents,
                                 std::span<const int> labels, int min_df,
                                 int max_ngram, const TrainOptions& options) {
  if (documents.size() != labels.size()) {
    throw InvalidInputError("documents and labels differ in size");
  }
  LinearTextModel out;
  out.vocabulary = Vocabulary::fit(documents, min_df, max_ngram);
  SparseRows rows;
  std::vector<std::size_t> subset(documents.size());
  for (std::size_t i = 0; i < documents.size(); ++i) {
    rows.append(out.vocabulary.transform(documents[i]));
    subset[i] = i;
  }
  out.model = train_linear(rows, subset, labels, {}, out.vocabulary.size(),
                           options);
  return out;
}

UserStance aggregate_user_stance(std::span<const double> scores,
                                 double theta) {
  if (scores.empty()) return {};
  std::size_t pro = 0;
  std::size_t con = 0;
  for (double s : scores) {
    if (s > 0) ++pro;
    if (s < 0) ++con;
  }
  const double m = static_cast<double>(scores.size());
  const double pro_fraction = static_cast<double>(pro) / m;
  const double con_fraction = static_cast<double>(con) / m;
  if (pro_fraction > theta) return {Stance::kPro, pro_fraction};
  if (con_fraction > theta) return {Stance::kAnti, con_fraction};
  return {};
}

UserStance aggregate_user_stance(const LinearTextModel& model,
                                 std::span<const std::string> user_docs,
                                 double theta) {
  std::vector<double> scores;
  scores.reserve(user_docs.size());
  for (const auto& doc : user_docs) scores.push_back(model.predict_score(doc));
  return aggregate_user_stance(scores, theta);
}

void save_text_model(const LinearTextModel& model,
                     const std::filesystem::path& path) {
  json j{{"format", kModelFormat},
         {"version", kModelVersion},
         {"kind", "text"},
         {"vocabulary", model.vocabulary.to_json()},
         {"model", model.model.to_json()}};
  std::ofstream out = open_output(path);
  out << j.dump() << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LinearTextModel load_text_model(const std::filesystem::path& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || j.value("format", "") != kModelFormat ||
      j.value("kind", "") != "text") {
    throw InvalidInputError("'" + path.string() + "' is not a text model file");
  }
  if (j.value("version", 0) != kModelVersion) {
    throw InvalidInputError("unsupported model version in '" + path.string() +
                            "'");
  }
  LinearTextModel m;
  m.vocabulary = Vocabulary::from_json(j.at("vocabulary"));
  m.model = LinearModel::from_json(j.at("model"));
  return m;
}

}  // namespace stance
