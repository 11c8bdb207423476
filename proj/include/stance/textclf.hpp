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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "stance/common.hpp"

namespace stance {

// Lowercased runs of letters, digits, '_' and non-ASCII bytes. A '#'
// directly in front of a run is kept, so hashtags stay distinct terms.
// With max_ngram == 2, adjacent unigrams also yield "a b" bigrams.
std::vector<std::string> tokenize(std::string_view text, int max_ngram = 1);

// Sorted, duplicate-free indices.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  bool empty() const { return index.empty(); }
  double squared_norm() const;
  double dot(std::span<const double> dense) const;
  double operator[](std::uint32_t i) const;
};

// Row-stacked sparse vectors.
class SparseRows {
 public:
  void append(const SparseVector& v);
  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t nnz() const { return index_.size(); }

  std::span<const std::uint32_t> indices(std::size_t row) const {
    return {index_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }
  std::span<const double> values(std::size_t row) const {
    return {value_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
  }
  double dot(std::size_t row, std::span<const double> dense) const;
  double squared_norm(std::size_t row) const;

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> index_;
  std::vector<double> value_;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  // Keeps terms with document frequency >= min_df. Terms are indexed in
  // lexicographic order; idf = ln((1 + N) / (1 + df)) + 1. Throws
  // InvalidInputError for an empty document list.
  static Vocabulary fit(std::span<const std::string> documents, int min_df,
                        int max_ngram = 2);

  // count * idf per in-vocabulary term, L2-normalized; zero vector when no
  // term is known.
  SparseVector transform(std::string_view doc) const;

  std::size_t size() const { return terms_.size(); }
  std::size_t num_documents() const { return num_documents_; }
  int max_ngram() const { return max_ngram_; }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::uint32_t> index_of(std::string_view term) const;
  double idf(std::uint32_t i) const { return idf_[i]; }
  std::uint32_t document_frequency(std::uint32_t i) const { return df_[i]; }

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
  std::size_t num_documents_ = 0;
  int max_ngram_ = 1;
};

struct TrainOptions {
  double l2 = 1e-4;
  int epochs = 200;
  // <= 0 selects 1/L from the data's smoothness bound.
  double learning_rate = 0.0;
};

// L2-regularized squared-hinge linear classifier (an L2-loss SVM) fitted by
// full-batch accelerated gradient descent on the weighted mean loss. The
// bias is not regularized. No sampling is involved, so training is fully
// deterministic.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  TrainOptions options;

  double decision(const SparseVector& x) const;
  double decision(const SparseRows& rows, std::size_t row) const;

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

// Trains on `rows[subset[i]]` with label labels[i] in {+1, -1} and example
// weight weights[i] (empty span = all ones). Throws InvalidInputError when
// fewer than two classes are present.
LinearModel train_linear(const SparseRows& rows,
                         std::span<const std::size_t> subset,
                         std::span<const int> labels,
                         std::span<const double> weights, std::size_t dim,
                         const TrainOptions& options = {});

struct LabeledExample {
  SparseVector features;
  int label = 0;
  double weight = 1.0;
};

LinearModel train_linear(std::span<const LabeledExample> examples,
                         std::size_t dim, const TrainOptions& options = {});

// Vocabulary plus linear weights: the per-tweet text classifier.
struct LinearTextModel {
  Vocabulary vocabulary;
  LinearModel model;

  // Positive means pro.
  double predict_score(std::string_view doc) const;
};

LinearTextModel train_text_model(std::span<const std::string> documents,
                                 std::span<const int> labels, int min_df,
                                 int max_ngram,
                                 const TrainOptions& options = {});

struct UserStance {
  Stance stance = Stance::kNone;
  double confidence = 0.0;
};

// Threshold rule over one user's per-tweet scores: pro when the fraction of
// positive scores exceeds theta, else anti when the fraction of negative
// scores does; the winning fraction is the confidence. Scores of exactly 0
// count for neither side. No scores -> (kNone, 0).
UserStance aggregate_user_stance(std::span<const double> scores, double theta);
UserStance aggregate_user_stance(const LinearTextModel& model,
                                 std::span<const std::string> user_docs,
                                 double theta);

// Versioned JSON model file shared by the text and conversation models.
inline constexpr std::string_view kModelFormat = "weakstance-linear-model";
inline constexpr int kModelVersion = 1;

void save_text_model(const LinearTextModel& model,
                     const std::filesystem::path& path);
LinearTextModel load_text_model(const std::filesystem::path& path);

}  // namespace stance
