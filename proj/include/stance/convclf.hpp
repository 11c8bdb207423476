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
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "stance/corpus.hpp"
#include "stance/textclf.hpp"

namespace stance {

enum class PairMode { kReplyOnly, kPair };

std::string_view to_string(PairMode mode);
// "pair", "reply_only" or "reply-only".
PairMode parse_pair_mode(std::string_view text);

// Feature layout: [reply tf-idf | source tf-idf | reply * source], each block
// |V| wide and L2-normalized on its own, the two context blocks then scaled
// by `context_weight`. Reply-only mode keeps just the first block. Both modes
// share a vocabulary fitted on reply and source texts.
class PairFeaturizer {
 public:
  PairFeaturizer() = default;
  // Throws InvalidInputError unless 0 < context_weight <= 1.
  PairFeaturizer(Vocabulary vocabulary, PairMode mode,
                 double context_weight = 0.3);

  static PairFeaturizer fit(std::span<const ConversationPair> pairs,
                            PairMode mode, int min_df, int max_ngram,
                            double context_weight = 0.3);

  SparseVector featurize(std::string_view source,
                         std::string_view reply) const;

  std::size_t dimension() const;
  std::size_t block_size() const { return vocabulary_.size(); }
  PairMode mode() const { return mode_; }
  double context_weight() const { return context_weight_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }

 private:
  Vocabulary vocabulary_;
  PairMode mode_ = PairMode::kPair;
  double context_weight_ = 0.3;
};

struct ConversationPrediction {
  PairLabel label = PairLabel::kFavor;
  double score = 0.0;
};

// Pluggable conversation stance model: anything that can be trained on
// labeled (source, reply) pairs and score new ones.
class ConversationClassifier {
 public:
  virtual ~ConversationClassifier() = default;

  // Pairs with an Unknown label are ignored.
  virtual void train(std::span<const ConversationPair> pairs) = 0;
  virtual ConversationPrediction predict(std::string_view source,
                                         std::string_view reply) const = 0;
  virtual std::string name() const = 0;
};

struct ConversationTrainOptions {
  PairMode mode = PairMode::kPair;
  int min_df = 2;
  int max_ngram = 2;
  // Scale of the source and product blocks relative to the reply block. At 1
  // the model leans on source/reply similarity, which mirrors how the weak
  // labels were made rather than what the reply says.
  double context_weight = 0.3;
  // Inverse class-frequency example weights.
  bool balance_classes = true;
  TrainOptions linear;

  nlohmann::json to_json() const;
};

class LinearConversationModel : public ConversationClassifier {
 public:
  explicit LinearConversationModel(ConversationTrainOptions options = {})
      : options_(options) {}

  // Throws InvalidInputError on an empty or single-class training set.
  void train(std::span<const ConversationPair> pairs) override;
  // Score >= 0 maps to Favor.
  ConversationPrediction predict(std::string_view source,
                                 std::string_view reply) const override;
  std::string name() const override;

  bool trained() const { return trained_; }
  const PairFeaturizer& featurizer() const { return featurizer_; }
  const LinearModel& model() const { return model_; }
  const ConversationTrainOptions& options() const { return options_; }
  std::size_t training_size() const { return training_size_; }
  std::string config_hash() const;

  void save(const std::filesystem::path& path) const;
  static LinearConversationModel load(const std::filesystem::path& path);

 private:
  ConversationTrainOptions options_;
  PairFeaturizer featurizer_;
  LinearModel model_;
  std::size_t training_size_ = 0;
  bool trained_ = false;
};

// Predicts the training set's majority label everywhere (ties -> Favor).
class MajorityClassifier : public ConversationClassifier {
 public:
  void train(std::span<const ConversationPair> pairs) override;
  ConversationPrediction predict(std::string_view source,
                                 std::string_view reply) const override;
  std::string name() const override { return "majority"; }

 private:
  PairLabel majority_ = PairLabel::kFavor;
};

LinearConversationModel train_conversation_model(
    std::span<const ConversationPair> weak_pairs,
    const ConversationTrainOptions& options);

ConversationPrediction predict_conversation(
    const ConversationClassifier& model, std::string_view source_text,
    std::string_view reply_text);

}  // namespace stance
