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

#include "stance/convclf.hpp"

#include <cmath>
#include <vector>

#include "stance/table_io.hpp"

namespace stance {
namespace {

using nlohmann::json;

void append_block(SparseVector& out, const SparseVector& block,
                  std::size_t offset, double scale) {
  for (std::size_t k = 0; k < block.index.size(); ++k) {
    out.index.push_back(static_cast<std::uint32_t>(block.index[k] + offset));
    out.value.push_back(block.value[k] * scale);
  }
}

SparseVector elementwise_product(const SparseVector& a, const SparseVector& b) {
  SparseVector out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.index.size() && j < b.index.size()) {
    if (a.index[i] < b.index[j]) {
      ++i;
    } else if (b.index[j] < a.index[i]) {
      ++j;
    } else {
      out.index.push_back(a.index[i]);
      out.value.push_back(a.value[i] * b.value[j]);
      ++i;
      ++j;
    }
  }
  const double norm = std::sqrt(out.squared_norm());
  if (norm > 0.0) {
    for (double& v : out.value) v /= norm;
  }
  return out;
}

}  // namespace

std::string_view to_string(PairMode mode) {
  return mode == PairMode::kPair ? "pair" : "reply_only";
}

PairMode parse_pair_mode(std::string_view text) {
  const std::string t = to_lower(trim(text));
  if (t == "pair") return PairMode::kPair;
  if (t == "reply_only" || t == "reply-only" || t == "reply") {
    return PairMode::kReplyOnly;
  }
  throw InvalidInputError("unknown conversation mode '" + std::string(text) +
                          "' (expected pair or reply_only)");
}

PairFeaturizer::PairFeaturizer(Vocabulary vocabulary, PairMode mode,
                               double context_weight)
    : vocabulary_(std::move(vocabulary)),
      mode_(mode),
      context_weight_(context_weight) {
  if (!(context_weight > 0.0 && context_weight <= 1.0)) {
    throw InvalidInputError("context weight must lie in (0, 1]");
  }
}

PairFeaturizer PairFeaturizer::fit(std::span<const ConversationPair> pairs,
                                   PairMode mode, int min_df, int max_ngram,
                                   double context_weight) {
  std::vector<std::string> docs;
  docs.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    docs.push_back(p.reply_text);
    docs.push_back(p.source_text);
  }
  return PairFeaturizer(Vocabulary::fit(docs, min_df, max_ngram), mode,
                        context_weight);
}

std::size_t PairFeaturizer::dimension() const {
  return mode_ == PairMode::kPair ? 3 * block_size() : block_size();
}

SparseVector PairFeaturizer::featurize(std::string_view source,
                                       std::string_view reply) const {
  const SparseVector r = vocabulary_.transform(reply);
  if (mode_ == PairMode::kReplyOnly) return r;
  const SparseVector s = vocabulary_.transform(source);
  SparseVector out;
  append_block(out, r, 0, 1.0);
  append_block(out, s, block_size(), context_weight_);
  append_block(out, elementwise_product(r, s), 2 * block_size(),
               context_weight_);
  return out;
}

json ConversationTrainOptions::to_json() const {
  return json{{"mode", to_string(mode)},
              {"min_df", min_df},
              {"max_ngram", max_ngram},
              {"context_weight", context_weight},
              {"balance_classes", balance_classes},
              {"l2", linear.l2},
              {"epochs", linear.epochs},
              {"learning_rate", linear.learning_rate}};
}

void LinearConversationModel::train(std::span<const ConversationPair> pairs) {
  std::vector<ConversationPair> labeled;
  std::size_t favor = 0;
  std::size_t oppose = 0;
  for (const auto& p : pairs) {
    if (p.label == PairLabel::kUnknown) continue;
    labeled.push_back(p);
    (p.label == PairLabel::kFavor ? favor : oppose) += 1;
  }
  if (labeled.empty()) {
    throw InvalidInputError("no labeled conversation pairs to train on");
  }
  if (favor == 0 || oppose == 0) {
    throw InvalidInputError(
        "conversation training data must contain Favor and Oppose pairs");
  }

  featurizer_ = PairFeaturizer::fit(labeled, options_.mode, options_.min_df,
                                    options_.max_ngram, options_.context_weight);
  SparseRows rows;
  std::vector<std::size_t> subset;
  std::vector<int> labels;
  std::vector<double> weights;
  const double n = static_cast<double>(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    const auto& p = labeled[i];
    rows.append(featurizer_.featurize(p.source_text, p.reply_text));
    subset.push_back(i);
    labels.push_back(to_int(p.label));
    const double class_count =
        static_cast<double>(p.label == PairLabel::kFavor ? favor : oppose);
    weights.push_back(options_.balance_classes ? n / (2.0 * class_count)
                                               : 1.0);
  }
  model_ = train_linear(rows, subset, labels, weights,
                        featurizer_.dimension(), options_.linear);
  training_size_ = labeled.size();
  trained_ = true;
}

ConversationPrediction LinearConversationModel::predict(
    std::string_view source, std::string_view reply) const {
  if (!trained_) throw InvalidInputError("conversation model is not trained");
  const double score = model_.decision(featurizer_.featurize(source, reply));
  return {score >= 0.0 ? PairLabel::kFavor : PairLabel::kOppose, score};
}

std::string LinearConversationModel::name() const {
  return options_.mode == PairMode::kPair ? "linear-pair" : "linear-reply";
}

std::string LinearConversationModel::config_hash() const {
  return hex64(fnv1a64(options_.to_json().dump()));
}

void LinearConversationModel::save(const std::filesystem::path& path) const {
  if (!trained_) throw InvalidInputError("cannot save an untrained model");
  json j{{"format", kModelFormat},
         {"version", kModelVersion},
         {"kind", "conversation"},
         {"options", options_.to_json()},
         {"metadata",
          {{"training_size", training_size_}, {"config_hash", config_hash()}}},
         {"vocabulary", featurizer_.vocabulary().to_json()},
         {"model", model_.to_json()}};
  std::ofstream out = open_output(path);
  out << j.dump() << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

LinearConversationModel LinearConversationModel::load(
    const std::filesystem::path& path) {
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || j.value("format", "") != kModelFormat ||
      j.value("kind", "") != "conversation") {
    throw InvalidInputError("'" + path.string() +
                            "' is not a conversation model file");
  }
  if (j.value("version", 0) != kModelVersion) {
    throw InvalidInputError("unsupported model version in '" + path.string() +
                            "'");
  }
  const json& o = j.at("options");
  ConversationTrainOptions options;
  options.mode = parse_pair_mode(o.at("mode").get<std::string>());
  options.min_df = o.value("min_df", options.min_df);
  options.max_ngram = o.value("max_ngram", options.max_ngram);
  options.context_weight = o.value("context_weight", options.context_weight);
  options.balance_classes = o.value("balance_classes", true);
  options.linear.l2 = o.value("l2", options.linear.l2);
  options.linear.epochs = o.value("epochs", options.linear.epochs);
  options.linear.learning_rate =
      o.value("learning_rate", options.linear.learning_rate);

  LinearConversationModel m(options);
  m.featurizer_ =
      PairFeaturizer(Vocabulary::from_json(j.at("vocabulary")), options.mode,
                     options.context_weight);
  m.model_ = LinearModel::from_json(j.at("model"));
  if (m.model_.weights.size() != m.featurizer_.dimension()) {
    throw InvalidInputError("model weights do not match the feature layout");
  }
  m.training_size_ = j.at("metadata").value("training_size", std::size_t{0});
  m.trained_ = true;
  return m;
}

void MajorityClassifier::train(std::span<const ConversationPair> pairs) {
  std::size_t favor = 0;
  std::size_t oppose = 0;
  for (const auto& p : pairs) {
    if (p.label == PairLabel::kFavor) ++favor;
    if (p.label == PairLabel::kOppose) ++oppose;
  }
  if (favor + oppose == 0) {
    throw InvalidInputError("no labeled conversation pairs to train on");
  }
  majority_ = oppose > favor ? PairLabel::kOppose : PairLabel::kFavor;
}

ConversationPrediction MajorityClassifier::predict(std::string_view,
                                                   std::string_view) const {
  return {majority_, static_cast<double>(to_int(majority_))};
}

LinearConversationModel train_conversation_model(
    std::span<const ConversationPair> weak_pairs,
    const ConversationTrainOptions& options) {
  LinearConversationModel model(options);
  model.train(weak_pairs);
  return model;
}

ConversationPrediction predict_conversation(const ConversationClassifier& model,
                                            std::string_view source_text,
                                            std::string_view reply_text) {
  return model.predict(source_text, reply_text);
}

}  // namespace stance
