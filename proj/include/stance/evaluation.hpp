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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "stance/convclf.hpp"
#include "stance/corpus.hpp"
#include "stance/metrics.hpp"

namespace stance {

struct PairScores {
  std::size_t evaluated = 0;
  double f1_macro = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;

  nlohmann::json to_json() const;
};

// Scores a trained classifier on the Favor/Oppose pairs of `gold`. Throws
// InvalidInputError when no such pair exists.
PairScores evaluate_classifier(const ConversationClassifier& model,
                               std::span<const ConversationPair> gold);

struct EventPairs {
  std::string event;
  std::vector<ConversationPair> pairs;
};

// Groups pairs by their event field, in event-name order.
std::vector<EventPairs> group_by_event(std::span<const ConversationPair> pairs);

using ClassifierFactory =
    std::function<std::unique_ptr<ConversationClassifier>()>;

struct FoldResult {
  std::string held_out;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  // Empty when the fold failed; `error` says why.
  std::optional<PairScores> scores;
  std::string error;
};

struct EvalReport {
  std::string classifier;
  std::vector<FoldResult> folds;
  // Arithmetic mean over the folds that produced a score.
  std::optional<double> mean_f1_macro;
  // Where the co-training history of the labels lives, if any.
  std::string history_ref;

  nlohmann::json to_json() const;
};

// Trains a fresh classifier on all events but one and tests on the held-out
// event, for every event. A fold whose held-out gold has a single class, or
// whose training fails, records an error and the others proceed. Throws
// InvalidInputError for fewer than two events.
EvalReport leave_one_out_eval(const std::vector<EventPairs>& events,
                              const ClassifierFactory& make_classifier);

}  // namespace stance
