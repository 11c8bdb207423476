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
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "stance/cotrain.hpp"
#include "stance/corpus.hpp"

namespace stance {

// Unknown if either user is neutral, Oppose if the stances differ, Favor
// otherwise.
PairLabel conversation_label(Stance source_user, Stance reply_user);

struct WeakLabelStats {
  std::size_t total = 0;
  std::size_t favor = 0;
  std::size_t oppose = 0;
  std::size_t unknown = 0;
  std::size_t excluded_gold = 0;
  // (favor + oppose) / (total - excluded_gold); 0 when nothing is eligible.
  double fraction_labeled = 0.0;

  nlohmann::json to_json() const;
};

struct WeakLabelResult {
  // Every non-gold input pair, labeled and marked weak (Unknown included).
  std::vector<ConversationPair> pairs;
  WeakLabelStats stats;

  // Favor/Oppose pairs only: the classifier training set.
  std::vector<ConversationPair> training_pairs() const;
};

// Pairs whose id is in `gold_pair_ids` are dropped so hand-labeled examples
// never reach the weak training set.
WeakLabelResult label_conversations(
    std::vector<ConversationPair> pairs, const StanceTable& stance,
    const std::set<std::string>& gold_pair_ids = {});

}  // namespace stance
