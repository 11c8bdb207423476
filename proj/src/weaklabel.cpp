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

#include "stance/weaklabel.hpp"

namespace stance {

PairLabel conversation_label(Stance source_user, Stance reply_user) {
  if (source_user == Stance::kNone || reply_user == Stance::kNone) {
    return PairLabel::kUnknown;
  }
  if (source_user != reply_user) return PairLabel::kOppose;
  return PairLabel::kFavor;
}

nlohmann::json WeakLabelStats::to_json() const {
  return nlohmann::json{{"total", total},
                        {"favor", favor},
                        {"oppose", oppose},
                        {"unknown", unknown},
                        {"excluded_gold", excluded_gold},
                        {"fraction_labeled", fraction_labeled}};
}

std::vector<ConversationPair> WeakLabelResult::training_pairs() const {
  std::vector<ConversationPair> out;
  for (const auto& p : pairs) {
    if (p.label != PairLabel::kUnknown) out.push_back(p);
  }
  return out;
}

WeakLabelResult label_conversations(std::vector<ConversationPair> pairs,
                                    const StanceTable& stance,
                                    const std::set<std::string>& gold_pair_ids) {
  WeakLabelResult result;
  result.stats.total = pairs.size();
  for (auto& p : pairs) {
    if (gold_pair_ids.count(p.pair_id()) != 0) {
      ++result.stats.excluded_gold;
      continue;
    }
    p.label = conversation_label(stance.stance_of(p.source_user),
                                 stance.stance_of(p.reply_user));
    p.label_kind = LabelKind::kWeak;
    switch (p.label) {
      case PairLabel::kFavor:
        ++result.stats.favor;
        break;
      case PairLabel::kOppose:
        ++result.stats.oppose;
        break;
      case PairLabel::kUnknown:
        ++result.stats.unknown;
        break;
    }
    result.pairs.push_back(std::move(p));
  }
  const std::size_t eligible = result.stats.total - result.stats.excluded_gold;
  if (eligible > 0) {
    result.stats.fraction_labeled =
        static_cast<double>(result.stats.favor + result.stats.oppose) /
        static_cast<double>(eligible);
  }
  return result;
}

}  // namespace stance
