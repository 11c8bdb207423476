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

#include "stance/evaluation.hpp"

#include <map>
#include <set>

namespace stance {

using nlohmann::json;

json PairScores::to_json() const {
  return json{{"evaluated", evaluated},
              {"f1_macro", f1_macro},
              {"accuracy", accuracy},
              {"confusion", confusion.to_json()}};
}

PairScores evaluate_classifier(const ConversationClassifier& model,
                               std::span<const ConversationPair> gold) {
  std::vector<int> predicted;
  std::vector<int> truth;
  for (const auto& p : gold) {
    if (p.label == PairLabel::kUnknown) continue;
    predicted.push_back(
        to_int(model.predict(p.source_text, p.reply_text).label));
    truth.push_back(to_int(p.label));
  }
  if (truth.empty()) {
    throw InvalidInputError("no Favor/Oppose gold pairs to evaluate on");
  }
  PairScores s;
  s.evaluated = truth.size();
  s.f1_macro = f1_macro(predicted, truth);
  s.accuracy = accuracy(predicted, truth);
  s.confusion = ConfusionMatrix::build(predicted, truth, {-1, 1});
  return s;
}

std::vector<EventPairs> group_by_event(
    std::span<const ConversationPair> pairs) {
  std::map<std::string, std::vector<ConversationPair>> by_event;
  for (const auto& p : pairs) by_event[p.event].push_back(p);
  std::vector<EventPairs> out;
  for (auto& [event, list] : by_event) out.push_back({event, std::move(list)});
  return out;
}

json EvalReport::to_json() const {
  json folds_json = json::array();
  for (const auto& f : folds) {
    json j{{"held_out", f.held_out},
           {"train_size", f.train_size},
           {"test_size", f.test_size}};
    if (f.scores) {
      j["scores"] = f.scores->to_json();
    } else {
      j["error"] = f.error;
    }
    folds_json.push_back(std::move(j));
  }
  json out{{"classifier", classifier}, {"folds", std::move(folds_json)}};
  out["mean_f1_macro"] = mean_f1_macro ? json(*mean_f1_macro) : json(nullptr);
  if (!history_ref.empty()) out["history"] = history_ref;
  return out;
}

EvalReport leave_one_out_eval(const std::vector<EventPairs>& events,
                              const ClassifierFactory& make_classifier) {
  if (events.size() < 2) {
    throw InvalidInputError("leave-one-out evaluation needs at least 2 events");
  }
  EvalReport report;
  double sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t held = 0; held < events.size(); ++held) {
    FoldResult fold;
    fold.held_out = events[held].event;
    std::vector<ConversationPair> train;
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (e == held) continue;
      for (const auto& p : events[e].pairs) {
        if (p.label != PairLabel::kUnknown) train.push_back(p);
      }
    }
    std::set<PairLabel> test_classes;
    for (const auto& p : events[held].pairs) {
      if (p.label != PairLabel::kUnknown) {
        test_classes.insert(p.label);
        ++fold.test_size;
      }
    }
    fold.train_size = train.size();
    try {
      if (test_classes.size() < 2) {
        throw InvalidInputError("held-out gold for event '" + fold.held_out +
                                "' has fewer than two classes");
      }
      std::unique_ptr<ConversationClassifier> model = make_classifier();
      if (report.classifier.empty()) report.classifier = model->name();
      model->train(train);
      fold.scores = evaluate_classifier(*model, events[held].pairs);
      sum += fold.scores->f1_macro;
      ++scored;
    } catch (const Error& e) {
      fold.error = e.what();
    }
    report.folds.push_back(std::move(fold));
  }
  if (scored > 0) report.mean_f1_macro = sum / static_cast<double>(scored);
  return report;
}

}  // namespace stance
