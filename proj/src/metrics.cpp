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

#include "stance/metrics.hpp"

#include <algorithm>
#include <map>

#include "stance/common.hpp"

namespace stance {
namespace {

void check_lengths(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) {
    throw InvalidInputError("prediction and gold lists differ in length");
  }
  if (gold.empty()) throw InvalidInputError("cannot score an empty list");
}

}  // namespace

std::vector<ClassScore> per_class_scores(std::span<const int> predicted,
                                         std::span<const int> gold) {
  check_lengths(predicted, gold);
  std::map<int, std::size_t> support;
  for (int g : gold) ++support[g];

  std::vector<ClassScore> out;
  for (const auto& [label, count] : support) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (predicted[i] != label) continue;
      (gold[i] == label ? tp : fp) += 1;
    }
    ClassScore s;
    s.label = label;
    s.support = count;
    s.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    s.recall = static_cast<double>(tp) / count;
    s.f1 = s.precision + s.recall > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    out.push_back(s);
  }
  return out;
}

double f1_macro(std::span<const int> predicted, std::span<const int> gold) {
  const auto scores = per_class_scores(predicted, gold);
  double sum = 0.0;
  for (const auto& s : scores) sum += s.f1;
  return sum / static_cast<double>(scores.size());
}

double accuracy(std::span<const int> predicted, std::span<const int> gold) {
  check_lengths(predicted, gold);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i];
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double cohens_kappa(double observed_agreement, double chance_agreement) {
  if (chance_agreement == 1.0) {
    throw InvalidInputError("kappa is undefined when chance agreement is 1");
  }
  return (observed_agreement - chance_agreement) / (1.0 - chance_agreement);
}

ConfusionMatrix ConfusionMatrix::build(std::span<const int> predicted,
                                       std::span<const int> gold,
                                       std::vector<int> labels) {
  if (predicted.size() != gold.size()) {
    throw InvalidInputError("prediction and gold lists differ in length");
  }
  ConfusionMatrix m;
  m.labels = std::move(labels);
  m.counts.assign(m.labels.size(), std::vector<std::size_t>(m.labels.size()));
  auto pos = [&](int l) -> std::ptrdiff_t {
    auto it = std::find(m.labels.begin(), m.labels.end(), l);
    return it == m.labels.end() ? -1 : it - m.labels.begin();
  };
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto g = pos(gold[i]);
    const auto p = pos(predicted[i]);
    if (g >= 0 && p >= 0) ++m.counts[g][p];
  }
  return m;
}

nlohmann::json ConfusionMatrix::to_json() const {
  return nlohmann::json{{"labels", labels}, {"counts", counts}};
}

}  // namespace stance
