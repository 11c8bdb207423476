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
#include <span>
#include <vector>

#include "json.hpp"

namespace stance {

struct ClassScore {
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count
};

// One entry per class present in `gold`, in ascending label order. Undefined
// precision or recall counts as 0.
std::vector<ClassScore> per_class_scores(std::span<const int> predicted,
                                         std::span<const int> gold);

// Unweighted mean of per-class F1 over the classes present in `gold`.
// Throws InvalidInputError on a length mismatch or empty input.
double f1_macro(std::span<const int> predicted, std::span<const int> gold);

double accuracy(std::span<const int> predicted, std::span<const int> gold);

// (p0 - pe) / (1 - pe). Throws InvalidInputError when pe == 1.
double cohens_kappa(double observed_agreement, double chance_agreement);

// counts[g][p] over `labels` (gold row, predicted column).
struct ConfusionMatrix {
  std::vector<int> labels;
  std::vector<std::vector<std::size_t>> counts;

  static ConfusionMatrix build(std::span<const int> predicted,
                               std::span<const int> gold,
                               std::vector<int> labels);
  nlohmann::json to_json() const;
};

}  // namespace stance
