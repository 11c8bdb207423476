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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "stance/common.hpp"
#include "stance/metrics.hpp"

using namespace stance;

namespace {

// Per-class precision/recall from raw counts, classes taken from gold.
double brute_macro_f1(const std::vector<int>& pred, const std::vector<int>& gold) {
  double sum = 0.0;
  int classes = 0;
  for (int label : {-1, 1}) {
    int tp = 0, fp = 0, fn = 0, support = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold[i] == label) ++support;
      if (pred[i] == label && gold[i] == label) ++tp;
      if (pred[i] == label && gold[i] != label) ++fp;
      if (pred[i] != label && gold[i] == label) ++fn;
    }
    if (support == 0) continue;
    ++classes;
    const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    const double r = static_cast<double>(tp) / (tp + fn);
    sum += p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
  }
  return sum / classes;
}

std::vector<int> bits(unsigned mask, int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1u ? 1 : -1;
  return v;
}

}  // namespace

TEST_CASE("f1_macro examples") {
  const std::vector<int> gold{1, 1, 1, -1, -1, -1};
  CHECK(f1_macro(gold, gold) == 1.0);
  const std::vector<int> all_pos(6, 1);
  // F1(pos) = 2/3 (P = 1/2, R = 1), F1(neg) = 0.
  CHECK(f1_macro(all_pos, gold) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const auto scores = per_class_scores(all_pos, gold);
  REQUIRE(scores.size() == 2);
  CHECK(scores[1].precision == 0.5);
  CHECK(scores[1].recall == 1.0);
  CHECK(scores[0].f1 == 0.0);
  CHECK_THROWS_AS(f1_macro(std::vector<int>{1}, gold), InvalidInputError);
  CHECK_THROWS_AS(f1_macro(std::vector<int>{}, std::vector<int>{}),
                  InvalidInputError);
}

TEST_CASE("f1_macro matches brute force on every binary list up to length 8") {
  for (int n = 1; n <= 8; ++n) {
    for (unsigned g = 0; g < (1u << n); ++g) {
      for (unsigned p = 0; p < (1u << n); ++p) {
        const auto gold = bits(g, n);
        const auto pred = bits(p, n);
        CHECK(f1_macro(pred, gold) ==
              doctest::Approx(brute_macro_f1(pred, gold)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("f1_macro is permutation invariant") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 100; ++round) {
    const int n = 2 + static_cast<int>(rng() % 12);
    std::vector<int> gold(n), pred(n);
    for (int i = 0; i < n; ++i) {
      gold[i] = rng() % 2 ? 1 : -1;
      pred[i] = rng() % 2 ? 1 : -1;
    }
    const double before = f1_macro(pred, gold);
    std::vector<std::size_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> g2(n), p2(n);
    for (int i = 0; i < n; ++i) {
      g2[i] = gold[order[i]];
      p2[i] = pred[order[i]];
    }
    CHECK(f1_macro(p2, g2) == doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("accuracy and confusion matrix") {
  const std::vector<int> gold{1, 1, -1, -1};
  const std::vector<int> pred{1, -1, -1, -1};
  CHECK(accuracy(pred, gold) == 0.75);
  const auto cm = ConfusionMatrix::build(pred, gold, {-1, 1});
  CHECK(cm.counts[0][0] == 2);
  CHECK(cm.counts[1][0] == 1);
  CHECK(cm.counts[1][1] == 1);
  CHECK(cm.counts[0][1] == 0);
}

TEST_CASE("cohens kappa") {
  CHECK(cohens_kappa(0.92, 0.33) == doctest::Approx(0.8806).epsilon(1e-4 / 0.8806));
  CHECK(std::abs(cohens_kappa(0.92, 0.33) - 0.8806) <= 1e-4);
  CHECK(cohens_kappa(0.4, 0.4) == 0.0);
  for (double pe : {0.0, 0.1, 0.5, 0.99}) CHECK(cohens_kappa(1.0, pe) == 1.0);
  CHECK_THROWS_AS(cohens_kappa(0.5, 1.0), InvalidInputError);
}
