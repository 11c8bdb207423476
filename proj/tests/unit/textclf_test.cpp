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

#include <cmath>
#include <random>

#include "doctest.h"
#include "stance/textclf.hpp"
#include "test_support.hpp"

using namespace stance;

namespace {

// 200 documents: pro docs use words p0..p19, con docs c0..c19, all share
// filler words.
struct SeparableCorpus {
  std::vector<std::string> docs;
  std::vector<int> labels;
};

SeparableCorpus separable_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SeparableCorpus c;
  for (int i = 0; i < 200; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    std::string doc;
    for (int w = 0; w < 6; ++w) {
      doc += (label > 0 ? "p" : "c") + std::to_string(rng() % 20) + " ";
      doc += "f" + std::to_string(rng() % 10) + " ";
    }
    c.docs.push_back(doc);
    c.labels.push_back(label);
  }
  return c;
}

}  // namespace

TEST_CASE("tokenizer keeps hashtags distinct and adds bigrams") {
  CHECK(tokenize("Gun #Control now", 1) ==
        std::vector<std::string>{"gun", "#control", "now"});
  CHECK(tokenize("a b c", 2) ==
        std::vector<std::string>{"a", "b", "c", "a b", "b c"});
  CHECK(tokenize("x#y", 1) == std::vector<std::string>{"x", "y"});
}

TEST_CASE("vocabulary examples") {
  const std::vector<std::string> docs{"a b", "a c"};
  const auto v1 = Vocabulary::fit(docs, 1, 1);
  CHECK(v1.terms() == std::vector<std::string>{"a", "b", "c"});
  const auto v2 = Vocabulary::fit(docs, 2, 1);
  CHECK(v2.terms() == std::vector<std::string>{"a"});
  for (std::uint32_t i = 0; i < v1.size(); ++i) {
    CHECK(v1.document_frequency(i) >= 1);
  }

  const std::vector<std::string> many(1000, "the cat");
  const auto v3 = Vocabulary::fit(many, 1, 1);
  CHECK(v3.idf(*v3.index_of("the")) == 1.0);
  CHECK(v3.num_documents() == 1000);

  CHECK_THROWS_AS(Vocabulary::fit(std::vector<std::string>{}, 1, 1),
                  InvalidInputError);
}

TEST_CASE("transform examples") {
  const std::vector<std::string> docs{"a b", "a c"};
  const auto v = Vocabulary::fit(docs, 1, 1);
  CHECK(v.transform("zzz qqq").empty());
  const auto one = v.transform("b");
  REQUIRE(one.nnz() == 1);
  CHECK(one.value[0] == 1.0);

  const nlohmann::json j = {{"terms", {"a", "b"}},
                            {"df", {3, 1}},
                            {"idf", {1.0, 2.0}},
                            {"num_documents", 3},
                            {"max_ngram", 1}};
  const auto fixed = Vocabulary::from_json(j);
  const auto x = fixed.transform("a a b");
  REQUIRE(x.nnz() == 2);
  CHECK(x.value[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(x.value[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(x.value[0] == doctest::Approx(0.7071).epsilon(1e-4));
}

TEST_CASE("transformed vectors are unit length or zero") {
  const auto c = separable_corpus(3);
  const auto v = Vocabulary::fit(c.docs, 2, 2);
  for (const auto& d : c.docs) {
    CHECK(v.transform(d).squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(v.transform("").squared_norm() == 0.0);
}

TEST_CASE("vocabulary json round trip") {
  const auto c = separable_corpus(4);
  const auto v = Vocabulary::fit(c.docs, 2, 2);
  const auto back = Vocabulary::from_json(v.to_json());
  CHECK(back.terms() == v.terms());
  CHECK(back.max_ngram() == 2);
  const auto a = v.transform(c.docs[0]);
  const auto b = back.transform(c.docs[0]);
  CHECK(a.index == b.index);
  CHECK(a.value == b.value);
}

TEST_CASE("linear training examples") {
  SUBCASE("two separable points") {
    std::vector<LabeledExample> ex(2);
    ex[0].features.index = {0};
    ex[0].features.value = {1.0};
    ex[0].label = 1;
    ex[1].features.index = {1};
    ex[1].features.value = {1.0};
    ex[1].label = -1;
    const auto m = train_linear(ex, 2);
    CHECK(m.decision(ex[0].features) > 0);
    CHECK(m.decision(ex[1].features) < 0);
    CHECK(m.decision(SparseVector{}) == m.bias);
  }
  SUBCASE("single class is rejected") {
    std::vector<LabeledExample> ex(2);
    ex[0].label = 1;
    ex[1].label = 1;
    CHECK_THROWS_AS(train_linear(ex, 1), InvalidInputError);
  }
}

TEST_CASE("class-disjoint corpus trains to high accuracy") {
  const auto c = separable_corpus(5);
  const auto model = train_text_model(c.docs, c.labels, 2, 2);
  int correct = 0;
  for (std::size_t i = 0; i < c.docs.size(); ++i) {
    const double s = model.predict_score(c.docs[i]);
    if ((s > 0 ? 1 : -1) == c.labels[i]) ++correct;
  }
  CHECK(correct / 200.0 >= 0.95);
  CHECK(model.predict_score("p1 p2 p3 p4 p5") > 0);
  CHECK(model.predict_score("c1 c2 c3 c4 c5") < 0);
  CHECK(model.predict_score("") == model.model.bias);
}

TEST_CASE("duplicating the data keeps the decision signs") {
  const auto c = separable_corpus(6);
  std::vector<std::string> docs = c.docs;
  std::vector<int> labels = c.labels;
  docs.insert(docs.end(), c.docs.begin(), c.docs.end());
  labels.insert(labels.end(), c.labels.begin(), c.labels.end());
  const auto once = train_text_model(c.docs, c.labels, 2, 2);
  const auto twice = train_text_model(docs, labels, 2, 2);
  for (const auto& d : c.docs) {
    CHECK((once.predict_score(d) > 0) == (twice.predict_score(d) > 0));
  }
}

TEST_CASE("flipping every label flips every score") {
  const auto c = separable_corpus(8);
  std::vector<int> flipped = c.labels;
  for (int& l : flipped) l = -l;
  const auto a = train_text_model(c.docs, c.labels, 2, 2);
  const auto b = train_text_model(c.docs, flipped, 2, 2);
  for (const auto& d : c.docs) {
    CHECK(a.predict_score(d) == doctest::Approx(-b.predict_score(d)).epsilon(1e-9));
  }
}

TEST_CASE("training is deterministic") {
  const auto c = separable_corpus(9);
  const auto a = train_text_model(c.docs, c.labels, 2, 2);
  const auto b = train_text_model(c.docs, c.labels, 2, 2);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("user aggregation examples") {
  std::vector<double> eight_of_ten{1, 1, 1, 1, 1, 1, 1, 1, -1, -1};
  auto u = aggregate_user_stance(eight_of_ten, 0.7);
  CHECK(u.stance == Stance::kPro);
  CHECK(u.confidence == doctest::Approx(0.8).epsilon(1e-15));

  std::vector<double> split{1, 1, 1, 1, 1, -1, -1, -1, -1, -1};
  u = aggregate_user_stance(split, 0.7);
  CHECK(u.stance == Stance::kNone);
  CHECK(u.confidence == 0.0);

  u = aggregate_user_stance(std::vector<double>{}, 0.7);
  CHECK(u.stance == Stance::kNone);
  CHECK(u.confidence == 0.0);

  std::vector<double> mostly_negative{-0.5, -2, -1, 0.1};
  u = aggregate_user_stance(mostly_negative, 0.7);
  CHECK(u.stance == Stance::kAnti);
  CHECK(u.confidence == 0.75);

  std::vector<double> zeros{0, 0, 1};
  u = aggregate_user_stance(zeros, 0.3);
  CHECK(u.stance == Stance::kPro);
  CHECK(u.confidence == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("text model file round trip") {
  stance::testing::TempDir dir("textclf");
  const auto c = separable_corpus(10);
  const auto model = train_text_model(c.docs, c.labels, 2, 2);
  save_text_model(model, dir / "m.json");
  const auto back = load_text_model(dir / "m.json");
  for (const auto& d : c.docs) {
    CHECK(back.predict_score(d) == doctest::Approx(model.predict_score(d)).epsilon(1e-12));
  }
  stance::testing::write_text(dir / "bad.json", "{\"format\":\"other\"}");
  CHECK_THROWS(load_text_model(dir / "bad.json"));
}
