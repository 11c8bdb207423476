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

#include "builders.hpp"
#include "doctest.h"
#include "stance/convclf.hpp"
#include "stance/metrics.hpp"
#include "stance/synthetic.hpp"
#include "test_support.hpp"

using namespace stance;
using stance::testing::pair_of;

namespace {

double block_norm2(const SparseVector& v, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.nnz(); ++k) {
    if (v.index[k] >= lo && v.index[k] < hi) s += v.value[k] * v.value[k];
  }
  return s;
}

std::vector<ConversationPair> toy_pairs() {
  return {pair_of("1", "a", "b", "tax cut plan", "great tax plan yes"),
          pair_of("2", "a", "c", "tax cut plan", "terrible plan no"),
          pair_of("3", "b", "c", "wall funding", "no wall funding"),
          pair_of("4", "c", "b", "wall funding", "yes wall funding")};
}

// Replies carry "agreeword" or "disagreeword" next to random filler, with
// label noise-free markers.
std::vector<ConversationPair> marker_pairs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ConversationPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    const bool oppose = rng() % 2 == 0;
    std::string source, reply;
    for (int w = 0; w < 5; ++w) source += "s" + std::to_string(rng() % 30) + " ";
    for (int w = 0; w < 4; ++w) reply += "r" + std::to_string(rng() % 30) + " ";
    reply += oppose ? "disagreeword" : "agreeword";
    pairs.push_back(pair_of(std::to_string(seed * 100000 + i), "u", "v", source,
                            reply, oppose ? PairLabel::kOppose : PairLabel::kFavor));
  }
  return pairs;
}

std::vector<ConversationPair> synthetic_pairs(std::uint64_t seed) {
  SyntheticOptions o;
  o.seed = seed;
  const auto synth = generate_synthetic_corpus(o);
  auto pairs = extract_conversations(TweetCorpus::from_tweets(synth.tweets));
  for (auto& p : pairs) p.label = synth.pair_labels.at(p.reply_tweet_id);
  return pairs;
}

double training_accuracy(const LinearConversationModel& m,
                         const std::vector<ConversationPair>& pairs) {
  std::size_t ok = 0;
  for (const auto& p : pairs) {
    if (m.predict(p.source_text, p.reply_text).label == p.label) ++ok;
  }
  return static_cast<double>(ok) / pairs.size();
}

}  // namespace

TEST_CASE("pair mode names") {
  CHECK(parse_pair_mode("pair") == PairMode::kPair);
  CHECK(parse_pair_mode("reply-only") == PairMode::kReplyOnly);
  CHECK(parse_pair_mode("reply_only") == PairMode::kReplyOnly);
  CHECK(to_string(PairMode::kReplyOnly) == "reply_only");
  CHECK_THROWS_AS(parse_pair_mode("both"), InvalidInputError);
}

TEST_CASE("pair feature layout and block norms") {
  const auto pairs = toy_pairs();
  for (double cw : {1.0, 0.3}) {
    const auto f = PairFeaturizer::fit(pairs, PairMode::kPair, 1, 1, cw);
    const std::size_t v = f.block_size();
    CHECK(f.dimension() == 3 * v);
    const auto x = f.featurize("tax cut plan", "great tax plan");
    CHECK(block_norm2(x, 0, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(block_norm2(x, v, 2 * v) == doctest::Approx(cw * cw).epsilon(1e-12));
    CHECK(block_norm2(x, 2 * v, 3 * v) == doctest::Approx(cw * cw).epsilon(1e-12));
    for (std::size_t k = 1; k < x.nnz(); ++k) CHECK(x.index[k - 1] < x.index[k]);
  }
}

TEST_CASE("product block of identical texts is the normalized square") {
  const auto f = PairFeaturizer::fit(toy_pairs(), PairMode::kPair, 1, 1, 1.0);
  const std::size_t v = f.block_size();
  const std::string text = "great tax tax plan";
  const auto x = f.featurize(text, text);
  const auto base = f.vocabulary().transform(text);
  std::vector<double> square(v, 0.0);
  double norm = 0.0;
  for (std::size_t k = 0; k < base.nnz(); ++k) {
    square[base.index[k]] = base.value[k] * base.value[k];
    norm += square[base.index[k]] * square[base.index[k]];
  }
  norm = std::sqrt(norm);
  std::size_t product_entries = 0;
  for (std::size_t k = 0; k < x.nnz(); ++k) {
    if (x.index[k] < 2 * v) continue;
    ++product_entries;
    CHECK(x.value[k] == doctest::Approx(square[x.index[k] - 2 * v] / norm).epsilon(1e-12));
  }
  CHECK(product_entries == base.nnz());
}

TEST_CASE("disjoint texts give an empty product block") {
  const auto f = PairFeaturizer::fit(toy_pairs(), PairMode::kPair, 1, 1);
  const std::size_t v = f.block_size();
  const auto x = f.featurize("tax cut", "wall funding");
  CHECK(block_norm2(x, 2 * v, 3 * v) == 0.0);
  CHECK(block_norm2(x, v, 2 * v) > 0.0);
}

TEST_CASE("reply-only features are the first block of pair features") {
  const auto pairs = toy_pairs();
  const auto reply = PairFeaturizer::fit(pairs, PairMode::kReplyOnly, 1, 2);
  const auto pair = PairFeaturizer::fit(pairs, PairMode::kPair, 1, 2);
  CHECK(reply.dimension() == reply.block_size());
  CHECK(pair.block_size() == reply.block_size());
  for (const auto& p : pairs) {
    const auto r = reply.featurize(p.source_text, p.reply_text);
    const auto x = pair.featurize(p.source_text, p.reply_text);
    for (std::uint32_t i : r.index) CHECK(i < reply.block_size());
    SparseVector head;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      if (x.index[k] < pair.block_size()) {
        head.index.push_back(x.index[k]);
        head.value.push_back(x.value[k]);
      }
    }
    CHECK(head.index == r.index);
    CHECK(head.value == r.value);
  }
}

TEST_CASE("featurizer and training errors") {
  CHECK_THROWS_AS(PairFeaturizer(Vocabulary{}, PairMode::kPair, 0.0),
                  InvalidInputError);
  CHECK_THROWS_AS(PairFeaturizer(Vocabulary{}, PairMode::kPair, 1.5),
                  InvalidInputError);
  LinearConversationModel m;
  CHECK_THROWS_AS(m.train({}), InvalidInputError);
  auto one_class = toy_pairs();
  for (auto& p : one_class) p.label = PairLabel::kFavor;
  CHECK_THROWS_AS(m.train(one_class), InvalidInputError);
  auto unknown = toy_pairs();
  CHECK_THROWS_AS(m.train(unknown), InvalidInputError);
  CHECK_FALSE(m.trained());
}

TEST_CASE("marker words are learned from weak labels") {
  const auto train = marker_pairs(400, 1);
  const auto test = marker_pairs(200, 2);
  for (PairMode mode : {PairMode::kPair, PairMode::kReplyOnly}) {
    ConversationTrainOptions opts;
    opts.mode = mode;
    const auto model = train_conversation_model(train, opts);
    std::vector<int> pred, gold;
    for (const auto& p : test) {
      pred.push_back(to_int(predict_conversation(model, p.source_text,
                                                 p.reply_text).label));
      gold.push_back(to_int(p.label));
    }
    CHECK(f1_macro(pred, gold) >= 0.9);
    CHECK(model.predict("s1", "r2 disagreeword").label == PairLabel::kOppose);
    CHECK(model.training_size() == train.size());
    const auto zero = model.predict("unseenword", "alsounseen");
    CHECK(zero.score == model.model().bias);
    CHECK(zero.label == (model.model().bias >= 0 ? PairLabel::kFavor
                                                 : PairLabel::kOppose));
  }
}

TEST_CASE("a training pair gets its own weak label") {
  const auto pairs = marker_pairs(200, 3);
  const auto model = train_conversation_model(pairs, {});
  CHECK(training_accuracy(model, pairs) >= 0.99);
}

TEST_CASE("pair mode trains at least as well as reply-only mode") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pairs = synthetic_pairs(seed);
    ConversationTrainOptions pair_opts;
    ConversationTrainOptions reply_opts;
    reply_opts.mode = PairMode::kReplyOnly;
    const auto pair_model = train_conversation_model(pairs, pair_opts);
    const auto reply_model = train_conversation_model(pairs, reply_opts);
    CAPTURE(seed);
    CHECK(training_accuracy(pair_model, pairs) >=
          training_accuracy(reply_model, pairs));
  }
}

TEST_CASE("conversation model file round trip") {
  stance::testing::TempDir dir("convclf");
  const auto pairs = marker_pairs(100, 4);
  const auto model = train_conversation_model(pairs, {});
  CHECK(model.name() == "linear-pair");
  model.save(dir / "m.json");
  const auto back = LinearConversationModel::load(dir / "m.json");
  CHECK(back.name() == model.name());
  CHECK(back.config_hash() == model.config_hash());
  CHECK(back.training_size() == model.training_size());
  CHECK(back.featurizer().context_weight() == model.featurizer().context_weight());
  for (const auto& p : pairs) {
    CHECK(back.predict(p.source_text, p.reply_text).score ==
          doctest::Approx(model.predict(p.source_text, p.reply_text).score)
              .epsilon(1e-12));
  }
  ConversationTrainOptions other;
  other.context_weight = 0.5;
  CHECK(train_conversation_model(pairs, other).config_hash() != model.config_hash());

  stance::testing::write_text(dir / "bad.json", "{\"format\":\"nope\"}");
  CHECK_THROWS(LinearConversationModel::load(dir / "bad.json"));
}

TEST_CASE("majority baseline") {
  auto pairs = toy_pairs();
  pairs[0].label = PairLabel::kOppose;
  pairs[1].label = PairLabel::kOppose;
  pairs[2].label = PairLabel::kFavor;
  MajorityClassifier m;
  m.train(pairs);
  CHECK(m.predict("x", "y").label == PairLabel::kOppose);
  pairs[3].label = PairLabel::kFavor;
  m.train(pairs);
  CHECK(m.predict("x", "y").label == PairLabel::kFavor);
  CHECK(m.name() == "majority");
}
