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
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/cotrain.hpp"
#include "stance/propagation.hpp"

namespace stance {

// Planted two-community corpus. Community A is Pro, community B is Anti.
// Every choice a user makes (hashtag, topic word, retweet target, mention,
// url domain) comes from the user's own community with probability
// `polarity` and from a pool shared by everyone otherwise, so polarity 1
// gives disjoint vocabularies and polarity 0 indistinguishable communities.
struct SyntheticOptions {
  std::size_t n_users = 200;  // even, >= 4
  std::size_t n_hashtags = 40;  // >= 4; a quarter shared, the rest split
  double polarity = 0.8;
  std::uint64_t seed = 1;

  std::size_t tweets_per_user = 6;
  std::size_t words_per_tweet = 8;
  std::size_t lexicon_size = 60;  // topic words per pool
  double hashtag_user_fraction = 1.0;  // users who ever use hashtags
  double retweet_rate = 0.2;
  double reply_rate = 0.3;
  double cross_reply_rate = 0.5;  // replies aimed at the other community
  double noise = 0.1;             // gold reply labels flipped
  double mention_rate = 0.2;
  double url_rate = 0.15;
  double gold_pair_fraction = 0.3;
  std::vector<std::string> events{"synthetic"};

  // Throws InvalidInputError on out-of-range values.
  void validate() const;
};

struct SyntheticCorpus {
  std::vector<Tweet> tweets;  // tweet id order
  GoldUserStance gold_users;
  // Gold label of every reply pair, keyed by reply tweet id.
  std::map<std::string, PairLabel> pair_labels;
  // The gold_pair_fraction sample of pairs, labeled, for evaluation.
  std::vector<ConversationPair> gold_pairs;
  // Most used A-exclusive hashtag as Pro, most used B-exclusive one as Anti.
  SeedHashtagSet seeds;
  std::vector<std::string> pro_exclusive_hashtags;
  std::vector<std::string> anti_exclusive_hashtags;
};

// Fully determined by the options (including the seed).
SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options);

// Writes tweets.jsonl, gold_users.csv, gold_pairs.jsonl, seeds.txt and
// truth.json (exclusive hashtag lists) into `dir`.
void write_synthetic_corpus(const SyntheticCorpus& corpus,
                            const std::filesystem::path& dir);

}  // namespace stance
