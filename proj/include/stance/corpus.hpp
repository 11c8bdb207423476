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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stance/common.hpp"

namespace stance {

struct Tweet {
  std::string id;
  std::string user;
  std::string text;
  // Lowercased, without the leading '#', unique within the tweet.
  std::vector<std::string> hashtags;
  // Lowercased screen names without '@'; extracted before cleaning.
  std::vector<std::string> mentions;
  // Lowercased host names with any leading "www." removed.
  std::vector<std::string> url_domains;
  std::optional<std::string> retweet_of;
  std::optional<std::string> reply_to;
  std::string event;
};

struct LoadStats {
  std::size_t records = 0;
  std::size_t loaded = 0;
  std::size_t skipped_missing_fields = 0;
  std::size_t skipped_malformed = 0;
  std::size_t duplicates = 0;
};

// Immutable once built; safe to share across threads.
class TweetCorpus {
 public:
  TweetCorpus() = default;

  // Deduplicates by tweet id (first record wins) and normalizes entity
  // fields. Tweets with an empty id, user or text count as skipped.
  static TweetCorpus from_tweets(std::vector<Tweet> tweets,
                                 LoadStats* stats = nullptr);

  const std::map<std::string, Tweet>& tweets() const { return tweets_; }
  const std::set<std::string>& users() const { return users_; }
  // Reply target id -> ids of replies to it, replies in id order.
  const std::map<std::string, std::vector<std::string>>& reply_index() const {
    return reply_index_;
  }
  // Reply targets that are not themselves in the corpus.
  const std::set<std::string>& missing_reply_targets() const {
    return missing_reply_targets_;
  }

  const Tweet* find(std::string_view id) const;
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }

 private:
  std::map<std::string, Tweet> tweets_;
  std::set<std::string> users_;
  std::map<std::string, std::vector<std::string>> reply_index_;
  std::set<std::string> missing_reply_targets_;
};

enum class InputFormat { kJsonl, kCsv };

// ".csv" maps to kCsv; everything else is read as JSONL.
InputFormat format_from_path(const std::filesystem::path& path);

struct LoadResult {
  TweetCorpus corpus;
  LoadStats stats;
};

// Throws IoError when the file cannot be read and EmptyCorpusError when no
// valid record survives.
LoadResult load_tweets(const std::filesystem::path& path, InputFormat format);

// Writes the normalized corpus as JSONL, one tweet per line in id order.
void write_tweets_jsonl(const TweetCorpus& corpus,
                        const std::filesystem::path& path);

// Strips @mentions, URLs and leading "RT" markers and collapses whitespace.
// Returns nullopt when nothing is left.
std::optional<std::string> clean_text(std::string_view raw);

std::vector<std::string> extract_hashtags(std::string_view text);
std::vector<std::string> extract_mentions(std::string_view text);
std::vector<std::string> extract_url_domains(std::string_view text);

enum class LabelKind { kGold, kWeak };

struct ConversationPair {
  std::string source_tweet_id;
  std::string reply_tweet_id;
  std::string source_user;
  std::string reply_user;
  std::string source_text;
  std::string reply_text;
  std::string event;
  PairLabel label = PairLabel::kUnknown;
  std::optional<LabelKind> label_kind;

  // A reply has exactly one target, so the reply id identifies the pair.
  const std::string& pair_id() const { return reply_tweet_id; }
};

struct ConversationStats {
  std::size_t pairs = 0;
  std::size_t missing_target = 0;
  std::size_t self_replies = 0;
  std::size_t empty_text = 0;
};

// One pair per first-level reply whose target is in the corpus, in reply id
// order.
std::vector<ConversationPair> extract_conversations(
    const TweetCorpus& corpus, ConversationStats* stats = nullptr);

// user id -> cleaned texts of that user's tweets, in tweet id order. Users
// whose tweets all clean to nothing are absent.
std::map<std::string, std::vector<std::string>> extract_user_documents(
    const TweetCorpus& corpus);

void write_conversations_jsonl(const std::vector<ConversationPair>& pairs,
                               const std::filesystem::path& path);
// Reads pairs written by write_conversations_jsonl or a gold pair file. The
// "label" field may be numeric or a name such as "support"/"oppose"/"comment".
std::vector<ConversationPair> read_conversations_jsonl(
    const std::filesystem::path& path);

}  // namespace stance
