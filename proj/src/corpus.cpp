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

#include "stance/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "stance/table_io.hpp"

namespace stance {
namespace {

using nlohmann::json;

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_' || u >= 0x80;
}

bool is_url_token(std::string_view token) {
  return starts_with_icase(token, "http://") ||
         starts_with_icase(token, "https://") ||
         starts_with_icase(token, "www.");
}

std::vector<std::string_view> whitespace_tokens(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])) != 0) {
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])) == 0) {
      ++i;
    }
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

bool is_rt_marker(std::string_view token) {
  return token == "RT" || token == "RT:";
}

void dedupe_in_order(std::vector<std::string>& items) {
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& item : items) {
    if (item.empty()) continue;
    if (std::find(out.begin(), out.end(), item) == out.end()) {
      out.push_back(std::move(item));
    }
  }
  items = std::move(out);
}

std::string normalize_hashtag(std::string_view tag) {
  tag = trim(tag);
  while (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
  return to_lower(tag);
}

// Ids may be serialized as JSON numbers; normalize to strings.
std::optional<std::string> json_id(const json& record,
                                   std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) continue;
    if (it->is_string()) {
      std::string v = it->get<std::string>();
      if (!v.empty()) return v;
    } else if (it->is_number_integer()) {
      return std::to_string(it->get<long long>());
    } else if (it->is_number_unsigned()) {
      return std::to_string(it->get<unsigned long long>());
    }
  }
  return std::nullopt;
}

std::vector<std::string> split_tag_field(std::string_view field) {
  std::vector<std::string> out;
  std::string current;
  for (char c : field) {
    if (c == ' ' || c == ';' || c == ',' || c == '|' || c == '\t') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> json_string_list(const json& record,
                                          const char* key) {
  std::vector<std::string> out;
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return out;
  if (it->is_array()) {
    for (const auto& v : *it) {
      if (v.is_string()) out.push_back(v.get<std::string>());
    }
  } else if (it->is_string()) {
    out = split_tag_field(it->get<std::string>());
  }
  return out;
}

std::optional<Tweet> tweet_from_json(const json& record) {
  if (!record.is_object()) return std::nullopt;
  Tweet t;
  auto id = json_id(record, {"id", "tweet_id"});
  auto user = json_id(record, {"user", "user_id"});
  auto text = record.find("text");
  if (!id || !user || text == record.end() || !text->is_string()) {
    return std::nullopt;
  }
  t.id = *id;
  t.user = *user;
  t.text = text->get<std::string>();
  t.hashtags = json_string_list(record, "hashtags");
  t.mentions = json_string_list(record, "mentions");
  t.url_domains = json_string_list(record, "url_domains");
  t.retweet_of = json_id(record, {"retweet_of"});
  t.reply_to = json_id(record, {"reply_to"});
  if (auto ev = record.find("event"); ev != record.end() && ev->is_string()) {
    t.event = ev->get<std::string>();
  }
  return t;
}

json tweet_to_json(const Tweet& t) {
  json j;
  j["id"] = t.id;
  j["user"] = t.user;
  j["text"] = t.text;
  j["hashtags"] = t.hashtags;
  j["mentions"] = t.mentions;
  j["url_domains"] = t.url_domains;
  j["retweet_of"] = t.retweet_of ? json(*t.retweet_of) : json(nullptr);
  j["reply_to"] = t.reply_to ? json(*t.reply_to) : json(nullptr);
  j["event"] = t.event;
  return j;
}

std::vector<Tweet> read_jsonl(std::istream& in, LoadStats& stats) {
  std::vector<Tweet> tweets;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++stats.records;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) {
      ++stats.skipped_malformed;
      continue;
    }
    auto t = tweet_from_json(record);
    if (!t) {
      ++stats.skipped_missing_fields;
      continue;
    }
    tweets.push_back(std::move(*t));
  }
  return tweets;
}

std::vector<Tweet> read_csv(std::istream& in, LoadStats& stats) {
  std::vector<Tweet> tweets;
  std::vector<std::string> header;
  if (!read_csv_record(in, header)) return tweets;
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column[to_lower(trim(header[i]))] = i;
  }
  auto col = [&](std::initializer_list<const char*> names)
      -> std::optional<std::size_t> {
    for (const char* n : names) {
      if (auto it = column.find(n); it != column.end()) return it->second;
    }
    return std::nullopt;
  };
  const auto c_id = col({"id", "tweet_id"});
  const auto c_user = col({"user", "user_id"});
  const auto c_text = col({"text"});
  const auto c_tags = col({"hashtags"});
  const auto c_rt = col({"retweet_of"});
  const auto c_reply = col({"reply_to"});
  const auto c_event = col({"event"});

  std::vector<std::string> fields;
  while (read_csv_record(in, fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    ++stats.records;
    auto get = [&](std::optional<std::size_t> c) -> std::string {
      if (!c || *c >= fields.size()) return {};
      return fields[*c];
    };
    Tweet t;
    t.id = std::string(trim(get(c_id)));
    t.user = std::string(trim(get(c_user)));
    t.text = get(c_text);
    if (t.id.empty() || t.user.empty() || !c_text || *c_text >= fields.size()) {
      ++stats.skipped_missing_fields;
      continue;
    }
    t.hashtags = split_tag_field(get(c_tags));
    if (auto v = std::string(trim(get(c_rt))); !v.empty()) t.retweet_of = v;
    if (auto v = std::string(trim(get(c_reply))); !v.empty()) t.reply_to = v;
    t.event = get(c_event);
    tweets.push_back(std::move(t));
  }
  return tweets;
}

}  // namespace

TweetCorpus TweetCorpus::from_tweets(std::vector<Tweet> tweets,
                                     LoadStats* stats) {
  TweetCorpus corpus;
  for (auto& t : tweets) {
    if (t.id.empty() || t.user.empty()) {
      if (stats) ++stats->skipped_missing_fields;
      continue;
    }
    if (corpus.tweets_.count(t.id) != 0) {
      if (stats) ++stats->duplicates;
      continue;
    }
    if (t.hashtags.empty()) t.hashtags = extract_hashtags(t.text);
    for (auto& h : t.hashtags) h = normalize_hashtag(h);
    dedupe_in_order(t.hashtags);
    if (t.mentions.empty()) t.mentions = extract_mentions(t.text);
    for (auto& m : t.mentions) {
      std::string_view v = trim(m);
      if (!v.empty() && v.front() == '@') v.remove_prefix(1);
      m = to_lower(v);
    }
    dedupe_in_order(t.mentions);
    if (t.url_domains.empty()) t.url_domains = extract_url_domains(t.text);
    for (auto& d : t.url_domains) d = to_lower(trim(d));
    dedupe_in_order(t.url_domains);
    if (t.reply_to && (t.reply_to->empty() || *t.reply_to == t.id)) {
      t.reply_to.reset();
    }
    if (t.retweet_of && (t.retweet_of->empty() || *t.retweet_of == t.id)) {
      t.retweet_of.reset();
    }
    corpus.users_.insert(t.user);
    std::string id = t.id;
    corpus.tweets_.emplace(std::move(id), std::move(t));
  }
  for (const auto& [id, t] : corpus.tweets_) {
    if (!t.reply_to) continue;
    corpus.reply_index_[*t.reply_to].push_back(id);
    if (corpus.tweets_.count(*t.reply_to) == 0) {
      corpus.missing_reply_targets_.insert(*t.reply_to);
    }
  }
  if (stats) stats->loaded = corpus.tweets_.size();
  return corpus;
}

const Tweet* TweetCorpus::find(std::string_view id) const {
  auto it = tweets_.find(std::string(id));
  return it == tweets_.end() ? nullptr : &it->second;
}

InputFormat format_from_path(const std::filesystem::path& path) {
  return to_lower(path.extension().string()) == ".csv" ? InputFormat::kCsv
                                                       : InputFormat::kJsonl;
}

LoadResult load_tweets(const std::filesystem::path& path, InputFormat format) {
  std::ifstream in = open_input(path);
  LoadResult result;
  std::vector<Tweet> tweets = format == InputFormat::kCsv
                                  ? read_csv(in, result.stats)
                                  : read_jsonl(in, result.stats);
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  result.corpus = TweetCorpus::from_tweets(std::move(tweets), &result.stats);
  if (result.corpus.empty()) {
    throw EmptyCorpusError("no valid tweet records in '" + path.string() +
                           "'");
  }
  return result;
}

void write_tweets_jsonl(const TweetCorpus& corpus,
                        const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (const auto& [id, t] : corpus.tweets()) {
    out << tweet_to_json(t).dump() << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::optional<std::string> clean_text(std::string_view raw) {
  std::vector<std::string_view> kept;
  for (std::string_view token : whitespace_tokens(raw)) {
    if (token.front() == '@' || is_url_token(token)) continue;
    kept.push_back(token);
  }
  std::size_t first = 0;
  while (first < kept.size() && is_rt_marker(kept[first])) ++first;
  if (first == kept.size()) return std::nullopt;

  std::string out;
  for (std::size_t k = first; k < kept.size(); ++k) {
    if (!out.empty()) out.push_back(' ');
    out.append(kept[k]);
  }
  return out;
}

std::vector<std::string> extract_hashtags(std::string_view text) {
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    if (i > 0 && is_word_byte(text[i - 1])) continue;
    std::size_t j = i + 1;
    while (j < text.size() && is_word_byte(text[j])) ++j;
    if (j > i + 1) tags.push_back(to_lower(text.substr(i + 1, j - i - 1)));
    i = j - 1;
  }
  dedupe_in_order(tags);
  return tags;
}

std::vector<std::string> extract_mentions(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '@') continue;
    if (i > 0 && is_word_byte(text[i - 1])) continue;
    std::size_t j = i + 1;
    while (j < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[j])) != 0 ||
            text[j] == '_')) {
      ++j;
    }
    if (j > i + 1) out.push_back(to_lower(text.substr(i + 1, j - i - 1)));
    i = j - 1;
  }
  dedupe_in_order(out);
  return out;
}

std::vector<std::string> extract_url_domains(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view token : whitespace_tokens(text)) {
    if (!is_url_token(token)) continue;
    if (auto scheme = token.find("://"); scheme != std::string_view::npos) {
      token.remove_prefix(scheme + 3);
    }
    const std::size_t end = token.find_first_of("/?#:");
    std::string host = to_lower(token.substr(0, end));
    while (!host.empty() && !is_word_byte(host.back())) host.pop_back();
    if (host.rfind("www.", 0) == 0) host.erase(0, 4);
    if (!host.empty()) out.push_back(std::move(host));
  }
  dedupe_in_order(out);
  return out;
}

std::vector<ConversationPair> extract_conversations(const TweetCorpus& corpus,
                                                    ConversationStats* stats) {
  ConversationStats local;
  std::vector<ConversationPair> pairs;
  for (const auto& [id, reply] : corpus.tweets()) {
    if (!reply.reply_to) continue;
    const Tweet* source = corpus.find(*reply.reply_to);
    if (source == nullptr) {
      ++local.missing_target;
      continue;
    }
    if (source->user == reply.user) {
      ++local.self_replies;
      continue;
    }
    auto source_text = clean_text(source->text);
    auto reply_text = clean_text(reply.text);
    if (!source_text || !reply_text) {
      ++local.empty_text;
      continue;
    }
    ConversationPair p;
    p.source_tweet_id = source->id;
    p.reply_tweet_id = reply.id;
    p.source_user = source->user;
    p.reply_user = reply.user;
    p.source_text = std::move(*source_text);
    p.reply_text = std::move(*reply_text);
    p.event = reply.event;
    pairs.push_back(std::move(p));
  }
  local.pairs = pairs.size();
  if (stats) *stats = local;
  return pairs;
}

std::map<std::string, std::vector<std::string>> extract_user_documents(
    const TweetCorpus& corpus) {
  std::map<std::string, std::vector<std::string>> docs;
  for (const auto& [id, t] : corpus.tweets()) {
    if (auto cleaned = clean_text(t.text)) {
      docs[t.user].push_back(std::move(*cleaned));
    }
  }
  return docs;
}

void write_conversations_jsonl(const std::vector<ConversationPair>& pairs,
                               const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (const auto& p : pairs) {
    json j;
    j["pair_id"] = p.pair_id();
    j["source_tweet_id"] = p.source_tweet_id;
    j["reply_tweet_id"] = p.reply_tweet_id;
    j["source_user"] = p.source_user;
    j["reply_user"] = p.reply_user;
    j["source_text"] = p.source_text;
    j["reply_text"] = p.reply_text;
    j["event"] = p.event;
    j["label"] = to_int(p.label);
    if (p.label_kind) {
      j["label_kind"] = *p.label_kind == LabelKind::kGold ? "gold" : "weak";
    } else {
      j["label_kind"] = nullptr;
    }
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ConversationPair> read_conversations_jsonl(
    const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<ConversationPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw InvalidInputError(path.string() + ":" + std::to_string(line_no) +
                              ": malformed JSON");
    }
    ConversationPair p;
    p.reply_tweet_id = json_id(j, {"reply_tweet_id", "pair_id", "id"})
                           .value_or("line" + std::to_string(line_no));
    p.source_tweet_id = json_id(j, {"source_tweet_id"}).value_or("");
    p.source_user = json_id(j, {"source_user"}).value_or("");
    p.reply_user = json_id(j, {"reply_user"}).value_or("");
    p.source_text = j.value("source_text", std::string{});
    p.reply_text = j.value("reply_text", std::string{});
    p.event = j.value("event", std::string{});
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      p.label = it->is_number() ? pair_label_from_int(it->get<int>())
                                : parse_pair_label(it->get<std::string>());
    }
    if (auto it = j.find("label_kind"); it != j.end() && it->is_string()) {
      p.label_kind =
          it->get<std::string>() == "gold" ? LabelKind::kGold : LabelKind::kWeak;
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace stance
