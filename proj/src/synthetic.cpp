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

#include "stance/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "stance/table_io.hpp"

namespace stance {
namespace {

const char* const kFavorMarkers[] = {"agree",   "exactly", "yes",
                                     "thanks",  "right",   "support",
                                     "welldone", "true"};
const char* const kOpposeMarkers[] = {"wrong", "nonsense", "disagree", "no",
                                      "lies",  "ridiculous", "false",  "shame"};

std::string numbered(const char* prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (digits.size() < static_cast<std::size_t>(width)) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

// Popularity of rank r is proportional to 1 / (r + 1).
class ZipfPool {
 public:
  explicit ZipfPool(std::vector<std::string> items) : items_(std::move(items)) {
    std::vector<double> w(items_.size());
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / (r + 1.0);
    dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
  }
  const std::string& draw(std::mt19937_64& rng) { return items_[dist_(rng)]; }
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
  std::discrete_distribution<std::size_t> dist_;
};

class Generator {
 public:
  explicit Generator(const SyntheticOptions& o) : o_(o), rng_(o.seed) {}

  SyntheticCorpus run();

 private:
  bool coin(double p) { return unit_(rng_) < p; }
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  std::string topic_text(int community, std::size_t words);
  void add_entities(Tweet& t, std::size_t user);

  const SyntheticOptions& o_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};

  std::vector<std::string> users_;
  std::vector<int> community_;
  std::vector<std::vector<std::size_t>> members_{2};
  // Pools 0 and 1 belong to the communities, pool 2 is shared.
  std::vector<ZipfPool> hashtags_;
  std::vector<ZipfPool> words_;
  std::vector<ZipfPool> domains_;
  std::vector<bool> uses_hashtags_;
};

std::string Generator::topic_text(int community, std::size_t words) {
  std::string text;
  for (std::size_t i = 0; i < words; ++i) {
    if (!text.empty()) text += ' ';
    text += coin(o_.polarity) ? words_[community].draw(rng_)
                              : words_[2].draw(rng_);
  }
  return text;
}

void Generator::add_entities(Tweet& t, std::size_t user) {
  const int community = community_[user];
  if (uses_hashtags_[user]) {
    const std::size_t n = 1 + pick(2);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& tag = coin(o_.polarity) ? hashtags_[community].draw(rng_)
                                                 : hashtags_[2].draw(rng_);
      if (std::find(t.hashtags.begin(), t.hashtags.end(), tag) ==
          t.hashtags.end()) {
        t.hashtags.push_back(tag);
        t.text += " #" + tag;
      }
    }
  }
  if (coin(o_.mention_rate)) {
    const auto& pool = coin(o_.polarity) ? members_[community]
                                         : members_[pick(2)];
    const std::string& target = users_[pool[pick(pool.size())]];
    if (target != t.user) t.text += " @" + target;
  }
  if (coin(o_.url_rate)) {
    const std::string& domain = coin(o_.polarity) ? domains_[community].draw(rng_)
                                                  : domains_[2].draw(rng_);
    t.text += " https://" + domain + "/" + numbered("p", pick(1000), 3);
  }
}

SyntheticCorpus Generator::run() {
  const std::size_t n = o_.n_users;
  const int width = std::max<int>(4, static_cast<int>(std::to_string(n).size()));
  for (std::size_t i = 0; i < n; ++i) users_.push_back(numbered("u", i, width));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng_);
  community_.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) community_[order[k]] = k < n / 2 ? 0 : 1;
  for (std::size_t i = 0; i < n; ++i) members_[community_[i]].push_back(i);
  uses_hashtags_.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    uses_hashtags_[i] = coin(o_.hashtag_user_fraction);
  }

  // Neutral names, randomly assigned to pools.
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < o_.n_hashtags; ++i) {
    tags.push_back(numbered("ht", i, 3));
  }
  std::shuffle(tags.begin(), tags.end(), rng_);
  const std::size_t shared = std::max<std::size_t>(1, o_.n_hashtags / 4);
  const std::size_t a_size = (o_.n_hashtags - shared) / 2;
  hashtags_.emplace_back(std::vector<std::string>(tags.begin(),
                                                  tags.begin() + a_size));
  hashtags_.emplace_back(std::vector<std::string>(
      tags.begin() + a_size, tags.end() - static_cast<std::ptrdiff_t>(shared)));
  hashtags_.emplace_back(std::vector<std::string>(
      tags.end() - static_cast<std::ptrdiff_t>(shared), tags.end()));

  std::vector<std::string> lexicon;
  for (std::size_t i = 0; i < 3 * o_.lexicon_size; ++i) {
    lexicon.push_back(numbered("w", i, 4));
  }
  std::shuffle(lexicon.begin(), lexicon.end(), rng_);
  for (std::size_t p = 0; p < 3; ++p) {
    words_.emplace_back(std::vector<std::string>(
        lexicon.begin() + p * o_.lexicon_size,
        lexicon.begin() + (p + 1) * o_.lexicon_size));
  }
  const char* const site_prefix[] = {"news-a", "news-b", "news-c"};
  for (std::size_t p = 0; p < 3; ++p) {
    std::vector<std::string> sites;
    for (std::size_t i = 0; i < 5; ++i) {
      sites.push_back(numbered(site_prefix[p], i, 1) + ".example");
    }
    domains_.emplace_back(std::move(sites));
  }

  SyntheticCorpus out;
  std::vector<std::vector<std::size_t>> originals(2);
  std::uint64_t next_id = 1000000000;

  for (std::size_t round = 0; round < o_.tweets_per_user; ++round) {
    std::vector<std::size_t> turn(n);
    std::iota(turn.begin(), turn.end(), 0);
    std::shuffle(turn.begin(), turn.end(), rng_);
    for (std::size_t u : turn) {
      const int c = community_[u];
      Tweet t;
      t.id = std::to_string(next_id++);
      t.user = users_[u];
      t.event = o_.events[pick(o_.events.size())];
      const double r = unit_(rng_);

      if (r < o_.reply_rate) {
        const int target_c = coin(o_.cross_reply_rate) ? 1 - c : c;
        const auto& pool = originals[target_c];
        if (!pool.empty()) {
          const Tweet& target = out.tweets[pool[pick(pool.size())]];
          if (target.user != t.user) {
            PairLabel gold =
                target_c == c ? PairLabel::kFavor : PairLabel::kOppose;
            if (coin(o_.noise)) {
              gold = gold == PairLabel::kFavor ? PairLabel::kOppose
                                               : PairLabel::kFavor;
            }
            const auto& markers =
                gold == PairLabel::kFavor ? kFavorMarkers : kOpposeMarkers;
            t.reply_to = target.id;
            t.event = target.event;
            t.text = "@" + target.user + " " + markers[pick(8)] + " " +
                     markers[pick(8)] + " " +
                     topic_text(c, o_.words_per_tweet / 2);
            add_entities(t, u);
            out.pair_labels[t.id] = gold;
            out.tweets.push_back(std::move(t));
            continue;
          }
        }
      } else if (r < o_.reply_rate + o_.retweet_rate) {
        const auto& pool = coin(o_.polarity) ? originals[c] : originals[pick(2)];
        if (!pool.empty()) {
          const Tweet& orig = out.tweets[pool[pick(pool.size())]];
          if (orig.user != t.user) {
            t.retweet_of = orig.id;
            t.text = "RT @" + orig.user + ": " + orig.text;
            t.hashtags = orig.hashtags;
            out.tweets.push_back(std::move(t));
            continue;
          }
        }
      }
      t.text = topic_text(c, o_.words_per_tweet);
      add_entities(t, u);
      originals[c].push_back(out.tweets.size());
      out.tweets.push_back(std::move(t));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.gold_users[users_[i]] = community_[i] == 0 ? Stance::kPro : Stance::kAnti;
  }
  out.pro_exclusive_hashtags = hashtags_[0].items();
  out.anti_exclusive_hashtags = hashtags_[1].items();

  // Seeds: the most used exclusive hashtag of each side.
  std::map<std::string, std::size_t> usage;
  for (const auto& t : out.tweets) {
    for (const auto& h : t.hashtags) ++usage[h];
  }
  auto most_used = [&](const std::vector<std::string>& pool) {
    std::string best = pool.front();
    for (const auto& h : pool) {
      if (usage[h] > usage[best]) best = h;
    }
    return best;
  };
  out.seeds[most_used(out.pro_exclusive_hashtags)] = Stance::kPro;
  out.seeds[most_used(out.anti_exclusive_hashtags)] = Stance::kAnti;

  // Gold pairs are taken from the extracted conversations so their texts
  // match what the pipeline sees.
  const TweetCorpus corpus = TweetCorpus::from_tweets(out.tweets);
  for (auto& p : extract_conversations(corpus)) {
    auto it = out.pair_labels.find(p.pair_id());
    if (it == out.pair_labels.end() || !coin(o_.gold_pair_fraction)) continue;
    p.label = it->second;
    p.label_kind = LabelKind::kGold;
    out.gold_pairs.push_back(std::move(p));
  }
  return out;
}

}  // namespace

void SyntheticOptions::validate() const {
  if (!(polarity >= 0.0 && polarity <= 1.0)) {
    throw InvalidInputError("polarity must lie in [0, 1]");
  }
  if (n_users < 4 || n_users % 2 != 0) {
    throw InvalidInputError("n_users must be even and at least 4");
  }
  if (n_hashtags < 4) throw InvalidInputError("n_hashtags must be at least 4");
  if (lexicon_size == 0 || words_per_tweet < 2 || tweets_per_user == 0) {
    throw InvalidInputError(
        "lexicon_size and tweets_per_user must be positive, words_per_tweet "
        "at least 2");
  }
  for (double p : {hashtag_user_fraction, retweet_rate, reply_rate,
                   cross_reply_rate, noise, mention_rate, url_rate,
                   gold_pair_fraction}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidInputError("synthetic rates must lie in [0, 1]");
    }
  }
  if (retweet_rate + reply_rate > 1.0) {
    throw InvalidInputError("retweet_rate + reply_rate must not exceed 1");
  }
  if (events.empty()) throw InvalidInputError("at least one event is needed");
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticOptions& options) {
  options.validate();
  return Generator(options).run();
}

void write_synthetic_corpus(const SyntheticCorpus& corpus,
                            const std::filesystem::path& dir) {
  write_tweets_jsonl(TweetCorpus::from_tweets(corpus.tweets),
                     dir / "tweets.jsonl");
  {
    std::ofstream out = open_output(dir / "gold_users.csv");
    out << "user_id,stance\n";
    for (const auto& [user, s] : corpus.gold_users) {
      out << user << ',' << to_int(s) << '\n';
    }
    if (!out) throw IoError("failed writing gold_users.csv");
  }
  write_conversations_jsonl(corpus.gold_pairs, dir / "gold_pairs.jsonl");
  {
    std::ofstream out = open_output(dir / "seeds.txt");
    out << format_seed_hashtags(corpus.seeds) << '\n';
  }
  {
    nlohmann::json truth{
        {"pro_exclusive_hashtags", corpus.pro_exclusive_hashtags},
        {"anti_exclusive_hashtags", corpus.anti_exclusive_hashtags}};
    std::ofstream out = open_output(dir / "truth.json");
    out << truth.dump(2) << '\n';
  }
}

}  // namespace stance
