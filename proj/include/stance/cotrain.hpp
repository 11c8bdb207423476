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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stance/corpus.hpp"
#include "stance/graph.hpp"
#include "stance/propagation.hpp"
#include "stance/textclf.hpp"

namespace stance {

struct CoTrainConfig {
  double theta_u = 0.7;   // entity -> user threshold
  double theta_h = 0.7;   // user -> entity threshold
  double theta_t = 0.7;   // text aggregation threshold
  double mix_k = 0.2;     // fraction of confident candidates added per view
  int max_iterations = 5;
  // User -> entity -> user passes per iteration.
  int round_trips = 1;
  int min_df = 2;
  int max_ngram = 2;
  // Drop seed hashtags from text features (leakage studies).
  bool strip_seed_hashtags = false;
  TrainOptions text_training;

  // Throws InvalidInputError when a fraction is outside [0, 1], mix_k is 0,
  // or an iteration count is < 1.
  void validate() const;
};

enum class LabelSource { kSeed, kNetwork, kText };
std::string_view to_string(LabelSource s);
LabelSource parse_label_source(std::string_view s);

struct LabeledUser {
  Stance stance = Stance::kNone;
  double confidence = 0.0;
  LabelSource source = LabelSource::kSeed;
  int iteration = 0;
};

// Labeled users (UL) keyed by user position. Entries are write-once.
class LabeledUserSet {
 public:
  explicit LabeledUserSet(std::size_t universe = 0) : labels_(universe) {}

  // Returns false and leaves the set unchanged when `user` is already
  // labeled. Throws InvalidInputError for a kNone label.
  bool insert(std::size_t user, const LabeledUser& label);

  const LabeledUser* find(std::size_t user) const {
    return labels_[user] ? &*labels_[user] : nullptr;
  }
  bool contains(std::size_t user) const { return labels_[user].has_value(); }
  std::size_t size() const { return size_; }
  std::size_t universe() const { return labels_.size(); }
  std::size_t count(Stance s) const;

 private:
  std::vector<std::optional<LabeledUser>> labels_;
  std::size_t size_ = 0;
};

struct NewLabel {
  std::size_t user = 0;
  LabeledUser label;
};

struct AdditionStats {
  std::size_t network_candidates = 0;
  std::size_t text_candidates = 0;
  std::size_t network_proposed = 0;
  std::size_t text_proposed = 0;
  std::size_t conflicts_skipped = 0;
};

// From each view's unlabeled users with a non-zero stance, proposes the top
// ceil(k * candidates) by confidence (ties by position). A user proposed by
// both views with different stances takes the more confident one and is
// skipped on an exact tie. Returns additions in user order; `labeled` is not
// modified.
std::vector<NewLabel> add_new_labeled_examples(
    const StanceVector& network, const StanceVector& text, double k,
    const LabeledUserSet& labeled, int iteration = 0,
    AdditionStats* stats = nullptr);

// Joint decision: none when both confidences are 0, the text stance when its
// confidence is at least the network's, the network stance otherwise.
Stance joint_stance(Stance text, double text_confidence, Stance network,
                    double network_confidence);
UserStance joint_user_stance(Stance text, double text_confidence,
                             Stance network, double network_confidence);

// Final per-user stances plus the two views they were combined from.
struct StanceTable {
  std::vector<std::string> users;  // sorted
  std::vector<Stance> stance;
  std::vector<double> confidence;
  StanceVector network;
  StanceVector text;
  std::vector<std::optional<LabelSource>> labeled_source;

  std::size_t size() const { return users.size(); }
  std::optional<std::size_t> index_of(std::string_view user) const;
  // kNone for users absent from the table.
  Stance stance_of(std::string_view user) const;
  std::size_t count(Stance s) const;
};

void write_stance_table_csv(const StanceTable& table,
                            const std::filesystem::path& path);
// Reads files written by write_stance_table_csv, or any CSV whose first three
// columns are id, stance, confidence.
StanceTable read_stance_table_csv(const std::filesystem::path& path);

// Sorted union of the matrix rows and the extra user ids, with the matrix
// re-indexed onto it (users without edges get empty rows).
BipartiteMatrix align_rows(const BipartiteMatrix& m,
                           const std::set<std::string>& extra_users);

// Per-user tweet features for the text view. Documents of user position u
// are feature rows [doc_begin[u], doc_begin[u + 1]).
struct UserTextData {
  Vocabulary vocabulary;
  SparseRows features;
  std::vector<std::size_t> doc_begin{0};

  std::size_t num_users() const { return doc_begin.size() - 1; }
  bool empty() const { return vocabulary.size() == 0; }

  // `users` fixes the positions; users missing from `documents` get none.
  // Terms listed in `excluded_terms` are removed before vectorizing.
  static UserTextData build(
      std::span<const std::string> users,
      const std::map<std::string, std::vector<std::string>>& documents,
      int min_df, int max_ngram,
      const std::set<std::string>& excluded_terms = {});
};

// Network view: labeled users seed the user -> entity -> user passes, then
// labeled users are clamped to their label with confidence 1.
StanceVector network_view(const BipartiteMatrix& aligned,
                          const LabeledUserSet& labeled,
                          const CoTrainConfig& config);

struct TextViewResult {
  StanceVector users;
  // Absent when the labeled users' documents do not cover both classes.
  std::optional<LinearModel> model;
};

// Text view: trains on every document of every labeled user (label = the
// user's stance) and aggregates per-tweet predictions for all users.
TextViewResult text_view(const UserTextData& text,
                         const LabeledUserSet& labeled,
                         const CoTrainConfig& config);

// Sets labeled users in `network` to their label with confidence 1.
void clamp_labeled(StanceVector& network, const LabeledUserSet& labeled);

StanceTable make_stance_table(std::vector<std::string> users,
                              StanceVector network, StanceVector text,
                              const LabeledUserSet& labeled);

struct IterationRecord {
  int iteration = 0;
  std::size_t labeled_before = 0;
  std::size_t labeled_after = 0;
  std::size_t added_network = 0;
  std::size_t added_text = 0;
  AdditionStats additions;
  std::size_t network_nonzero = 0;
  std::size_t text_nonzero = 0;
  std::size_t joint_nonzero = 0;
  // Present only when gold user labels were supplied.
  std::optional<double> f1_network;
  std::optional<double> f1_text;
  std::optional<double> f1_joint;
  std::optional<double> accuracy_joint;

  nlohmann::json to_json() const;
};

using GoldUserStance = std::map<std::string, Stance>;

// Reads "user_id,stance" CSV (header required).
GoldUserStance read_gold_users_csv(const std::filesystem::path& path);

struct CoTrainResult {
  StanceTable table;
  LabeledUserSet labeled;
  std::vector<IterationRecord> history;
  // True when an iteration added no labels.
  bool converged = false;
};

using IterationCallback = std::function<void(
    const IterationRecord&, const LabeledUserSet&, const StanceTable&)>;

// Alternates the network and text views, growing the labeled set with each
// view's most confident predictions until no label is added or
// max_iterations is reached. The result table is the joint decision over
// the last iteration's views, with labeled users clamped in the network view.
// Throws InvalidInputError when the matrix has no edges or the seed users do
// not cover both stances.
CoTrainResult cotrain(const TweetCorpus& corpus, const BipartiteMatrix& matrix,
                      const SeedHashtagSet& seeds, const CoTrainConfig& config,
                      const GoldUserStance* gold = nullptr,
                      const IterationCallback& on_iteration = {});

// Per-gold-user scores for a stance assignment; unlabeled predictions count
// as errors.
struct UserStanceScore {
  double f1_macro = 0.0;
  double accuracy = 0.0;
  std::size_t evaluated = 0;
};
UserStanceScore score_user_stance(std::span<const std::string> users,
                                  std::span<const Stance> predicted,
                                  const GoldUserStance& gold);

}  // namespace stance
