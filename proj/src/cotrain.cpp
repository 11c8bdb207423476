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

#include "stance/cotrain.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <unordered_map>

#include "stance/metrics.hpp"
#include "stance/table_io.hpp"

namespace stance {
namespace {

using nlohmann::json;

bool is_fraction(double v) { return v >= 0.0 && v <= 1.0; }

// Positions of unlabeled users with a non-zero stance, most confident first.
std::vector<std::size_t> ranked_candidates(const StanceVector& view,
                                           const LabeledUserSet& labeled) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < view.size(); ++u) {
    if (view.values[u] != Stance::kNone && !labeled.contains(u)) {
      out.push_back(u);
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return view.confidence[a] > view.confidence[b];
  });
  return out;
}

std::size_t top_fraction(double k, std::size_t count) {
  // Guard against k * count landing a hair above an integer.
  return std::min(count, static_cast<std::size_t>(std::ceil(
                             k * static_cast<double>(count) - 1e-9)));
}

std::string strip_terms(const std::string& doc,
                        const std::set<std::string>& excluded) {
  if (excluded.empty()) return doc;
  std::string out;
  for (std::string_view token : split(doc, ' ')) {
    if (token.empty() || excluded.count(to_lower(token)) != 0) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

std::optional<double> maybe(const UserStanceScore& s, double v) {
  if (s.evaluated == 0) return std::nullopt;
  return v;
}

}  // namespace

void CoTrainConfig::validate() const {
  if (!is_fraction(theta_u) || !is_fraction(theta_h) ||
      !is_fraction(theta_t)) {
    throw InvalidInputError("thresholds must lie in [0, 1]");
  }
  if (!(mix_k > 0.0 && mix_k <= 1.0)) {
    throw InvalidInputError("mixing fraction K must lie in (0, 1]");
  }
  if (max_iterations < 1) throw InvalidInputError("max_iterations must be >= 1");
  if (round_trips < 1) throw InvalidInputError("round_trips must be >= 1");
  if (min_df < 1) throw InvalidInputError("min_df must be >= 1");
  if (max_ngram < 1 || max_ngram > 2) {
    throw InvalidInputError("max_ngram must be 1 or 2");
  }
}

std::string_view to_string(LabelSource s) {
  switch (s) {
    case LabelSource::kSeed:
      return "seed";
    case LabelSource::kNetwork:
      return "network";
    case LabelSource::kText:
      return "text";
  }
  return "seed";
}

LabelSource parse_label_source(std::string_view s) {
  if (s == "seed") return LabelSource::kSeed;
  if (s == "network") return LabelSource::kNetwork;
  if (s == "text") return LabelSource::kText;
  throw InvalidInputError("unknown label source '" + std::string(s) + "'");
}

bool LabeledUserSet::insert(std::size_t user, const LabeledUser& label) {
  if (label.stance == Stance::kNone) {
    throw InvalidInputError("labeled users must be Pro or Anti");
  }
  if (labels_.at(user)) return false;
  labels_[user] = label;
  ++size_;
  return true;
}

std::size_t LabeledUserSet::count(Stance s) const {
  return static_cast<std::size_t>(
      std::count_if(labels_.begin(), labels_.end(),
                    [s](const auto& l) { return l && l->stance == s; }));
}

std::vector<NewLabel> add_new_labeled_examples(const StanceVector& network,
                                               const StanceVector& text,
                                               double k,
                                               const LabeledUserSet& labeled,
                                               int iteration,
                                               AdditionStats* stats) {
  if (!(k > 0.0 && k <= 1.0)) {
    throw InvalidInputError("mixing fraction K must lie in (0, 1]");
  }
  if (network.size() != labeled.universe() ||
      text.size() != labeled.universe()) {
    throw InvalidInputError("view sizes do not match the labeled set");
  }
  AdditionStats local;
  const auto net_ranked = ranked_candidates(network, labeled);
  const auto text_ranked = ranked_candidates(text, labeled);
  local.network_candidates = net_ranked.size();
  local.text_candidates = text_ranked.size();
  local.network_proposed = top_fraction(k, net_ranked.size());
  local.text_proposed = top_fraction(k, text_ranked.size());

  std::vector<char> from_net(labeled.universe(), 0);
  std::vector<char> from_text(labeled.universe(), 0);
  for (std::size_t i = 0; i < local.network_proposed; ++i) {
    from_net[net_ranked[i]] = 1;
  }
  for (std::size_t i = 0; i < local.text_proposed; ++i) {
    from_text[text_ranked[i]] = 1;
  }

  std::vector<NewLabel> out;
  for (std::size_t u = 0; u < labeled.universe(); ++u) {
    if (!from_net[u] && !from_text[u]) continue;
    const LabeledUser net_label{network.values[u], network.confidence[u],
                                LabelSource::kNetwork, iteration};
    const LabeledUser text_label{text.values[u], text.confidence[u],
                                 LabelSource::kText, iteration};
    if (from_net[u] && !from_text[u]) {
      out.push_back({u, net_label});
    } else if (from_text[u] && !from_net[u]) {
      out.push_back({u, text_label});
    } else if (net_label.stance == text_label.stance) {
      out.push_back({u, text_label.confidence >= net_label.confidence
                            ? text_label
                            : net_label});
    } else if (net_label.confidence > text_label.confidence) {
      out.push_back({u, net_label});
    } else if (text_label.confidence > net_label.confidence) {
      out.push_back({u, text_label});
    } else {
      ++local.conflicts_skipped;
    }
  }
  if (stats) *stats = local;
  return out;
}

Stance joint_stance(Stance text, double text_confidence, Stance network,
                    double network_confidence) {
  return joint_user_stance(text, text_confidence, network, network_confidence)
      .stance;
}

UserStance joint_user_stance(Stance text, double text_confidence,
                             Stance network, double network_confidence) {
  if (text_confidence == 0.0 && network_confidence == 0.0) return {};
  if (text_confidence >= network_confidence) return {text, text_confidence};
  return {network, network_confidence};
}

std::optional<std::size_t> StanceTable::index_of(std::string_view user) const {
  auto it = std::lower_bound(users.begin(), users.end(), user);
  if (it == users.end() || *it != user) return std::nullopt;
  return static_cast<std::size_t>(it - users.begin());
}

Stance StanceTable::stance_of(std::string_view user) const {
  auto i = index_of(user);
  return i ? stance[*i] : Stance::kNone;
}

std::size_t StanceTable::count(Stance s) const {
  return static_cast<std::size_t>(std::count(stance.begin(), stance.end(), s));
}

void write_stance_table_csv(const StanceTable& table,
                            const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "user_id,stance,confidence,network_stance,network_confidence,"
         "text_stance,text_confidence,labeled_source\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << csv_escape(table.users[i]) << ',' << to_int(table.stance[i]) << ','
        << format_fixed(table.confidence[i], 6) << ','
        << to_int(table.network.values[i]) << ','
        << format_fixed(table.network.confidence[i], 6) << ','
        << to_int(table.text.values[i]) << ','
        << format_fixed(table.text.confidence[i], 6) << ','
        << (table.labeled_source[i] ? to_string(*table.labeled_source[i])
                                    : std::string_view{})
        << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

StanceTable read_stance_table_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> header;
  if (!read_csv_record(in, header) || header.size() < 2) {
    throw InvalidInputError("'" + path.string() + "' lacks a stance header");
  }
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  auto find = [&](const char* name) -> std::optional<std::size_t> {
    auto it = col.find(name);
    if (it == col.end()) return std::nullopt;
    return it->second;
  };

  struct Row {
    std::string user;
    Stance stance, net, text;
    double conf, net_conf, text_conf;
    std::optional<LabelSource> source;
  };
  std::vector<Row> rows;
  std::vector<std::string> f;
  const auto c_ns = find("network_stance");
  const auto c_nc = find("network_confidence");
  const auto c_ts = find("text_stance");
  const auto c_tc = find("text_confidence");
  const auto c_src = find("labeled_source");
  while (read_csv_record(in, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    auto at = [&](std::optional<std::size_t> c) -> std::string {
      return c && *c < f.size() ? f[*c] : std::string{};
    };
    auto num = [&](std::optional<std::size_t> c) {
      const std::string s = at(c);
      return s.empty() ? 0.0 : std::stod(s);
    };
    Row r;
    r.user = f[0];
    r.stance = parse_stance(f.size() > 1 ? f[1] : "");
    r.conf = f.size() > 2 && !f[2].empty() ? std::stod(f[2]) : 0.0;
    r.net = c_ns ? parse_stance(at(c_ns)) : Stance::kNone;
    r.net_conf = num(c_nc);
    r.text = c_ts ? parse_stance(at(c_ts)) : Stance::kNone;
    r.text_conf = num(c_tc);
    if (const std::string s = at(c_src); !s.empty()) {
      r.source = parse_label_source(s);
    }
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.user < b.user; });

  StanceTable t;
  t.network = StanceVector(rows.size());
  t.text = StanceVector(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.users.push_back(rows[i].user);
    t.stance.push_back(rows[i].stance);
    t.confidence.push_back(rows[i].conf);
    t.network.values[i] = rows[i].net;
    t.network.confidence[i] = rows[i].net_conf;
    t.text.values[i] = rows[i].text;
    t.text.confidence[i] = rows[i].text_conf;
    t.labeled_source.push_back(rows[i].source);
  }
  return t;
}

BipartiteMatrix align_rows(const BipartiteMatrix& m,
                           const std::set<std::string>& extra_users) {
  BipartiteMatrix extra(
      std::vector<std::string>(extra_users.begin(), extra_users.end()), {},
      {});
  return union_matrices(m, extra);
}

UserTextData UserTextData::build(
    std::span<const std::string> users,
    const std::map<std::string, std::vector<std::string>>& documents,
    int min_df, int max_ngram, const std::set<std::string>& excluded_terms) {
  std::vector<std::string> all_docs;
  std::vector<std::size_t> doc_begin{0};
  for (const std::string& user : users) {
    if (auto it = documents.find(user); it != documents.end()) {
      for (const std::string& doc : it->second) {
        all_docs.push_back(strip_terms(doc, excluded_terms));
      }
    }
    doc_begin.push_back(all_docs.size());
  }

  UserTextData data;
  data.doc_begin = std::move(doc_begin);
  if (all_docs.empty()) return data;
  data.vocabulary = Vocabulary::fit(all_docs, min_df, max_ngram);
  for (const std::string& doc : all_docs) {
    data.features.append(data.vocabulary.transform(doc));
  }
  return data;
}

StanceVector network_view(const BipartiteMatrix& aligned,
                          const LabeledUserSet& labeled,
                          const CoTrainConfig& config) {
  StanceVector users(aligned.num_rows());
  clamp_labeled(users, labeled);
  for (int pass = 0; pass < config.round_trips; ++pass) {
    const StanceVector entities =
        propagate_to_entities(aligned, users, config.theta_h);
    users = propagate_to_users(aligned, entities, config.theta_u);
    clamp_labeled(users, labeled);
  }
  return users;
}

void clamp_labeled(StanceVector& network, const LabeledUserSet& labeled) {
  for (std::size_t u = 0; u < network.size(); ++u) {
    if (const LabeledUser* l = labeled.find(u)) {
      network.values[u] = l->stance;
      network.confidence[u] = 1.0;
    }
  }
}

TextViewResult text_view(const UserTextData& text,
                         const LabeledUserSet& labeled,
                         const CoTrainConfig& config) {
  TextViewResult result;
  result.users = StanceVector(text.num_users());
  if (text.empty()) return result;

  std::vector<std::size_t> subset;
  std::vector<int> labels;
  bool has_pro = false;
  bool has_anti = false;
  for (std::size_t u = 0; u < text.num_users(); ++u) {
    const LabeledUser* l = labeled.find(u);
    if (l == nullptr) continue;
    for (std::size_t d = text.doc_begin[u]; d < text.doc_begin[u + 1]; ++d) {
      subset.push_back(d);
      labels.push_back(to_int(l->stance));
      (l->stance == Stance::kPro ? has_pro : has_anti) = true;
    }
  }
  if (!has_pro || !has_anti) return result;

  LinearModel model = train_linear(text.features, subset, labels, {},
                                   text.vocabulary.size(),
                                   config.text_training);
  std::vector<double> scores;
  for (std::size_t u = 0; u < text.num_users(); ++u) {
    scores.clear();
    for (std::size_t d = text.doc_begin[u]; d < text.doc_begin[u + 1]; ++d) {
      scores.push_back(model.decision(text.features, d));
    }
    const UserStance s = aggregate_user_stance(scores, config.theta_t);
    result.users.values[u] = s.stance;
    result.users.confidence[u] = s.confidence;
  }
  result.model = std::move(model);
  return result;
}

StanceTable make_stance_table(std::vector<std::string> users,
                              StanceVector network, StanceVector text,
                              const LabeledUserSet& labeled) {
  StanceTable t;
  t.users = std::move(users);
  t.stance.resize(t.users.size());
  t.confidence.resize(t.users.size());
  t.labeled_source.resize(t.users.size());
  for (std::size_t u = 0; u < t.users.size(); ++u) {
    const UserStance j =
        joint_user_stance(text.values[u], text.confidence[u],
                          network.values[u], network.confidence[u]);
    t.stance[u] = j.stance;
    t.confidence[u] = j.confidence;
    if (const LabeledUser* l = labeled.find(u)) t.labeled_source[u] = l->source;
  }
  t.network = std::move(network);
  t.text = std::move(text);
  return t;
}

json IterationRecord::to_json() const {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return json{{"iteration", iteration},
              {"labeled_before", labeled_before},
              {"labeled_after", labeled_after},
              {"added_network", added_network},
              {"added_text", added_text},
              {"network_candidates", additions.network_candidates},
              {"text_candidates", additions.text_candidates},
              {"conflicts_skipped", additions.conflicts_skipped},
              {"network_nonzero", network_nonzero},
              {"text_nonzero", text_nonzero},
              {"joint_nonzero", joint_nonzero},
              {"f1_network", opt(f1_network)},
              {"f1_text", opt(f1_text)},
              {"f1_joint", opt(f1_joint)},
              {"accuracy_joint", opt(accuracy_joint)}};
}

GoldUserStance read_gold_users_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> f;
  if (!read_csv_record(in, f)) {
    throw InvalidInputError("'" + path.string() + "' is empty");
  }
  GoldUserStance gold;
  while (read_csv_record(in, f)) {
    if (f.size() < 2) continue;
    gold[f[0]] = parse_stance(f[1]);
  }
  return gold;
}

UserStanceScore score_user_stance(std::span<const std::string> users,
                                  std::span<const Stance> predicted,
                                  const GoldUserStance& gold) {
  std::unordered_map<std::string_view, std::size_t> pos;
  for (std::size_t i = 0; i < users.size(); ++i) pos.emplace(users[i], i);
  std::vector<int> pred;
  std::vector<int> truth;
  for (const auto& [user, s] : gold) {
    if (s == Stance::kNone) continue;
    auto it = pos.find(user);
    pred.push_back(it == pos.end() ? 0 : to_int(predicted[it->second]));
    truth.push_back(to_int(s));
  }
  UserStanceScore score;
  score.evaluated = truth.size();
  if (truth.empty()) return score;
  score.f1_macro = f1_macro(pred, truth);
  score.accuracy = accuracy(pred, truth);
  return score;
}

CoTrainResult cotrain(const TweetCorpus& corpus, const BipartiteMatrix& matrix,
                      const SeedHashtagSet& seeds, const CoTrainConfig& config,
                      const GoldUserStance* gold,
                      const IterationCallback& on_iteration) {
  config.validate();
  if (matrix.nnz() == 0) {
    throw InvalidInputError("the user-entity matrix has no edges");
  }
  const BipartiteMatrix aligned = align_rows(matrix, corpus.users());
  const std::vector<std::string>& users = aligned.row_ids();

  CoTrainResult result;
  result.labeled = LabeledUserSet(users.size());
  LabeledUserSet& labeled = result.labeled;
  const StanceVector seeded = seed_user_stance(aligned, seeds);
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (seeded.values[u] == Stance::kNone) continue;
    labeled.insert(u, LabeledUser{seeded.values[u], seeded.confidence[u],
                                  LabelSource::kSeed, 0});
  }
  if (labeled.count(Stance::kPro) == 0 || labeled.count(Stance::kAnti) == 0) {
    throw InvalidInputError(
        "seed hashtags must label at least one Pro and one Anti user");
  }

  std::set<std::string> excluded;
  if (config.strip_seed_hashtags) {
    for (const auto& [tag, label] : seeds) excluded.insert("#" + tag);
  }
  const UserTextData text = UserTextData::build(
      users, extract_user_documents(corpus), config.min_df, config.max_ngram,
      excluded);

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationRecord record;
    record.iteration = it;
    record.labeled_before = labeled.size();

    // Both views read the same labeled-set snapshot.
    auto text_future = std::async(std::launch::async, [&] {
      return text_view(text, labeled, config);
    });
    StanceVector network = network_view(aligned, labeled, config);
    TextViewResult text_result = text_future.get();

    const auto additions =
        add_new_labeled_examples(network, text_result.users, config.mix_k,
                                 labeled, it, &record.additions);
    for (const NewLabel& n : additions) {
      labeled.insert(n.user, n.label);
      (n.label.source == LabelSource::kText ? record.added_text
                                            : record.added_network) += 1;
    }
    record.labeled_after = labeled.size();
    clamp_labeled(network, labeled);

    result.table = make_stance_table(users, std::move(network),
                                     std::move(text_result.users), labeled);
    record.network_nonzero = result.table.size() -
                             result.table.network.count(Stance::kNone);
    record.text_nonzero =
        result.table.size() - result.table.text.count(Stance::kNone);
    record.joint_nonzero =
        result.table.size() - result.table.count(Stance::kNone);
    if (gold != nullptr) {
      const auto net = score_user_stance(users, result.table.network.values,
                                         *gold);
      const auto txt = score_user_stance(users, result.table.text.values, *gold);
      const auto joint = score_user_stance(users, result.table.stance, *gold);
      record.f1_network = maybe(net, net.f1_macro);
      record.f1_text = maybe(txt, txt.f1_macro);
      record.f1_joint = maybe(joint, joint.f1_macro);
      record.accuracy_joint = maybe(joint, joint.accuracy);
    }
    result.history.push_back(record);
    if (on_iteration) on_iteration(record, labeled, result.table);
    if (additions.empty()) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace stance
