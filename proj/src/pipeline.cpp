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

#include "stance/pipeline.hpp"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "stance/analysis.hpp"
#include "stance/evaluation.hpp"
#include "stance/graph.hpp"
#include "stance/table_io.hpp"
#include "stance/weaklabel.hpp"

namespace stance {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCorpusFile = "corpus.jsonl";
constexpr const char* kConversationsFile = "conversations.jsonl";
constexpr const char* kGraphFile = "graph.tsv";
constexpr const char* kEntityGraphFile = "entity_graph.tsv";
constexpr const char* kUserStanceFile = "user_stance.csv";
constexpr const char* kWeakLabelsFile = "weak_labels.jsonl";
constexpr const char* kModelFile = "conv_model.json";
constexpr const char* kHistoryFile = "cotrain_history.json";

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw InvalidInputError("bad value '" + std::string(value) + "' for '" +
                            std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = to_lower(trim(value));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidInputError("bad boolean '" + std::string(value) + "' for '" +
                          std::string(key) + "'");
}

using Setter = std::function<void(PipelineConfig&, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = [] {
    std::vector<std::pair<std::string, Setter>> t;
    auto str = [&t](const char* key, std::string PipelineConfig::*field) {
      t.emplace_back(key, [field](PipelineConfig& c, std::string_view v) {
        c.*field = std::string(trim(v));
      });
    };
    auto path = [&t](const char* key, fs::path PipelineConfig::*field) {
      t.emplace_back(key, [field](PipelineConfig& c, std::string_view v) {
        c.*field = fs::path(std::string(trim(v)));
      });
    };
    auto real = [&t](const char* key, auto getter) {
      t.emplace_back(key, [key, getter](PipelineConfig& c, std::string_view v) {
        getter(c) = parse_number<double>(key, v);
      });
    };
    auto count = [&t](const char* key, auto getter) {
      t.emplace_back(key, [key, getter](PipelineConfig& c, std::string_view v) {
        using T = std::remove_reference_t<decltype(getter(c))>;
        getter(c) = parse_number<T>(key, v);
      });
    };

    path("input", &PipelineConfig::input);
    t.emplace_back("input-format", [](PipelineConfig& c, std::string_view v) {
      const std::string f = to_lower(trim(v));
      if (f != "auto" && f != "jsonl" && f != "csv") {
        throw InvalidInputError("input-format must be auto, jsonl or csv");
      }
      c.input_format = f;
    });
    str("event", &PipelineConfig::event);
    str("seeds", &PipelineConfig::seeds);
    real("theta-u", [](PipelineConfig& c) -> double& { return c.cotrain.theta_u; });
    real("theta-t", [](PipelineConfig& c) -> double& { return c.cotrain.theta_t; });
    real("theta-h", [](PipelineConfig& c) -> double& { return c.cotrain.theta_h; });
    real("theta-i", [](PipelineConfig& c) -> double& { return c.theta_i; });
    count("topk-hashtags", [](PipelineConfig& c) -> std::size_t& { return c.topk_hashtags; });
    count("topp-retweets", [](PipelineConfig& c) -> std::size_t& { return c.topp_retweets; });
    count("top-mentions", [](PipelineConfig& c) -> std::size_t& { return c.top_mentions; });
    count("top-urls", [](PipelineConfig& c) -> std::size_t& { return c.top_urls; });
    real("mix-k", [](PipelineConfig& c) -> double& { return c.cotrain.mix_k; });
    count("iters", [](PipelineConfig& c) -> int& { return c.cotrain.max_iterations; });
    count("round-trips", [](PipelineConfig& c) -> int& { return c.cotrain.round_trips; });
    count("min-df", [](PipelineConfig& c) -> int& { return c.cotrain.min_df; });
    count("max-ngram", [](PipelineConfig& c) -> int& { return c.cotrain.max_ngram; });
    t.emplace_back("strip-seed-hashtags",
                   [](PipelineConfig& c, std::string_view v) {
                     c.cotrain.strip_seed_hashtags =
                         parse_bool("strip-seed-hashtags", v);
                   });
    t.emplace_back("mode", [](PipelineConfig& c, std::string_view v) {
      c.conv.mode = parse_pair_mode(v);
    });
    real("context-weight", [](PipelineConfig& c) -> double& { return c.conv.context_weight; });
    count("conv-min-df", [](PipelineConfig& c) -> int& { return c.conv.min_df; });
    count("conv-max-ngram", [](PipelineConfig& c) -> int& { return c.conv.max_ngram; });
    count("report-top-n", [](PipelineConfig& c) -> std::size_t& { return c.report_top_n; });
    path("out", &PipelineConfig::out);
    count("seed-rng", [](PipelineConfig& c) -> std::uint64_t& { return c.rng_seed; });
    path("gold", &PipelineConfig::gold_pairs);
    path("gold-users", &PipelineConfig::gold_users);
    path("compare-stance", &PipelineConfig::compare_stance);
    count("synth-users", [](PipelineConfig& c) -> std::size_t& { return c.synth.n_users; });
    count("synth-hashtags", [](PipelineConfig& c) -> std::size_t& { return c.synth.n_hashtags; });
    real("synth-polarity", [](PipelineConfig& c) -> double& { return c.synth.polarity; });
    real("synth-noise", [](PipelineConfig& c) -> double& { return c.synth.noise; });
    count("synth-tweets-per-user", [](PipelineConfig& c) -> std::size_t& { return c.synth.tweets_per_user; });
    real("synth-reply-rate", [](PipelineConfig& c) -> double& { return c.synth.reply_rate; });
    real("synth-gold-fraction", [](PipelineConfig& c) -> double& { return c.synth.gold_pair_fraction; });
    t.emplace_back("synth-events", [](PipelineConfig& c, std::string_view v) {
      c.synth.events.clear();
      for (auto e : split(v, ',')) {
        if (!trim(e).empty()) c.synth.events.emplace_back(trim(e));
      }
    });
    return t;
  }();
  return table;
}

std::string normalize_key(std::string_view key) {
  std::string k = to_lower(trim(key));
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  for (char& ch : k) {
    if (ch == '_') ch = '-';
  }
  return k;
}

std::string hash_file(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::uint64_t h = fnv1a64("");
  std::string buf(1 << 16, '\0');
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a64(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

// An artifact a stage reads from an earlier stage.
struct Need {
  Stage from;
  const char* file;
};

std::vector<Need> stage_needs(Stage stage) {
  switch (stage) {
    case Stage::kIngest:
      return {};
    case Stage::kBuildGraph:
      return {{Stage::kIngest, kCorpusFile}};
    case Stage::kCotrain:
      return {{Stage::kIngest, kCorpusFile}, {Stage::kBuildGraph, kGraphFile}};
    case Stage::kWeakLabel:
      return {{Stage::kIngest, kConversationsFile},
              {Stage::kCotrain, kUserStanceFile}};
    case Stage::kTrainConv:
      return {{Stage::kWeakLabel, kWeakLabelsFile}};
    case Stage::kPredict:
      return {{Stage::kIngest, kConversationsFile},
              {Stage::kTrainConv, kModelFile}};
    case Stage::kEval:
      return {{Stage::kWeakLabel, kWeakLabelsFile},
              {Stage::kTrainConv, kModelFile}};
    case Stage::kAnalyze:
      return {{Stage::kBuildGraph, kEntityGraphFile},
              {Stage::kCotrain, kUserStanceFile}};
  }
  return {};
}

// The configuration a stage's outputs depend on.
json stage_config(Stage stage, const PipelineConfig& c) {
  switch (stage) {
    case Stage::kIngest:
      return {{"input", c.input.string()},
              {"input_format", c.input_format},
              {"event", c.event}};
    case Stage::kBuildGraph:
      return {{"seeds", format_seed_hashtags(c.seed_set())},
              {"topk_hashtags", c.topk_hashtags},
              {"topp_retweets", c.topp_retweets},
              {"top_mentions", c.top_mentions},
              {"top_urls", c.top_urls}};
    case Stage::kCotrain:
      return {{"seeds", format_seed_hashtags(c.seed_set())},
              {"theta_u", c.cotrain.theta_u},
              {"theta_h", c.cotrain.theta_h},
              {"theta_t", c.cotrain.theta_t},
              {"mix_k", c.cotrain.mix_k},
              {"iters", c.cotrain.max_iterations},
              {"round_trips", c.cotrain.round_trips},
              {"min_df", c.cotrain.min_df},
              {"max_ngram", c.cotrain.max_ngram},
              {"strip_seed_hashtags", c.cotrain.strip_seed_hashtags},
              {"gold_users", c.gold_users.string()}};
    case Stage::kWeakLabel:
      return {{"gold", c.gold_pairs.string()}};
    case Stage::kTrainConv:
      return c.conv.to_json();
    case Stage::kPredict:
      return json::object();
    case Stage::kEval:
      return {{"gold", c.gold_pairs.string()}, {"conv", c.conv.to_json()}};
    case Stage::kAnalyze:
      return {{"theta_i", c.theta_i},
              {"report_top_n", c.report_top_n},
              {"compare_stance", c.compare_stance.string()}};
  }
  return json::object();
}

// Files outside the output directory a stage reads.
std::vector<fs::path> external_inputs(Stage stage, const PipelineConfig& c) {
  std::vector<fs::path> out;
  switch (stage) {
    case Stage::kIngest:
      out.push_back(c.input);
      break;
    case Stage::kCotrain:
      if (!c.gold_users.empty()) out.push_back(c.gold_users);
      break;
    case Stage::kWeakLabel:
    case Stage::kEval:
      if (!c.gold_pairs.empty()) out.push_back(c.gold_pairs);
      break;
    case Stage::kAnalyze:
      if (!c.compare_stance.empty()) out.push_back(c.compare_stance);
      break;
    default:
      break;
  }
  return out;
}

class StageContext {
 public:
  StageContext(Stage stage, const PipelineConfig& config,
               const RunOptions& options)
      : stage_(stage), config_(config), options_(options) {}

  fs::path path(const std::string& name) const { return config_.out / name; }
  const PipelineConfig& config() const { return config_; }

  void log(const std::string& message) const {
    if (options_.log) {
      *options_.log << '[' << to_string(stage_) << "] " << message << '\n';
    }
  }
  // Registers an artifact (relative to the output directory).
  void wrote(const std::string& name) { artifacts_.push_back(name); }
  const std::vector<std::string>& artifacts() const { return artifacts_; }

  TweetCorpus load_corpus() const {
    return load_tweets(path(kCorpusFile), InputFormat::kJsonl).corpus;
  }

 private:
  Stage stage_;
  const PipelineConfig& config_;
  const RunOptions& options_;
  std::vector<std::string> artifacts_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_labeled_users_csv(const std::vector<std::string>& users,
                             const LabeledUserSet& labeled,
                             const fs::path& path) {
  std::ofstream out = open_output(path);
  out << "user_id,stance,confidence,source,iteration\n";
  for (std::size_t u = 0; u < users.size(); ++u) {
    const LabeledUser* l = labeled.find(u);
    if (l == nullptr) continue;
    out << csv_escape(users[u]) << ',' << to_int(l->stance) << ','
        << format_fixed(l->confidence, 6) << ',' << to_string(l->source) << ','
        << l->iteration << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_weak_labels_csv(const std::vector<ConversationPair>& pairs,
                           const fs::path& path) {
  std::ofstream out = open_output(path);
  out << "pair_id,source_tweet_id,reply_tweet_id,source_user,reply_user,event,"
         "label\n";
  for (const auto& p : pairs) {
    out << csv_escape(p.pair_id()) << ',' << csv_escape(p.source_tweet_id)
        << ',' << csv_escape(p.reply_tweet_id) << ','
        << csv_escape(p.source_user) << ',' << csv_escape(p.reply_user) << ','
        << csv_escape(p.event) << ',' << to_int(p.label) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ConversationPair> load_gold_pairs(const PipelineConfig& c) {
  std::vector<ConversationPair> gold = read_conversations_jsonl(c.gold_pairs);
  for (auto& p : gold) p.label_kind = LabelKind::kGold;
  return gold;
}

void ingest(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  if (c.input.empty()) throw InvalidInputError("no input file (--input)");
  InputFormat format = format_from_path(c.input);
  if (c.input_format == "csv") format = InputFormat::kCsv;
  if (c.input_format == "jsonl") format = InputFormat::kJsonl;
  LoadResult loaded = load_tweets(c.input, format);

  bool missing_event = false;
  for (const auto& [id, t] : loaded.corpus.tweets()) {
    if (t.event.empty()) {
      missing_event = true;
      break;
    }
  }
  if (missing_event) {
    std::vector<Tweet> tweets;
    tweets.reserve(loaded.corpus.size());
    for (const auto& [id, t] : loaded.corpus.tweets()) {
      tweets.push_back(t);
      if (tweets.back().event.empty()) tweets.back().event = c.event;
    }
    loaded.corpus = TweetCorpus::from_tweets(std::move(tweets));
  }

  write_tweets_jsonl(loaded.corpus, ctx.path(kCorpusFile));
  ctx.wrote(kCorpusFile);
  ConversationStats conv_stats;
  const auto pairs = extract_conversations(loaded.corpus, &conv_stats);
  write_conversations_jsonl(pairs, ctx.path(kConversationsFile));
  ctx.wrote(kConversationsFile);

  const LoadStats& s = loaded.stats;
  write_json(ctx.path("ingest.json"),
             {{"records", s.records},
              {"loaded", s.loaded},
              {"skipped_missing_fields", s.skipped_missing_fields},
              {"skipped_malformed", s.skipped_malformed},
              {"duplicates", s.duplicates},
              {"tweets", loaded.corpus.size()},
              {"users", loaded.corpus.users().size()},
              {"conversation_pairs", conv_stats.pairs},
              {"replies_missing_target", conv_stats.missing_target},
              {"self_replies", conv_stats.self_replies},
              {"replies_empty_text", conv_stats.empty_text}});
  ctx.wrote("ingest.json");
  ctx.log(std::to_string(loaded.corpus.size()) + " tweets, " +
          std::to_string(loaded.corpus.users().size()) + " users, " +
          std::to_string(pairs.size()) + " conversation pairs");
}

void build_graph(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  const TweetCorpus corpus = ctx.load_corpus();
  std::vector<std::string> forced;
  for (const auto& [tag, s] : c.seed_set()) forced.push_back(tag);

  const BipartiteMatrix hashtags =
      build_user_hashtag_matrix(corpus, c.topk_hashtags, forced);
  const BipartiteMatrix retweets =
      build_user_retweet_matrix(corpus, c.topp_retweets);
  const BipartiteMatrix graph = union_matrices(hashtags, retweets);
  write_triplets(graph, ctx.path(kGraphFile));
  ctx.wrote(kGraphFile);

  const BipartiteMatrix entities = union_matrices(
      union_matrices(hashtags, build_user_mention_matrix(corpus, c.top_mentions)),
      build_user_url_matrix(corpus, c.top_urls));
  write_triplets(entities, ctx.path(kEntityGraphFile));
  ctx.wrote(kEntityGraphFile);

  write_json(ctx.path("graph.json"),
             {{"users", graph.num_rows()},
              {"hashtag_columns", hashtags.num_cols()},
              {"retweet_columns", retweets.num_cols()},
              {"columns", graph.num_cols()},
              {"nnz", graph.nnz()},
              {"entity_columns", entities.num_cols()},
              {"entity_nnz", entities.nnz()}});
  ctx.wrote("graph.json");
  ctx.log(std::to_string(graph.num_rows()) + " users x " +
          std::to_string(graph.num_cols()) + " entities, " +
          std::to_string(graph.nnz()) + " non-zeros");
}

std::string two_digits(int i) {
  std::string s = std::to_string(i);
  return s.size() < 2 ? "0" + s : s;
}

void run_cotrain(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  const TweetCorpus corpus = ctx.load_corpus();
  const BipartiteMatrix graph = read_triplets(ctx.path(kGraphFile));
  GoldUserStance gold;
  if (!c.gold_users.empty()) gold = read_gold_users_csv(c.gold_users);

  fs::remove_all(ctx.path("checkpoints"));
  std::vector<std::string> checkpoint_files;
  auto on_iteration = [&](const IterationRecord& rec,
                          const LabeledUserSet& labeled,
                          const StanceTable& table) {
    const std::string stem = "checkpoints/iter_" + two_digits(rec.iteration);
    write_labeled_users_csv(table.users, labeled,
                            ctx.path(stem + "_labeled.csv"));
    write_json(ctx.path(stem + "_metrics.json"), rec.to_json());
    checkpoint_files.push_back(stem + "_labeled.csv");
    checkpoint_files.push_back(stem + "_metrics.json");
    std::string msg = "iteration " + std::to_string(rec.iteration) + ": " +
                      std::to_string(rec.labeled_after) + " labeled users, " +
                      std::to_string(rec.joint_nonzero) + " with a stance";
    if (rec.f1_joint) msg += ", F1 " + format_fixed(*rec.f1_joint, 4);
    ctx.log(msg);
  };
  const CoTrainResult result = cotrain(corpus, graph, c.seed_set(), c.cotrain,
                                       gold.empty() ? nullptr : &gold,
                                       on_iteration);

  write_stance_table_csv(result.table, ctx.path(kUserStanceFile));
  ctx.wrote(kUserStanceFile);
  write_labeled_users_csv(result.table.users, result.labeled,
                          ctx.path("labeled_users.csv"));
  ctx.wrote("labeled_users.csv");
  json history = json::array();
  for (const auto& rec : result.history) history.push_back(rec.to_json());
  json summary{{"iterations", history},
               {"converged", result.converged},
               {"users", result.table.size()},
               {"pro", result.table.count(Stance::kPro)},
               {"anti", result.table.count(Stance::kAnti)},
               {"neutral", result.table.count(Stance::kNone)}};
  if (!gold.empty()) {
    const UserStanceScore s =
        score_user_stance(result.table.users, result.table.stance, gold);
    summary["gold"] = {{"evaluated", s.evaluated},
                       {"f1_macro", s.f1_macro},
                       {"accuracy", s.accuracy}};
  }
  write_json(ctx.path(kHistoryFile), summary);
  ctx.wrote(kHistoryFile);
  for (const auto& f : checkpoint_files) ctx.wrote(f);
}

void weaklabel(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  const StanceTable table = read_stance_table_csv(ctx.path(kUserStanceFile));
  std::set<std::string> gold_ids;
  if (!c.gold_pairs.empty()) {
    for (const auto& p : load_gold_pairs(c)) gold_ids.insert(p.pair_id());
  }
  const WeakLabelResult result = label_conversations(
      read_conversations_jsonl(ctx.path(kConversationsFile)), table, gold_ids);
  write_conversations_jsonl(result.pairs, ctx.path(kWeakLabelsFile));
  ctx.wrote(kWeakLabelsFile);
  write_weak_labels_csv(result.pairs, ctx.path("weak_labels.csv"));
  ctx.wrote("weak_labels.csv");
  write_json(ctx.path("weaklabel.json"), result.stats.to_json());
  ctx.wrote("weaklabel.json");
  ctx.log(std::to_string(result.stats.favor) + " favor, " +
          std::to_string(result.stats.oppose) + " oppose, " +
          std::to_string(result.stats.unknown) + " unknown, " +
          std::to_string(result.stats.excluded_gold) + " gold pairs held out");
}

void train_conv(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  const auto pairs = read_conversations_jsonl(ctx.path(kWeakLabelsFile));
  const LinearConversationModel model = train_conversation_model(pairs, c.conv);
  model.save(ctx.path(kModelFile));
  ctx.wrote(kModelFile);
  ctx.log(model.name() + " trained on " +
          std::to_string(model.training_size()) + " weakly labeled pairs");
}

void predict(StageContext& ctx) {
  const LinearConversationModel model =
      LinearConversationModel::load(ctx.path(kModelFile));
  const auto pairs = read_conversations_jsonl(ctx.path(kConversationsFile));
  std::ofstream out = open_output(ctx.path("predictions.jsonl"));
  for (const auto& p : pairs) {
    const ConversationPrediction pred =
        predict_conversation(model, p.source_text, p.reply_text);
    out << json{{"pair_id", p.pair_id()},
                {"source_tweet_id", p.source_tweet_id},
                {"reply_tweet_id", p.reply_tweet_id},
                {"event", p.event},
                {"label", to_int(pred.label)},
                {"score", pred.score}}
               .dump()
        << '\n';
  }
  if (!out) throw IoError("failed writing predictions.jsonl");
  ctx.wrote("predictions.jsonl");
  ctx.log(std::to_string(pairs.size()) + " pairs scored");
}

void eval(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  if (c.gold_pairs.empty()) {
    throw InvalidInputError("eval needs gold conversation labels (--gold)");
  }
  const auto gold = load_gold_pairs(c);
  const auto weak = read_conversations_jsonl(ctx.path(kWeakLabelsFile));
  const LinearConversationModel model =
      LinearConversationModel::load(ctx.path(kModelFile));

  // Weakly supervised model, scored per event like a results table.
  EvalReport weak_report;
  weak_report.classifier = model.name();
  weak_report.history_ref = kHistoryFile;
  double sum = 0.0;
  std::size_t scored = 0;
  for (const auto& event : group_by_event(gold)) {
    FoldResult fold;
    fold.held_out = event.event;
    fold.train_size = model.training_size();
    for (const auto& p : event.pairs) {
      if (p.label != PairLabel::kUnknown) ++fold.test_size;
    }
    try {
      fold.scores = evaluate_classifier(model, event.pairs);
      sum += fold.scores->f1_macro;
      ++scored;
    } catch (const Error& e) {
      fold.error = e.what();
    }
    weak_report.folds.push_back(std::move(fold));
  }
  if (scored > 0) weak_report.mean_f1_macro = sum / static_cast<double>(scored);

  MajorityClassifier majority;
  majority.train(weak);

  json report{{"weak_supervised", weak_report.to_json()},
              {"weak_supervised_overall",
               evaluate_classifier(model, gold).to_json()},
              {"majority_baseline",
               evaluate_classifier(majority, gold).to_json()}};

  const auto events = group_by_event(gold);
  if (events.size() >= 2) {
    const ConversationTrainOptions opts = c.conv;
    report["supervised_leave_one_out"] =
        leave_one_out_eval(events, [opts] {
          return std::make_unique<LinearConversationModel>(opts);
        }).to_json();
  } else {
    report["supervised_leave_one_out"] = nullptr;
  }
  write_json(ctx.path("eval_report.json"), report);
  ctx.wrote("eval_report.json");
  std::string msg = "weak-supervised F1-macro ";
  msg += weak_report.mean_f1_macro
             ? format_fixed(*weak_report.mean_f1_macro, 4)
             : std::string("n/a");
  ctx.log(msg);
}

void analyze(StageContext& ctx) {
  const PipelineConfig& c = ctx.config();
  const BipartiteMatrix entities = read_triplets(ctx.path(kEntityGraphFile));
  const StanceTable table = read_stance_table_csv(ctx.path(kUserStanceFile));
  const EntityStanceReport report =
      entity_stance_report(entities, table, c.theta_i, c.report_top_n);
  report.write_csv(ctx.path("entity_report.csv"));
  ctx.wrote("entity_report.csv");
  write_json(ctx.path("entity_report.json"), report.to_json());
  ctx.wrote("entity_report.json");
  if (!c.compare_stance.empty()) {
    const CrossTab tab =
        stance_cross_tab(table, read_stance_table_csv(c.compare_stance));
    write_json(ctx.path("cross_tab.json"), tab.to_json());
    ctx.wrote("cross_tab.json");
    for (const auto& w : tab.warnings) ctx.log("warning: " + w);
  }
  ctx.log(std::to_string(report.pro.size()) + " pro and " +
          std::to_string(report.anti.size()) + " anti entities");
}

void run_body(Stage stage, StageContext& ctx) {
  switch (stage) {
    case Stage::kIngest:
      return ingest(ctx);
    case Stage::kBuildGraph:
      return build_graph(ctx);
    case Stage::kCotrain:
      return run_cotrain(ctx);
    case Stage::kWeakLabel:
      return weaklabel(ctx);
    case Stage::kTrainConv:
      return train_conv(ctx);
    case Stage::kPredict:
      return predict(ctx);
    case Stage::kEval:
      return eval(ctx);
    case Stage::kAnalyze:
      return analyze(ctx);
  }
}

fs::path manifest_path(const PipelineConfig& c, Stage stage) {
  return c.out / "manifest" / (std::string(to_string(stage)) + ".json");
}

bool manifest_matches(const fs::path& path, const json& expected) {
  if (!fs::exists(path)) return false;
  const json m = json::parse(read_file(path), nullptr, false);
  if (m.is_discarded()) return false;
  for (const char* key : {"version", "config_hash", "inputs"}) {
    if (!m.contains(key) || m[key] != expected[key]) return false;
  }
  if (!m.contains("outputs") || !m["outputs"].is_object()) return false;
  const fs::path dir = path.parent_path().parent_path();
  for (const auto& [name, hash] : m["outputs"].items()) {
    const fs::path file = dir / name;
    if (!fs::exists(file) || hash_file(file) != hash.get<std::string>()) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kIngest:
      return "ingest";
    case Stage::kBuildGraph:
      return "build-graph";
    case Stage::kCotrain:
      return "cotrain";
    case Stage::kWeakLabel:
      return "weaklabel";
    case Stage::kTrainConv:
      return "train-conv";
    case Stage::kPredict:
      return "predict";
    case Stage::kEval:
      return "eval";
    case Stage::kAnalyze:
      return "analyze";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  const std::string n = normalize_key(name);
  for (Stage s : {Stage::kIngest, Stage::kBuildGraph, Stage::kCotrain,
                  Stage::kWeakLabel, Stage::kTrainConv, Stage::kPredict,
                  Stage::kEval, Stage::kAnalyze}) {
    if (n == to_string(s)) return s;
  }
  if (n == "graph") return Stage::kBuildGraph;
  throw InvalidInputError("unknown stage '" + std::string(name) + "'");
}

std::vector<Stage> stage_dependencies(Stage stage) {
  std::vector<Stage> out;
  for (const Need& n : stage_needs(stage)) {
    if (std::find(out.begin(), out.end(), n.from) == out.end()) {
      out.push_back(n.from);
    }
  }
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, setter] : setters()) k.push_back(key);
    return k;
  }();
  return keys;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  const std::string k = normalize_key(key);
  for (const auto& [name, setter] : setters()) {
    if (name == k) {
      setter(*this, value);
      return;
    }
  }
  throw InvalidInputError("unknown configuration key '" + std::string(key) +
                          "'");
}

void PipelineConfig::load_file(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidInputError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
    }
    try {
      set(v.substr(0, eq), trim(v.substr(eq + 1)));
    } catch (const InvalidInputError& e) {
      throw InvalidInputError(path.string() + ":" + std::to_string(line_no) +
                              ": " + e.what());
    }
  }
}

SeedHashtagSet PipelineConfig::seed_set() const {
  if (trim(seeds).empty()) {
    throw InvalidInputError("no seed hashtags configured (--seeds)");
  }
  std::error_code ec;
  if (fs::is_regular_file(fs::path(seeds), ec)) {
    return parse_seed_hashtags(read_file(seeds));
  }
  return parse_seed_hashtags(seeds);
}

void PipelineConfig::validate() const {
  cotrain.validate();
  if (!(theta_i >= 0.0 && theta_i <= 1.0)) {
    throw InvalidInputError("theta-i must lie in [0, 1]");
  }
  if (topk_hashtags == 0 || topp_retweets == 0 || top_mentions == 0 ||
      top_urls == 0) {
    throw InvalidInputError("graph sizes must be at least 1");
  }
  if (!(conv.context_weight > 0.0 && conv.context_weight <= 1.0)) {
    throw InvalidInputError("context-weight must lie in (0, 1]");
  }
}

json PipelineConfig::to_json() const {
  return json{{"input", input.string()},
              {"input_format", input_format},
              {"event", event},
              {"seeds", seeds},
              {"theta_u", cotrain.theta_u},
              {"theta_t", cotrain.theta_t},
              {"theta_h", cotrain.theta_h},
              {"theta_i", theta_i},
              {"topk_hashtags", topk_hashtags},
              {"topp_retweets", topp_retweets},
              {"top_mentions", top_mentions},
              {"top_urls", top_urls},
              {"mix_k", cotrain.mix_k},
              {"iters", cotrain.max_iterations},
              {"round_trips", cotrain.round_trips},
              {"conv", conv.to_json()},
              {"report_top_n", report_top_n},
              {"out", out.string()},
              {"seed_rng", rng_seed},
              {"gold", gold_pairs.string()},
              {"gold_users", gold_users.string()},
              {"compare_stance", compare_stance.string()}};
}

DirectoryLock::DirectoryLock(const fs::path& dir) : path_(dir / ".stance.lock") {
  fs::create_directories(dir);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      const std::string pid = std::to_string(::getpid()) + "\n";
      const ssize_t written = ::write(fd, pid.data(), pid.size());
      ::close(fd);
      if (written != static_cast<ssize_t>(pid.size())) {
        fs::remove(path_);
        throw IoError("cannot write lock file '" + path_.string() + "'");
      }
      return;
    }
    if (errno != EEXIST) {
      throw IoError("cannot create lock file '" + path_.string() + "'");
    }
    long owner = 0;
    try {
      owner = std::stol(read_file(path_));
    } catch (const std::exception&) {
      owner = 0;
    }
    const bool alive = owner > 0 && (::kill(static_cast<pid_t>(owner), 0) == 0 ||
                                     errno == EPERM);
    if (alive) {
      throw Error("output directory '" + dir.string() +
                  "' is in use by process " + std::to_string(owner) +
                  " (lock file " + path_.string() + ")");
    }
    fs::remove(path_);  // stale lock
  }
  throw IoError("cannot acquire lock file '" + path_.string() + "'");
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

StageResult run_stage(Stage stage, const PipelineConfig& config,
                      const RunOptions& options) {
  config.validate();
  DirectoryLock lock(config.out);
  const std::string name(to_string(stage));

  json inputs = json::object();
  for (const Need& need : stage_needs(stage)) {
    const fs::path file = config.out / need.file;
    if (!fs::exists(file)) {
      throw DependencyError(name, std::string(to_string(need.from)),
                            "missing " + file.string());
    }
    inputs[need.file] = hash_file(file);
  }
  for (const fs::path& file : external_inputs(stage, config)) {
    if (!fs::exists(file)) {
      throw IoError("stage '" + name + "': cannot read '" + file.string() +
                    "'");
    }
    inputs[file.string()] = hash_file(file);
  }
  const json stage_cfg = stage_config(stage, config);
  json manifest{{"stage", name},
                {"version", kPipelineVersion},
                {"config", stage_cfg},
                {"config_hash", hex64(fnv1a64(stage_cfg.dump()))},
                {"inputs", inputs}};

  StageResult result;
  result.stage = stage;
  const fs::path mpath = manifest_path(config, stage);
  if (!options.force && manifest_matches(mpath, manifest)) {
    if (options.log) *options.log << '[' << name << "] up to date, skipped\n";
    result.skipped = true;
    const json m = json::parse(read_file(mpath));
    for (const auto& [file, hash] : m["outputs"].items()) {
      result.artifacts.push_back(file);
    }
    return result;
  }

  fs::remove(mpath);
  StageContext ctx(stage, config, options);
  run_body(stage, ctx);

  json outputs = json::object();
  for (const auto& file : ctx.artifacts()) {
    outputs[file] = hash_file(config.out / file);
  }
  manifest["outputs"] = outputs;
  write_json(mpath, manifest);
  result.artifacts = ctx.artifacts();
  return result;
}

std::vector<StageResult> run_pipeline(const PipelineConfig& config,
                                      const RunOptions& options) {
  std::vector<StageResult> results;
  for (Stage s : {Stage::kIngest, Stage::kBuildGraph, Stage::kCotrain,
                  Stage::kWeakLabel, Stage::kTrainConv, Stage::kPredict}) {
    results.push_back(run_stage(s, config, options));
  }
  if (!config.gold_pairs.empty()) {
    results.push_back(run_stage(Stage::kEval, config, options));
  }
  results.push_back(run_stage(Stage::kAnalyze, config, options));
  return results;
}

SyntheticCorpus run_synth(const PipelineConfig& config) {
  SyntheticOptions opts = config.synth;
  opts.seed = config.rng_seed;
  DirectoryLock lock(config.out);
  SyntheticCorpus corpus = generate_synthetic_corpus(opts);
  write_synthetic_corpus(corpus, config.out);
  return corpus;
}

}  // namespace stance
