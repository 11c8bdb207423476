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
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stance/convclf.hpp"
#include "stance/cotrain.hpp"
#include "stance/synthetic.hpp"

namespace stance {

inline constexpr int kPipelineVersion = 1;

enum class Stage {
  kIngest,
  kBuildGraph,
  kCotrain,
  kWeakLabel,
  kTrainConv,
  kPredict,
  kEval,
  kAnalyze,
};

std::string_view to_string(Stage stage);
// Accepts the CLI names ("build-graph", "train-conv", ...) and "graph".
Stage parse_stage(std::string_view name);
std::vector<Stage> stage_dependencies(Stage stage);

struct PipelineConfig {
  std::filesystem::path input;
  std::string input_format = "auto";  // auto, jsonl or csv
  // Event assigned to tweets that carry none.
  std::string event = "default";
  // Inline seed list or the path of a file holding one.
  std::string seeds;

  CoTrainConfig cotrain;
  double theta_i = 0.7;
  std::size_t topk_hashtags = 250;
  std::size_t topp_retweets = 1000;
  std::size_t top_mentions = 250;
  std::size_t top_urls = 250;
  std::size_t report_top_n = 20;
  ConversationTrainOptions conv;

  std::filesystem::path out = "out";
  std::uint64_t rng_seed = 1;

  std::filesystem::path gold_pairs;
  std::filesystem::path gold_users;
  // Stance table of a second topic for the cross tabulation.
  std::filesystem::path compare_stance;

  SyntheticOptions synth;

  // Keys are the long flag names without dashes, e.g. "theta-u" ("theta_u"
  // also works). Throws InvalidInputError on an unknown key or bad value.
  void set(std::string_view key, std::string_view value);
  // "key = value" lines. Lines whose first non-blank character is '#' are
  // comments; elsewhere '#' is literal so seed lists can be written inline.
  void load_file(const std::filesystem::path& path);

  SeedHashtagSet seed_set() const;
  void validate() const;
  nlohmann::json to_json() const;
};

// Every key accepted by PipelineConfig::set, in a stable order.
const std::vector<std::string>& config_keys();

struct RunOptions {
  bool force = false;  // ignore matching manifests
  std::ostream* log = nullptr;
};

struct StageResult {
  Stage stage = Stage::kIngest;
  bool skipped = false;  // manifest matched, nothing recomputed
  std::vector<std::string> artifacts;
};

// Runs one stage into config.out under the directory lock. Throws
// DependencyError when an upstream artifact is missing.
StageResult run_stage(Stage stage, const PipelineConfig& config,
                      const RunOptions& options = {});

// ingest through analyze; eval only when gold pairs are configured.
std::vector<StageResult> run_pipeline(const PipelineConfig& config,
                                      const RunOptions& options = {});

// Generates a synthetic corpus from config.synth (seeded by rng_seed) into
// config.out and returns it.
SyntheticCorpus run_synth(const PipelineConfig& config);

// Holds <dir>/.stance.lock for its lifetime. A lock left by a dead process
// is taken over.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace stance
