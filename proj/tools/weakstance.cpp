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

// weakstance: command-line driver for the stance pipeline.
//
//   weakstance synth --out data --synth-users 200 --seed-rng 7
//   weakstance run --input data/tweets.jsonl --seeds data/seeds.txt \
//       --gold data/gold_pairs.jsonl --out run1
//   weakstance cotrain --config run.conf --iters 3

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stance/pipeline.hpp"

namespace {

const std::map<std::string, std::string>& help_text() {
  static const std::map<std::string, std::string> text{
      {"input", "tweet file (.jsonl or .csv)"},
      {"input-format", "auto, jsonl or csv"},
      {"event", "event name for tweets without one"},
      {"seeds", "seed hashtags, inline (\"#a: Pro, #b: Anti\") or a file"},
      {"theta-u", "entity -> user threshold"},
      {"theta-t", "text classifier user threshold"},
      {"theta-h", "user -> entity threshold"},
      {"theta-i", "entity report threshold"},
      {"topk-hashtags", "hashtag columns kept"},
      {"topp-retweets", "retweeted tweets kept as columns"},
      {"top-mentions", "mention columns for the entity report"},
      {"top-urls", "url domain columns for the entity report"},
      {"mix-k", "fraction of confident users each view adds per iteration"},
      {"iters", "maximum co-training iterations"},
      {"mode", "conversation features: pair or reply_only"},
      {"out", "output directory"},
      {"seed-rng", "random seed (synthetic data)"},
      {"gold", "gold conversation pairs (JSONL), held out from training"},
      {"gold-users", "gold user stances (CSV user_id,stance)"},
      {"compare-stance", "second-topic user stance CSV for the cross tab"},
  };
  return text;
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const stance::DependencyError*>(&e)) return 3;
  if (dynamic_cast<const stance::InvalidInputError*>(&e)) return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly supervised stance detection from seed hashtags"};
  app.require_subcommand(1);

  std::string config_file;
  bool force = false;
  bool quiet = false;
  app.add_option("--config", config_file, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_flag("--force", force, "rerun stages even when up to date");
  app.add_flag("-q,--quiet", quiet, "no progress output");

  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : stance::config_keys()) {
    auto it = help_text().find(key);
    options[key] = app.add_option("--" + key, values[key],
                                  it == help_text().end() ? "" : it->second);
  }

  const std::vector<std::pair<std::string, std::string>> commands{
      {"ingest", "load tweets, write corpus and conversation pairs"},
      {"build-graph", "build the user x entity matrices"},
      {"cotrain", "propagate seed labels and co-train the text view"},
      {"weaklabel", "label conversation pairs from user stances"},
      {"train-conv", "train the conversation classifier on weak labels"},
      {"predict", "score every conversation pair"},
      {"eval", "score the classifier on gold pairs"},
      {"analyze", "entity stance report and cross tabulation"},
      {"synth", "generate a synthetic two-community corpus"},
      {"run", "all stages from ingest to analyze"},
  };
  for (const auto& [name, description] : commands) {
    app.add_subcommand(name, description)->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    stance::PipelineConfig config;
    if (!config_file.empty()) config.load_file(config_file);
    for (const auto& key : stance::config_keys()) {
      if (options[key]->count() > 0) config.set(key, values[key]);
    }

    if (command == "synth") {
      const stance::SyntheticCorpus corpus = stance::run_synth(config);
      if (!quiet) {
        std::cerr << "[synth] " << corpus.tweets.size() << " tweets, "
                  << corpus.gold_users.size() << " users, "
                  << corpus.gold_pairs.size() << " gold pairs in "
                  << config.out.string() << '\n';
      }
      return 0;
    }

    stance::RunOptions run;
    run.force = force;
    run.log = quiet ? nullptr : &std::cerr;
    if (command == "run") {
      stance::run_pipeline(config, run);
    } else {
      stance::run_stage(stance::parse_stage(command), config, run);
    }
  } catch (const std::exception& e) {
    std::cerr << "weakstance " << command << ": error: " << e.what() << '\n';
    return exit_code(e);
  }
  return 0;
}
