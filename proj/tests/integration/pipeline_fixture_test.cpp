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

#include <sys/wait.h>

#include <cstdlib>

#include "doctest.h"
#include "stance/pipeline.hpp"
#include "test_support.hpp"

using namespace stance;
namespace fs = std::filesystem;
using stance::testing::slurp;
using stance::testing::TempDir;

namespace {

const fs::path kFixture = fs::path(STANCE_FIXTURE_DIR) / "synthetic300";

PipelineConfig fixture_config(const fs::path& out) {
  PipelineConfig c;
  c.load_file(kFixture / "run.conf");
  c.input = kFixture / "tweets.jsonl";
  c.seeds = (kFixture / "seeds.txt").string();
  c.gold_pairs = kFixture / "gold_pairs.jsonl";
  c.gold_users = kFixture / "gold_users.csv";
  c.out = out;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WEAKSTANCE_BIN) + " " + args +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("fixture is the bundled 300-tweet corpus") {
  const auto loaded = load_tweets(kFixture / "tweets.jsonl", InputFormat::kJsonl);
  CHECK(loaded.corpus.size() == 300);
  CHECK(loaded.stats.duplicates == 0);
}

TEST_CASE("full pipeline on the fixture is complete and deterministic") {
  TempDir dir("integration");
  const auto a = run_pipeline(fixture_config(dir / "a"));
  const auto b = run_pipeline(fixture_config(dir / "b"));
  REQUIRE(a.size() == 8);
  for (const auto& r : a) CHECK_FALSE(r.skipped);

  const auto report = nlohmann::json::parse(slurp(dir / "a" / "eval_report.json"));
  REQUIRE(report.contains("weak_supervised_overall"));
  REQUIRE(report.contains("majority_baseline"));
  REQUIRE(report.contains("supervised_leave_one_out"));
  CHECK(report["supervised_leave_one_out"]["folds"].size() == 3);

  for (const char* f : {"user_stance.csv", "labeled_users.csv",
                        "weak_labels.csv", "weak_labels.jsonl",
                        "predictions.jsonl", "entity_report.csv"}) {
    CHECK_MESSAGE(slurp(dir / "a" / f) == slurp(dir / "b" / f), f);
  }

  // The fixture's ground truth is recovered.
  const StanceTable table = read_stance_table_csv(dir / "a" / "user_stance.csv");
  const GoldUserStance gold = read_gold_users_csv(kFixture / "gold_users.csv");
  const auto score = score_user_stance(table.users, table.stance, gold);
  CHECK(score.evaluated == 50);
  CHECK(score.accuracy >= 0.9);

  // Gold pairs never reach the weak training set.
  std::set<std::string> gold_ids;
  for (const auto& p : read_conversations_jsonl(kFixture / "gold_pairs.jsonl")) {
    gold_ids.insert(p.pair_id());
  }
  for (const auto& p : read_conversations_jsonl(dir / "a" / "weak_labels.jsonl")) {
    CHECK(gold_ids.count(p.pair_id()) == 0);
  }
}

TEST_CASE("command line stages, skips and exit codes") {
  TempDir dir("integration");
  const std::string common = "-q --config " + (kFixture / "run.conf").string() +
                             " --input " + (kFixture / "tweets.jsonl").string() +
                             " --seeds " + (kFixture / "seeds.txt").string() +
                             " --out " + (dir / "cli").string();
  CHECK(run_cli("cotrain " + common) == 3);
  CHECK(run_cli("ingest " + common) == 0);
  CHECK(run_cli("build-graph " + common) == 0);
  CHECK(run_cli("cotrain " + common) == 0);
  CHECK(fs::exists(dir / "cli" / "user_stance.csv"));
  CHECK(run_cli("cotrain " + common + " --iters 0") == 2);
  CHECK(run_cli("eval " + common) == 3);
  CHECK(run_cli("no-such-command") != 0);

  const std::string synth_out = (dir / "synth").string();
  CHECK(run_cli("synth -q --out " + synth_out + " --synth-users 20") == 0);
  CHECK(fs::exists(fs::path(synth_out) / "tweets.jsonl"));
}
