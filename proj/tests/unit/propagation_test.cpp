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

#include "doctest.h"
#include "stance/propagation.hpp"
#include "test_support.hpp"

using namespace stance;
namespace st = stance::testing;

namespace {

Entity hashtag(const std::string& name) {
  return Entity{EntityKind::kHashtag, name};
}

StanceVector users_of(std::initializer_list<int> values) {
  StanceVector v(values.size());
  std::size_t i = 0;
  for (int x : values) {
    v.values[i] = stance_from_int(x);
    v.confidence[i] = x == 0 ? 0.0 : 1.0;
    ++i;
  }
  return v;
}

void check_same(const StanceVector& got, const StanceVector& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got.values[i] == want.values[i]);
    CHECK(std::abs(got.confidence[i] - want.confidence[i]) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("seed labeling examples") {
  const BipartiteMatrix h({"anti", "tie", "none"},
                          {hashtag("guncontrolnow"), hashtag("2a"),
                           hashtag("other")},
                          {{0, 0, 3}, {1, 0, 2}, {1, 1, 2}, {2, 2, 4}});
  const SeedHashtagSet seeds = parse_seed_hashtags(
      "#guncontrolnow: Anti, #2A: Pro");
  const auto s = seed_user_stance(h, seeds);
  CHECK(s.values[0] == Stance::kAnti);
  CHECK(s.confidence[0] == 1.0);
  CHECK(s.values[1] == Stance::kNone);
  CHECK(s.confidence[1] == 0.0);
  CHECK(s.values[2] == Stance::kNone);
  CHECK(s.confidence[2] == 0.0);
  CHECK_THROWS_AS(seed_user_stance(h, {}), InvalidInputError);
}

TEST_CASE("seed hashtag parsing") {
  const auto seeds = parse_seed_hashtags(
      "#ThankYouTrump: Pro\n#iranuprising = anti, #x +1");
  CHECK(seeds.size() == 3);
  CHECK(seeds.at("thankyoutrump") == Stance::kPro);
  CHECK(seeds.at("iranuprising") == Stance::kAnti);
  CHECK(seeds.at("x") == Stance::kPro);
  CHECK(parse_seed_hashtags(format_seed_hashtags(seeds)) == seeds);
  CHECK_THROWS_AS(parse_seed_hashtags("#a: Pro, #a: Anti"), InvalidInputError);
  CHECK_THROWS_AS(parse_seed_hashtags("#a: none"), InvalidInputError);
  CHECK_THROWS_AS(parse_seed_hashtags("#a"), InvalidInputError);
}

TEST_CASE("user to entity examples") {
  SUBCASE("entity used only by pro users") {
    const BipartiteMatrix m({"a", "b"}, {hashtag("x")}, {{0, 0, 1}, {1, 0, 4}});
    const auto e = propagate_to_entities(m, users_of({1, 1}), 0.7);
    CHECK(e.values[0] == Stance::kPro);
    CHECK(e.confidence[0] == 1.0);
  }
  SUBCASE("normalized sum 0.5 stays below 0.7") {
    const BipartiteMatrix m({"a", "b", "c", "d"}, {hashtag("x")},
                            {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {3, 0, 1}});
    const auto e = propagate_to_entities(m, users_of({1, 1, 1, -1}), 0.7);
    CHECK(e.values[0] == Stance::kNone);
    CHECK(e.confidence[0] == 0.0);
  }
  SUBCASE("weights 2 pro and 1 anti at 0.3") {
    const BipartiteMatrix m({"p", "q"}, {hashtag("x")}, {{0, 0, 2}, {1, 0, 1}});
    const auto e = propagate_to_entities(m, users_of({1, -1}), 0.3);
    CHECK(e.values[0] == Stance::kPro);
    CHECK(e.confidence[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
}

TEST_CASE("entity to user examples") {
  const StanceVector entities = users_of({1, -1, 0});
  const BipartiteMatrix m({"all", "split", "mostly"},
                          {hashtag("p"), hashtag("a"), hashtag("n")},
                          {{0, 0, 5},
                           {1, 0, 1}, {1, 1, 1},
                           {2, 0, 4}, {2, 2, 1}});
  const auto u = propagate_to_users(m, entities, 0.7);
  CHECK(u.values[0] == Stance::kPro);
  CHECK(u.values[1] == Stance::kNone);
  CHECK(u.values[2] == Stance::kPro);
  CHECK(u.confidence[2] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("threshold equality is neutral") {
  const BipartiteMatrix m({"a", "b", "c", "d"}, {hashtag("x")},
                          {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {3, 0, 1}});
  const auto e = propagate_to_entities(m, users_of({1, 1, 1, -1}), 0.5);
  CHECK(e.values[0] == Stance::kNone);
  const auto lower = propagate_to_entities(m, users_of({1, 1, 1, -1}), 0.49);
  CHECK(lower.values[0] == Stance::kPro);
  CHECK_THROWS_AS(propagate_to_entities(m, users_of({1, 1, 1, -1}), 1.5),
                  InvalidInputError);
}

TEST_CASE("network confidence examples") {
  const StanceVector entities = users_of({1, 1, -1});
  const BipartiteMatrix m({"u", "z", "all"},
                          {hashtag("a"), hashtag("b"), hashtag("c")},
                          {{0, 0, 2}, {0, 1, 1}, {0, 2, 1}, {1, 0, 1}, {2, 2, 4}});
  const std::vector<Stance> users{Stance::kPro, Stance::kNone, Stance::kAnti};
  const auto c = network_confidence(m, entities, users);
  CHECK(c[0] == 0.75);
  CHECK(c[1] == 0.0);
  CHECK(c[2] == 1.0);
}

TEST_CASE("sparse propagation matches the dense oracle") {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    auto g = st::random_graph(rng, 20, 10);
    const st::Dense w = st::to_dense(g.matrix);
    const st::Ratio theta_h{static_cast<long long>(rng() % 11), 10};
    const st::Ratio theta_u{static_cast<long long>(rng() % 11), 10};

    const auto seeded = seed_user_stance(g.matrix, g.seeds);
    check_same(seeded, st::dense_seed(w, g.column_seed));
    const auto entities = propagate_to_entities(g.matrix, seeded,
                                                theta_h.value());
    check_same(entities, st::dense_to_entities(w, seeded, theta_h));
    const auto users = propagate_to_users(g.matrix, entities, theta_u.value());
    check_same(users, st::dense_to_users(w, entities, theta_u));
    const auto conf = network_confidence(g.matrix, entities, users.values);
    for (std::size_t i = 0; i < conf.size(); ++i) {
      CHECK(std::abs(conf[i] - users.confidence[i]) <= 1e-12);
    }
  }
}

TEST_CASE("negating the seeds negates every stance") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 100; ++round) {
    auto g = st::random_graph(rng, 20, 10);
    SeedHashtagSet flipped;
    for (const auto& [tag, s] : g.seeds) flipped[tag] = negate(s);
    const double theta = 0.1 * static_cast<double>(rng() % 10);

    const auto a = seed_user_stance(g.matrix, g.seeds);
    const auto b = seed_user_stance(g.matrix, flipped);
    const auto ea = propagate_to_entities(g.matrix, a, theta);
    const auto eb = propagate_to_entities(g.matrix, b, theta);
    const auto ua = propagate_to_users(g.matrix, ea, theta);
    const auto ub = propagate_to_users(g.matrix, eb, theta);
    for (const auto* pair : {&a, &ea, &ua}) {
      const auto& other = pair == &a ? b : (pair == &ea ? eb : ub);
      for (std::size_t i = 0; i < pair->size(); ++i) {
        CHECK(pair->values[i] == negate(other.values[i]));
        CHECK(pair->confidence[i] == other.confidence[i]);
      }
    }
  }
}

TEST_CASE("raising the threshold only zeroes stances") {
  std::mt19937_64 rng(9);
  for (int round = 0; round < 100; ++round) {
    auto g = st::random_graph(rng, 20, 10);
    const auto seeded = seed_user_stance(g.matrix, g.seeds);
    const auto entities = propagate_to_entities(g.matrix, seeded, 0.0);
    StanceVector previous = propagate_to_users(g.matrix, entities, 0.0);
    for (int t = 1; t <= 10; ++t) {
      const auto current = propagate_to_users(g.matrix, entities, 0.1 * t);
      for (std::size_t i = 0; i < current.size(); ++i) {
        CHECK((current.values[i] == previous.values[i] ||
               current.values[i] == Stance::kNone));
      }
      previous = current;
    }
  }
}

TEST_CASE("isolated users stay neutral") {
  const BipartiteMatrix m({"a", "lonely"}, {hashtag("x")}, {{0, 0, 1}});
  const auto entities = users_of({1});
  for (double theta : {0.0, 0.5, 1.0}) {
    const auto u = propagate_to_users(m, entities, theta);
    CHECK(u.values[1] == Stance::kNone);
    CHECK(u.confidence[1] == 0.0);
  }
}

TEST_CASE("confidence is zero exactly for neutral entries") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 50; ++round) {
    auto g = st::random_graph(rng, 20, 10);
    const auto s = seed_user_stance(g.matrix, g.seeds);
    const auto e = propagate_to_entities(g.matrix, s, 0.3);
    const auto u = propagate_to_users(g.matrix, e, 0.3);
    for (const auto* v : {&s, &e, &u}) {
      for (std::size_t i = 0; i < v->size(); ++i) {
        CHECK((v->confidence[i] == 0.0) == (v->values[i] == Stance::kNone));
        CHECK(v->confidence[i] >= 0.0);
        CHECK(v->confidence[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("stance csv output") {
  st::TempDir dir("prop");
  StanceVector v = users_of({1, 0, -1});
  v.confidence[0] = 2.0 / 3.0;
  const std::vector<std::string> ids{"a", "b", "c,d"};
  write_stance_csv(ids, v, dir / "s.csv");
  CHECK(st::slurp(dir / "s.csv") ==
        "id,stance,confidence\na,1,0.666667\nb,0,0.000000\n\"c,d\",-1,1.000000\n");
}
