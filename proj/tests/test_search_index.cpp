// Copyright 2026 The RuleHub Authors
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

#include <doctest.h>

#include <random>

#include "rulehub/search_index.hpp"
#include "support/fake_source.hpp"
#include "support/oracles.hpp"

using namespace rulehub;
using oracle::raw_ids;
using Ids = std::vector<std::uint64_t>;

namespace {

struct FlyIndex {
  oracle::FakeSource source;
  Index index;
  FlyIndex() {
    index.insert(source.add(1, "fly", "bird"));
    index.insert(source.add(2, "fly", "plane"));
    index.insert(source.add(3, "fly", "rocket"));
  }
};

}  // namespace

TEST_CASE("insert records postings for both parts") {
  oracle::FakeSource source;
  Index index;
  index.insert(source.add(1, "fly", "bird"));
  REQUIRE(index.posting("fly") != nullptr);
  CHECK(index.posting("fly")->if_rules.count(RuleId{1}) == 1);
  CHECK(index.posting("bird")->then_rules.count(RuleId{1}) == 1);
  CHECK(index.posting("bird")->if_rules.empty());

  CHECK_THROWS_AS(index.insert(*source.find_rule(RuleId{1})), IndexError);

  index.insert(source.add(2, "a AND b", "c"));
  CHECK(index.posting("a")->if_rules.count(RuleId{2}) == 1);
  CHECK(index.posting("b")->if_rules.count(RuleId{2}) == 1);
}

TEST_CASE("remove restores the previous index exactly") {
  oracle::FakeSource source;
  Index index;
  index.insert(source.add(1, "fly", "bird"));
  std::string before = index.serialize();
  std::size_t tokens_before = index.token_count();

  index.insert(source.add(2, "fly AND heavy rain", "plane XOR bird"));
  index.remove(*source.find_rule(RuleId{2}));
  CHECK(index.serialize() == before);
  CHECK(index.token_count() == tokens_before);
  CHECK(index.posting("fly")->if_rules == std::set<RuleId>{RuleId{1}});

  CHECK_THROWS_AS(index.remove(*source.find_rule(RuleId{2})), IndexError);
  index.remove(*source.find_rule(RuleId{1}));
  CHECK(index.token_count() == 0);
  CHECK(index.size() == 0);
}

TEST_CASE("insert/remove inverse on random rule sets") {
  std::mt19937 rng(17);
  auto vocab = oracle::vocabulary(10);
  for (int trial = 0; trial < 50; ++trial) {
    oracle::FakeSource source;
    Index index;
    for (std::uint64_t id = 1; id <= 20; ++id) {
      index.insert(source.add(id, oracle::full_parens(*oracle::random_tree(rng, 3, vocab)),
                              oracle::full_parens(*oracle::random_tree(rng, 2, vocab))));
    }
    std::string before = index.serialize();
    const Rule& extra = source.add(99, oracle::full_parens(*oracle::random_tree(rng, 3, vocab)), "z");
    index.insert(extra);
    index.remove(extra);
    CHECK(index.serialize() == before);
  }
}

TEST_CASE("search over the three-rule example") {
  FlyIndex p;
  CHECK(raw_ids(p.index.search(p.source, {"fly"})) == Ids{1, 2, 3});
  CHECK(raw_ids(p.index.search(p.source, {"fly", "plane"})) == Ids{2});
  CHECK(p.index.search(p.source, {}).empty());
  CHECK(p.index.search(p.source, {"fly", "walk"}).empty());
  CHECK(raw_ids(p.index.search(p.source, {"plane", "plane"})) == Ids{2});
}

TEST_CASE("firing_rules over the three-rule example") {
  FlyIndex p;
  CHECK(raw_ids(p.index.firing_rules(p.source, {"fly"})) == Ids{1, 2, 3});
  CHECK(p.index.firing_rules(p.source, {"walk"}).empty());
  // THEN-side tokens never fire a rule.
  CHECK(p.index.firing_rules(p.source, {"bird"}).empty());
}

TEST_CASE("firing_rules evaluates connectors exactly") {
  oracle::FakeSource source;
  Index index;
  index.insert(source.add(1, "a AND b", "x"));
  index.insert(source.add(2, "a XOR b", "y"));
  index.insert(source.add(3, "a OR b", "z"));
  CHECK(raw_ids(index.firing_rules(source, {"a"})) == Ids{2, 3});
  CHECK(raw_ids(index.firing_rules(source, {"a", "b"})) == Ids{1, 3});
}

TEST_CASE("results follow authority, then score, then id") {
  FlyIndex p;
  p.source.set_key(3, 5, 0);
  CHECK(raw_ids(p.index.search(p.source, {"fly"})) == Ids{3, 1, 2});
  p.source.set_key(3, 0, 0);
  p.source.set_key(2, 0, 1);
  CHECK(raw_ids(p.index.firing_rules(p.source, {"fly"})) == Ids{2, 1, 3});
  p.source.set_key(1, -1, 7);
  CHECK(raw_ids(p.index.firing_rules(p.source, {"fly"})) == Ids{2, 3, 1});
}

TEST_CASE("search and firing_rules agree with a linear scan") {
  std::mt19937 rng(8080);
  for (int trial = 0; trial < 100; ++trial) {
    auto vocab = oracle::vocabulary(2 + rng() % 19);
    oracle::FakeSource source;
    oracle::OracleBase base;
    Index index;
    std::size_t n = rng() % 101;
    for (std::uint64_t id = 1; id <= n; ++id) {
      auto if_tree = oracle::random_tree(rng, 3, vocab);
      auto then_tree = oracle::random_tree(rng, 2, vocab);
      std::uint64_t author = 1 + rng() % 5;
      index.insert(source.add(id, oracle::full_parens(*if_tree), oracle::full_parens(*then_tree), author));
      base.rules.push_back({id, author, if_tree, then_tree});
      long score = static_cast<long>(rng() % 5) - 2;
      base.score[id] = score;
      base.authority[author] += score;
    }
    for (const auto& r : base.rules) {
      source.set_key(r.id, base.authority[r.author], base.score[r.id]);
    }
    for (int q = 0; q < 10; ++q) {
      std::vector<std::string> query;
      for (std::size_t k = rng() % 3; k > 0; --k) query.push_back(vocab[rng() % vocab.size()]);
      CHECK(raw_ids(index.search(source, query)) == oracle::scan_search(base, query));

      std::vector<std::string> facts;
      FactSet fact_set;
      for (const auto& w : vocab) {
        if (rng() % 3 == 0) facts.push_back(w), fact_set.insert(w);
      }
      CHECK(raw_ids(index.firing_rules(source, fact_set)) == oracle::scan_firing(base, facts));
    }
  }
}
