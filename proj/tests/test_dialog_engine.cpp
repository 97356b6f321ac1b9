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

#include "rulehub/dialog_engine.hpp"
#include "support/fake_source.hpp"
#include "support/fixtures.hpp"

using namespace rulehub;

namespace {

struct FlyFixture : oracle::StoreFixture {
  UserId author;
  FlyFixture() : author(user("ann")) {
    rules(author, {{"fly", "bird"}, {"fly", "plane"}, {"fly", "rocket"}});
  }
};

Propose proposal(const Outcome& o) {
  REQUIRE(std::holds_alternative<Propose>(o));
  return std::get<Propose>(o);
}

}  // namespace

TEST_CASE("the three-rule transcript") {
  FlyFixture f;
  auto [session, first] = start_session(f.store->snapshot(), "fly");
  CHECK(first == Outcome{Propose{RuleId{1}, "bird"}});
  CHECK(prompt_for(proposal(first)) == "bird, isn't it?");
  CHECK(session.phase() == DialogSession::Phase::Awaiting);
  CHECK(session.awaiting() == RuleId{1});

  CHECK(answer(session, false) == Outcome{Propose{RuleId{2}, "plane"}});
  CHECK(answer(session, true) == Outcome{Result{"plane"}});
  CHECK(session.phase() == DialogSession::Phase::Finished);
  CHECK(session.accepted() == std::vector<Accepted>{{RuleId{2}, "plane"}});
  // rocket is never proposed after a yes.
  CHECK(session.proposed() == std::set<RuleId>{RuleId{1}, RuleId{2}});
  CHECK_THROWS_AS(answer(session, true), DialogError);
}

TEST_CASE("rejecting everything ends with no result") {
  FlyFixture f;
  auto [session, first] = start_session(f.store->snapshot(), "fly");
  CHECK(proposal(first).conclusion_text == "bird");
  CHECK(proposal(answer(session, false)).conclusion_text == "plane");
  CHECK(proposal(answer(session, false)).conclusion_text == "rocket");
  CHECK(answer(session, false) == Outcome{NoResult{}});
  CHECK(session.phase() == DialogSession::Phase::Exhausted);
  try {
    answer(session, false);
    FAIL("expected SessionFinished");
  } catch (const DialogError& e) {
    CHECK(e.code() == DialogErrc::SessionFinished);
  }
}

TEST_CASE("queries that fire nothing or contain nothing") {
  FlyFixture f;
  auto [session, first] = start_session(f.store->snapshot(), "walk");
  CHECK(first == Outcome{NoResult{}});
  CHECK(session.phase() == DialogSession::Phase::Exhausted);
  try {
    start_session(f.store->snapshot(), "  ");
    FAIL("expected EmptyQuery");
  } catch (const DialogError& e) {
    CHECK(e.code() == DialogErrc::EmptyQuery);
  }
  CHECK_THROWS_AS(start_session(f.store->snapshot(), "fly", {true, 0}), DialogError);
}

TEST_CASE("chain mode follows accepted conclusions") {
  oracle::StoreFixture f;
  UserId u = f.user("u");
  f.rules(u, {{"a", "b"}, {"b", "c"}});
  auto [session, first] = start_session(f.store->snapshot(), "a", {true, 5});
  CHECK(first == Outcome{Propose{RuleId{1}, "b"}});
  CHECK(answer(session, true) == Outcome{Propose{RuleId{2}, "c"}});
  CHECK(answer(session, true) == Outcome{Result{"c"}});
  CHECK(session.accepted() == std::vector<Accepted>{{RuleId{1}, "b"}, {RuleId{2}, "c"}});
  CHECK(session.facts() == FactSet{"a", "b", "c"});
  CHECK(session.depth_remaining() == 3);
}

TEST_CASE("chain mode without chaining behaves like the plain dialog") {
  oracle::StoreFixture f;
  UserId u = f.user("u");
  f.rules(u, {{"a", "b"}, {"b", "c"}});
  auto [session, first] = start_session(f.store->snapshot(), "a", {false, 5});
  CHECK(proposal(first).conclusion_text == "b");
  CHECK(answer(session, true) == Outcome{Result{"b"}});
}

TEST_CASE("chain depth bounds the number of acceptances") {
  oracle::StoreFixture f;
  UserId u = f.user("u");
  f.rules(u, {{"a", "b"}, {"b", "c"}, {"c", "d"}});
  auto [session, first] = start_session(f.store->snapshot(), "a", {true, 2});
  CHECK(proposal(first).conclusion_text == "b");
  CHECK(proposal(answer(session, true)).conclusion_text == "c");
  CHECK(answer(session, true) == Outcome{Result{"c"}});
}

TEST_CASE("chain mode: a rejection after acceptances keeps the last result") {
  oracle::StoreFixture f;
  UserId u = f.user("u");
  f.rules(u, {{"a", "b"}, {"b", "c"}});
  auto [session, first] = start_session(f.store->snapshot(), "a", {true, 5});
  CHECK(proposal(answer(session, true)).conclusion_text == "c");
  CHECK(answer(session, false) == Outcome{Result{"b"}});
}

TEST_CASE("chain mode skips rules that repeat an accepted conclusion") {
  oracle::StoreFixture f;
  UserId u = f.user("u");
  f.rules(u, {{"a", "b"}, {"b", "c"}, {"b", "B!"}});
  auto [session, first] = start_session(f.store->snapshot(), "a", {true, 5});
  CHECK(proposal(first).rule == RuleId{1});
  CHECK(proposal(answer(session, true)).rule == RuleId{2});
  CHECK(answer(session, true) == Outcome{Result{"c"}});
}

TEST_CASE("newly unlocked candidates queue after pending ones") {
  oracle::StoreFixture f;
  UserId u = f.user("u");
  f.rules(u, {{"a", "b"}, {"a", "x"}, {"b", "c"}});
  auto [session, first] = start_session(f.store->snapshot(), "a", {true, 5});
  CHECK(proposal(first).conclusion_text == "b");
  CHECK(proposal(answer(session, true)).conclusion_text == "x");
  CHECK(proposal(answer(session, false)).conclusion_text == "c");
}

TEST_CASE("sessions keep the snapshot they started with") {
  FlyFixture f;
  auto [session, first] = start_session(f.store->snapshot(), "fly");
  f.store->add_rule(f.author, "fly", "kite");
  f.store->delete_rule(f.author, RuleId{2});
  CHECK(proposal(answer(session, false)).conclusion_text == "plane");
  CHECK(proposal(answer(session, false)).conclusion_text == "rocket");
  CHECK(answer(session, false) == Outcome{NoResult{}});
}

TEST_CASE("rank_candidates orders by authority, score, id") {
  FlyFixture f;
  auto snap = f.store->snapshot();
  std::set<RuleId> all{RuleId{1}, RuleId{2}, RuleId{3}};
  CHECK(rank_candidates(*snap, all) == std::vector<RuleId>{RuleId{1}, RuleId{2}, RuleId{3}});
  CHECK_THROWS_AS(rank_candidates(*snap, {RuleId{9}}), StoreError);

  UserId voter = f.user("voter");
  f.store->cast_vote(voter, RuleId{2}, 1);
  CHECK(rank_candidates(*f.store->snapshot(), all) == std::vector<RuleId>{RuleId{2}, RuleId{1}, RuleId{3}});
}

TEST_CASE("authority of a rule's author outranks its own score") {
  oracle::StoreFixture f;
  UserId a = f.user("a");
  UserId b = f.user("b");
  f.rules(a, {{"fly", "bird"}, {"fly", "plane"}});
  f.rules(b, {{"fly", "rocket"}, {"swim", "fish"}});
  std::vector<UserId> voters;
  for (int i = 0; i < 5; ++i) voters.push_back(f.user("v" + std::to_string(i)));
  for (UserId v : voters) f.store->cast_vote(v, RuleId{4}, 1);  // b's other rule
  auto snap = f.store->snapshot();
  CHECK(snap->user_authority(b) == 5);
  CHECK(rank_candidates(*snap, {RuleId{1}, RuleId{2}, RuleId{3}}) ==
        std::vector<RuleId>{RuleId{3}, RuleId{1}, RuleId{2}});
}

TEST_CASE("no rule is proposed twice and sessions terminate") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    oracle::StoreFixture f;
    UserId u = f.user("u");
    auto vocab = oracle::vocabulary(5);
    std::size_t n = 1 + rng() % 15;
    for (std::size_t i = 0; i < n; ++i) {
      f.store->add_rule(u, vocab[rng() % 5] + (rng() % 2 ? " OR " + vocab[rng() % 5] : ""), vocab[rng() % 5]);
    }
    int depth = 1 + static_cast<int>(rng() % 4);
    bool chain = rng() % 2 == 0;
    auto [session, outcome] = start_session(f.store->snapshot(), vocab[rng() % 5], {chain, depth});
    std::set<RuleId> seen;
    std::size_t answers = 0;
    while (std::holds_alternative<Propose>(outcome)) {
      CHECK(seen.insert(std::get<Propose>(outcome).rule).second);
      outcome = answer(session, rng() % 2 == 0);
      ++answers;
      REQUIRE(answers <= n * static_cast<std::size_t>(depth));
    }
  }
}

TEST_CASE("identical inputs give identical transcripts") {
  FlyFixture f;
  auto snap = f.store->snapshot();
  auto run = [&] {
    std::vector<Outcome> outcomes;
    auto [session, first] = start_session(snap, "fly");
    outcomes.push_back(first);
    outcomes.push_back(answer(session, false));
    outcomes.push_back(answer(session, true));
    return outcomes;
  };
  CHECK(run() == run());
}

TEST_CASE("session registry") {
  FlyFixture f;
  auto now = std::chrono::steady_clock::now();
  auto clock = [&now] { return now; };
  SessionRegistry registry(std::chrono::minutes(30), clock);

  auto started = registry.start(f.store->snapshot(), "fly", {});
  CHECK(started.outcome == Outcome{Propose{RuleId{1}, "bird"}});
  CHECK(started.session_id.size() >= 16);
  CHECK(registry.answer(started.session_id, false) == Outcome{Propose{RuleId{2}, "plane"}});
  CHECK(registry.answer(started.session_id, true) == Outcome{Result{"plane"}});
  try {
    registry.answer(started.session_id, true);
    FAIL("expected SessionFinished");
  } catch (const DialogError& e) {
    CHECK(e.code() == DialogErrc::SessionFinished);
  }
  try {
    registry.answer("missing", true);
    FAIL("expected UnknownSession");
  } catch (const DialogError& e) {
    CHECK(e.code() == DialogErrc::UnknownSession);
  }

  auto idle = registry.start(f.store->snapshot(), "fly", {});
  now += std::chrono::minutes(29);
  CHECK(registry.answer(idle.session_id, false) == Outcome{Propose{RuleId{2}, "plane"}});
  now += std::chrono::minutes(31);
  try {
    registry.answer(idle.session_id, false);
    FAIL("expected the idle session to expire");
  } catch (const DialogError& e) {
    CHECK(e.code() == DialogErrc::UnknownSession);
  }
  CHECK(registry.size() == 0);
}
