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

#include "rulehub/dialog_engine.hpp"

#include <algorithm>

#include "crypto.hpp"

namespace rulehub {

std::string prompt_for(const Propose& p) { return p.conclusion_text + ", isn't it?"; }

std::string_view to_string(DialogErrc code) {
  switch (code) {
    case DialogErrc::EmptyQuery: return "empty_query";
    case DialogErrc::BadDepth: return "bad_depth";
    case DialogErrc::SessionFinished: return "session_finished";
    case DialogErrc::UnknownSession: return "unknown_session";
  }
  return "unknown";
}

DialogError::DialogError(DialogErrc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Outcome DialogSession::propose_next() {
  if (!pending_.empty() && (!chain_ || accepted_.empty() || depth_remaining_ > 0)) {
    RuleId next = pending_.front();
    pending_.pop_front();
    awaiting_ = next;
    phase_ = Phase::Awaiting;
    return Propose{next, snapshot_->find_rule(next)->then_text};
  }
  awaiting_.reset();
  if (!accepted_.empty()) {
    phase_ = Phase::Finished;
    result_ = accepted_.back().conclusion_text;
    return Result{result_};
  }
  phase_ = Phase::Exhausted;
  return NoResult{};
}

std::pair<DialogSession, Outcome> start_session(std::shared_ptr<const Snapshot> snapshot,
                                                std::string_view query, DialogOptions options) {
  if (options.max_depth < 1) throw DialogError(DialogErrc::BadDepth, "max_depth must be at least 1");
  std::vector<Token> tokens = tokenize(query);
  if (tokens.empty()) throw DialogError(DialogErrc::EmptyQuery, "query has no concepts");

  DialogSession session;
  session.snapshot_ = std::move(snapshot);
  session.facts_ = FactSet(tokens.begin(), tokens.end());
  session.chain_ = options.chain;
  session.depth_remaining_ = options.max_depth;
  for (RuleId id : session.snapshot_->index().firing_rules(*session.snapshot_, session.facts_)) {
    session.pending_.push_back(id);
  }
  Outcome first = session.propose_next();
  return {std::move(session), std::move(first)};
}

Outcome answer(DialogSession& session, bool accept) {
  if (session.phase_ != DialogSession::Phase::Awaiting) {
    throw DialogError(DialogErrc::SessionFinished, "the dialog has already ended");
  }
  RuleId current = *session.awaiting_;
  session.awaiting_.reset();
  session.proposed_.insert(current);
  const Rule& rule = *session.snapshot_->find_rule(current);

  if (!accept) return session.propose_next();

  session.accepted_.push_back({current, rule.then_text});
  if (!session.chain_) {
    session.phase_ = DialogSession::Phase::Finished;
    session.result_ = rule.then_text;
    return Result{rule.then_text};
  }

  for (const Token& t : leaf_tokens(rule.then_expr)) session.facts_.insert(t);
  --session.depth_remaining_;
  if (session.depth_remaining_ > 0) {
    const Snapshot& snap = *session.snapshot_;
    auto concluded = [&](const Rule& candidate) {
      return std::any_of(session.accepted_.begin(), session.accepted_.end(), [&](const Accepted& a) {
        return snap.find_rule(a.rule)->then_expr == candidate.then_expr;
      });
    };
    for (RuleId id : snap.index().firing_rules(snap, session.facts_)) {
      if (session.proposed_.count(id) != 0) continue;
      if (std::find(session.pending_.begin(), session.pending_.end(), id) != session.pending_.end()) {
        continue;
      }
      if (concluded(*snap.find_rule(id))) continue;
      session.pending_.push_back(id);
    }
  }
  return session.propose_next();
}

std::vector<RuleId> rank_candidates(const Snapshot& snapshot, const std::set<RuleId>& rule_ids) {
  std::vector<RuleId> ids(rule_ids.begin(), rule_ids.end());
  for (RuleId id : ids) {
    if (snapshot.find_rule(id) == nullptr) {
      throw StoreError(StoreErrc::NotFound, "no such rule: " + std::to_string(raw(id)));
    }
  }
  sort_by_rank(ids, snapshot);
  return ids;
}

// --- SessionRegistry ----------------------------------------------------------

SessionRegistry::SessionRegistry(std::chrono::seconds idle_ttl, Clock clock)
    : idle_ttl_(idle_ttl), clock_(std::move(clock)) {}

void SessionRegistry::purge_locked(std::chrono::steady_clock::time_point now) {
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle = false;
    {
      std::unique_lock entry(it->second->mutex, std::try_to_lock);
      // A session being answered right now is not idle.
      idle = entry.owns_lock() && now - it->second->last_used > idle_ttl_;
    }
    it = idle ? sessions_.erase(it) : std::next(it);
  }
}

SessionRegistry::Started SessionRegistry::start(std::shared_ptr<const Snapshot> snapshot,
                                                std::string_view query, DialogOptions options) {
  auto [session, outcome] = start_session(std::move(snapshot), query, options);
  auto entry = std::make_shared<Entry>();
  entry->session = std::move(session);
  auto now = clock_();
  entry->last_used = now;

  std::lock_guard lock(mutex_);
  purge_locked(now);
  std::string id;
  do {
    id = crypto::base64url_encode(crypto::random_bytes(16));
  } while (sessions_.count(id) != 0);
  sessions_.emplace(id, std::move(entry));
  return {id, std::move(outcome)};
}

std::shared_ptr<SessionRegistry::Entry> SessionRegistry::lookup(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  purge_locked(clock_());
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw DialogError(DialogErrc::UnknownSession, "no such dialog session");
  return it->second;
}

Outcome SessionRegistry::answer(const std::string& session_id, bool accept) {
  std::shared_ptr<Entry> entry = lookup(session_id);
  std::lock_guard lock(entry->mutex);
  entry->last_used = clock_();
  return rulehub::answer(entry->session, accept);
}

std::optional<DialogSession> SessionRegistry::find(const std::string& session_id) {
  try {
    std::shared_ptr<Entry> entry = lookup(session_id);
    std::lock_guard lock(entry->mutex);
    return entry->session;
  } catch (const DialogError&) {
    return std::nullopt;
  }
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace rulehub
