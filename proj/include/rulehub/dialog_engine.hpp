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

#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rulehub/knowledge_store.hpp"
#include "rulehub/rule_model.hpp"

namespace rulehub {

struct Propose {
  RuleId rule{};
  std::string conclusion_text;  // the rule's THEN text, verbatim
  friend bool operator==(const Propose&, const Propose&) = default;
};
struct Result {
  std::string text;
  friend bool operator==(const Result&, const Result&) = default;
};
struct NoResult {
  friend bool operator==(const NoResult&, const NoResult&) = default;
};

using Outcome = std::variant<Propose, Result, NoResult>;

/// "<conclusion>, isn't it?"
std::string prompt_for(const Propose& p);

enum class DialogErrc { EmptyQuery, BadDepth, SessionFinished, UnknownSession };

std::string_view to_string(DialogErrc code);

class DialogError : public std::runtime_error {
 public:
  DialogError(DialogErrc code, const std::string& message);
  DialogErrc code() const { return code_; }

 private:
  DialogErrc code_;
};

inline constexpr int kDefaultChainDepth = 5;

struct DialogOptions {
  /// Feed accepted conclusions back as facts and keep proposing.
  bool chain = false;
  int max_depth = kDefaultChainDepth;
};

struct Accepted {
  RuleId rule{};
  std::string conclusion_text;
  friend bool operator==(const Accepted&, const Accepted&) = default;
};

/// One yes/no elimination dialog over the snapshot taken when it started.
class DialogSession {
 public:
  enum class Phase { Awaiting, Finished, Exhausted };

  const FactSet& facts() const { return facts_; }
  const std::deque<RuleId>& pending() const { return pending_; }
  const std::set<RuleId>& proposed() const { return proposed_; }
  const std::vector<Accepted>& accepted() const { return accepted_; }
  bool chain() const { return chain_; }
  int depth_remaining() const { return depth_remaining_; }
  Phase phase() const { return phase_; }
  /// Rule under consideration while Awaiting.
  std::optional<RuleId> awaiting() const { return awaiting_; }
  const std::string& result() const { return result_; }

 private:
  friend std::pair<DialogSession, Outcome> start_session(std::shared_ptr<const Snapshot>,
                                                         std::string_view, DialogOptions);
  friend Outcome answer(DialogSession&, bool);

  Outcome propose_next();

  std::shared_ptr<const Snapshot> snapshot_;
  FactSet facts_;
  std::deque<RuleId> pending_;
  std::set<RuleId> proposed_;
  std::vector<Accepted> accepted_;
  bool chain_ = false;
  int depth_remaining_ = 0;
  Phase phase_ = Phase::Exhausted;
  std::optional<RuleId> awaiting_;
  std::string result_;
};

/// Facts are the tokens of `query`; candidates are the rules firing on them.
/// Throws DialogError(EmptyQuery) or DialogError(BadDepth).
std::pair<DialogSession, Outcome> start_session(std::shared_ptr<const Snapshot> snapshot,
                                                std::string_view query, DialogOptions options = {});

/// Yes/no on the pending proposal. Throws DialogError(SessionFinished) once
/// the session has ended.
Outcome answer(DialogSession& session, bool accept);

/// Orders live rules by author authority, rule score, then id. Throws
/// StoreError(NotFound) for ids that are not live.
std::vector<RuleId> rank_candidates(const Snapshot& snapshot, const std::set<RuleId>& rule_ids);

/// Thread-safe table of live dialogs keyed by random id. Sessions idle for
/// longer than the TTL are dropped and then reported as unknown.
class SessionRegistry {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionRegistry(std::chrono::seconds idle_ttl = std::chrono::minutes(30),
                           Clock clock = [] { return std::chrono::steady_clock::now(); });

  struct Started {
    std::string session_id;
    Outcome outcome;
  };

  Started start(std::shared_ptr<const Snapshot> snapshot, std::string_view query,
                DialogOptions options);

  /// Answers are serialized per session.
  Outcome answer(const std::string& session_id, bool accept);

  /// Copy of the session state, for inspection.
  std::optional<DialogSession> find(const std::string& session_id);

  std::size_t size() const;

 private:
  struct Entry {
    std::mutex mutex;
    DialogSession session;
    std::chrono::steady_clock::time_point last_used;
  };

  std::shared_ptr<Entry> lookup(const std::string& session_id);
  void purge_locked(std::chrono::steady_clock::time_point now);

  std::chrono::seconds idle_ttl_;
  Clock clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
};

}  // namespace rulehub
