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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rulehub/rule_model.hpp"
#include "rulehub/rule_parser.hpp"
#include "rulehub/search_index.hpp"

namespace rulehub {

enum class StoreErrc {
  DuplicateEmail,
  WeakPassword,
  InvalidEmail,
  InvalidName,
  BadCredentials,
  UnknownUser,
  NotFound,
  Forbidden,
  SelfVote,
  BadValue,
  Locked,
  CorruptLog,
  UnsupportedEvent,
  Io,
};

std::string_view to_string(StoreErrc code);

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrc code, const std::string& message);
  StoreErrc code() const { return code_; }

 private:
  StoreErrc code_;
};

struct StoreOptions {
  std::chrono::seconds token_ttl{std::chrono::hours(24)};
  /// PBKDF2 rounds for new credentials; values below 100000 are raised.
  std::uint32_t hash_iterations = 100000;
  std::size_t nesting_limit = kDefaultNestingLimit;
  /// fdatasync after each appended event.
  bool sync = true;
};

inline constexpr std::uint32_t kMinHashIterations = 100000;
inline constexpr std::size_t kMinPasswordLength = 8;

struct SessionToken {
  std::string token;
  UserId user{};
  std::chrono::system_clock::time_point expires_at;
};

/// Everything the store knows, as plain values.
struct StoreState {
  std::map<UserId, UserAccount> users;
  std::map<std::string, UserId> users_by_email;  // lowercased key
  std::map<RuleId, std::shared_ptr<const Rule>> rules;
  std::map<std::pair<UserId, RuleId>, int> votes;
  std::map<RuleId, std::int64_t> scores;
  std::map<UserId, std::int64_t> authority;
  Index index;
  std::uint64_t next_user = 1;
  std::uint64_t next_rule = 1;
  std::uint64_t next_rule_seq = 1;
  std::uint64_t next_event_seq = 1;
};

/// Immutable point-in-time view of the store.
class Snapshot final : public RuleSource {
 public:
  explicit Snapshot(StoreState state) : state_(std::move(state)) {}

  const Rule* find_rule(RuleId id) const override;
  RankKey rank_key(RuleId id) const override;

  /// Throws StoreError(NotFound) for unknown or deleted rules.
  std::int64_t rule_score(RuleId id) const;
  /// Throws StoreError(UnknownUser).
  std::int64_t user_authority(UserId id) const;

  const UserAccount* find_user(UserId id) const;
  const Index& index() const { return state_.index; }
  std::size_t rule_count() const { return state_.rules.size(); }

  /// Live rules in id order.
  std::vector<std::shared_ptr<const Rule>> rules() const;

  /// Deterministic JSON dump of users, rules, votes and counters.
  std::string serialize() const;

 private:
  StoreState state_;
};

/// Users, rules and votes backed by an append-only JSONL event log in
/// `data_dir`. Mutations are serialized and acknowledged only after the
/// event is flushed; the directory is locked for the lifetime of the store.
class Store {
 public:
  static constexpr const char* kLogFile = "events.jsonl";
  static constexpr const char* kLockFile = "LOCK";

  explicit Store(std::filesystem::path data_dir, StoreOptions options = {});
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  UserId register_user(const std::string& name, const std::string& email,
                       const std::string& password);
  SessionToken authenticate(std::string_view email, std::string_view password);
  /// The user behind a live token, if any.
  std::optional<UserId> resolve_token(std::string_view token) const;

  RuleId add_rule(UserId author, const std::string& if_text, const std::string& then_text);
  void delete_rule(UserId caller, RuleId rule);
  void cast_vote(UserId voter, RuleId rule, int value);
  void grant_admin(UserId user);

  std::int64_t rule_score(RuleId rule) const;
  std::int64_t user_authority(UserId user) const;
  std::optional<UserId> find_user_by_email(std::string_view email) const;

  /// Cached until the next mutation.
  std::shared_ptr<const Snapshot> snapshot() const;

  const std::filesystem::path& data_dir() const { return data_dir_; }
  const StoreOptions& options() const { return options_; }

 private:
  void replay();
  /// Appends one event line and applies it; caller holds the write lock.
  void commit(const std::string& kind, nlohmann::ordered_json fields);

  std::filesystem::path data_dir_;
  StoreOptions options_;
  int lock_fd_ = -1;
  int log_fd_ = -1;

  mutable std::shared_mutex state_mutex_;
  StoreState state_;

  mutable std::mutex snapshot_mutex_;
  mutable std::shared_ptr<const Snapshot> snapshot_;

  struct TokenInfo {
    UserId user;
    std::chrono::system_clock::time_point expires_at;
  };
  mutable std::mutex tokens_mutex_;
  mutable std::map<std::string, TokenInfo, std::less<>> tokens_;
};

/// Lowercased copy used as the email uniqueness key.
std::string email_key(std::string_view email);

/// RFC 3339 UTC timestamp with second precision.
std::string format_rfc3339(std::chrono::system_clock::time_point t);

}  // namespace rulehub
