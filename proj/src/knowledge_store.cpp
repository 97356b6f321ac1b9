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

#include "rulehub/knowledge_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "crypto.hpp"

namespace rulehub {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(StoreErrc code) {
  switch (code) {
    case StoreErrc::DuplicateEmail: return "duplicate_email";
    case StoreErrc::WeakPassword: return "weak_password";
    case StoreErrc::InvalidEmail: return "invalid_email";
    case StoreErrc::InvalidName: return "invalid_name";
    case StoreErrc::BadCredentials: return "bad_credentials";
    case StoreErrc::UnknownUser: return "unknown_user";
    case StoreErrc::NotFound: return "not_found";
    case StoreErrc::Forbidden: return "forbidden";
    case StoreErrc::SelfVote: return "self_vote";
    case StoreErrc::BadValue: return "bad_value";
    case StoreErrc::Locked: return "locked";
    case StoreErrc::CorruptLog: return "corrupt_log";
    case StoreErrc::UnsupportedEvent: return "unsupported_event";
    case StoreErrc::Io: return "io_error";
  }
  return "unknown";
}

StoreError::StoreError(StoreErrc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

std::string email_key(std::string_view email) {
  std::string key(email);
  std::transform(key.begin(), key.end(), key.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return key;
}

std::string format_rfc3339(std::chrono::system_clock::time_point t) {
  std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kHashBytes = 32;
constexpr std::size_t kTokenBytes = 32;

bool plausible_email(std::string_view email) {
  auto at = email.find('@');
  if (at == std::string_view::npos || email.find('@', at + 1) != std::string_view::npos) {
    return false;
  }
  if (at == 0 || at + 1 == email.size()) return false;
  return std::none_of(email.begin(), email.end(),
                      [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

[[noreturn]] void io_failure(const std::string& what) {
  throw StoreError(StoreErrc::Io, what + ": " + std::strerror(errno));
}

[[noreturn]] void corrupt(std::uint64_t seq, const std::string& what) {
  throw StoreError(StoreErrc::CorruptLog, "event log seq " + std::to_string(seq) + ": " + what);
}

void adjust_score(StoreState& s, const Rule& rule, std::int64_t delta) {
  s.scores[rule.id] += delta;
  s.authority[rule.author] += delta;
}

/// Applies one decoded event. Live mutations validate beforehand, so any
/// failure here means the log itself is inconsistent.
void apply_event(StoreState& s, std::uint64_t seq, const std::string& kind,
                 const nlohmann::json& ev, std::size_t nesting_limit) {
  if (kind == "user_registered") {
    UserAccount user;
    user.id = UserId{ev.at("user_id").get<std::uint64_t>()};
    user.name = ev.at("name").get<std::string>();
    user.email = ev.at("email").get<std::string>();
    user.credential.salt = crypto::base64_decode(ev.at("salt_b64").get<std::string>());
    user.credential.hash = crypto::base64_decode(ev.at("hash_b64").get<std::string>());
    user.credential.iterations = ev.at("iterations").get<std::uint32_t>();
    if (s.users.count(user.id) != 0) corrupt(seq, "duplicate user id");
    std::string key = email_key(user.email);
    if (s.users_by_email.count(key) != 0) corrupt(seq, "duplicate email");
    s.users_by_email.emplace(key, user.id);
    s.authority.emplace(user.id, 0);
    s.next_user = std::max(s.next_user, raw(user.id) + 1);
    s.users.emplace(user.id, std::move(user));
  } else if (kind == "rule_added") {
    RuleId id{ev.at("rule_id").get<std::uint64_t>()};
    UserId author{ev.at("author").get<std::uint64_t>()};
    if (raw(id) < s.next_rule) corrupt(seq, "rule id reused");
    if (s.users.count(author) == 0) corrupt(seq, "rule author unknown");
    auto rule = std::make_shared<const Rule>(make_rule(id, author, ev.at("if_text").get<std::string>(),
                                                       ev.at("then_text").get<std::string>(),
                                                       s.next_rule_seq, nesting_limit));
    s.index.insert(*rule);
    s.scores.emplace(id, 0);
    s.rules.emplace(id, std::move(rule));
    s.next_rule = raw(id) + 1;
    ++s.next_rule_seq;
  } else if (kind == "rule_deleted") {
    RuleId id{ev.at("rule_id").get<std::uint64_t>()};
    auto it = s.rules.find(id);
    if (it == s.rules.end()) corrupt(seq, "deleted rule unknown");
    const Rule& rule = *it->second;
    adjust_score(s, rule, -s.scores[id]);
    for (auto v = s.votes.begin(); v != s.votes.end();) {
      v = v->first.second == id ? s.votes.erase(v) : std::next(v);
    }
    s.index.remove(rule);
    s.scores.erase(id);
    s.rules.erase(it);
  } else if (kind == "vote_cast") {
    UserId voter{ev.at("voter").get<std::uint64_t>()};
    RuleId id{ev.at("rule_id").get<std::uint64_t>()};
    int value = ev.at("value").get<int>();
    auto it = s.rules.find(id);
    if (it == s.rules.end()) corrupt(seq, "vote on unknown rule");
    if (s.users.count(voter) == 0) corrupt(seq, "vote by unknown user");
    if (value != 1 && value != -1) corrupt(seq, "vote value out of range");
    int& slot = s.votes[{voter, id}];
    adjust_score(s, *it->second, value - slot);
    slot = value;
  } else if (kind == "admin_granted") {
    auto it = s.users.find(UserId{ev.at("user_id").get<std::uint64_t>()});
    if (it == s.users.end()) corrupt(seq, "admin grant for unknown user");
    it->second.admin = true;
  } else {
    throw StoreError(StoreErrc::UnsupportedEvent,
                     "event log seq " + std::to_string(seq) + ": unsupported event kind '" + kind +
                         "' (written by a newer version?)");
  }
}

}  // namespace

// --- Snapshot ---------------------------------------------------------------

const Rule* Snapshot::find_rule(RuleId id) const {
  auto it = state_.rules.find(id);
  return it == state_.rules.end() ? nullptr : it->second.get();
}

RankKey Snapshot::rank_key(RuleId id) const {
  const Rule* rule = find_rule(id);
  if (rule == nullptr) throw StoreError(StoreErrc::NotFound, "no such rule");
  return {state_.authority.at(rule->author), state_.scores.at(id)};
}

std::int64_t Snapshot::rule_score(RuleId id) const {
  auto it = state_.scores.find(id);
  if (it == state_.scores.end()) {
    throw StoreError(StoreErrc::NotFound, "no such rule: " + std::to_string(raw(id)));
  }
  return it->second;
}

std::int64_t Snapshot::user_authority(UserId id) const {
  auto it = state_.authority.find(id);
  if (it == state_.authority.end()) {
    throw StoreError(StoreErrc::UnknownUser, "no such user: " + std::to_string(raw(id)));
  }
  return it->second;
}

const UserAccount* Snapshot::find_user(UserId id) const {
  auto it = state_.users.find(id);
  return it == state_.users.end() ? nullptr : &it->second;
}

std::vector<std::shared_ptr<const Rule>> Snapshot::rules() const {
  std::vector<std::shared_ptr<const Rule>> out;
  out.reserve(state_.rules.size());
  for (const auto& [id, rule] : state_.rules) out.push_back(rule);
  return out;
}

std::string Snapshot::serialize() const {
  ordered_json doc;
  doc["next_user"] = state_.next_user;
  doc["next_rule"] = state_.next_rule;
  doc["next_rule_seq"] = state_.next_rule_seq;
  doc["next_event_seq"] = state_.next_event_seq;
  ordered_json users = ordered_json::array();
  for (const auto& [id, u] : state_.users) {
    users.push_back({{"user_id", raw(id)},
                     {"name", u.name},
                     {"email", u.email},
                     {"salt_b64", crypto::base64_encode(u.credential.salt)},
                     {"hash_b64", crypto::base64_encode(u.credential.hash)},
                     {"iterations", u.credential.iterations},
                     {"admin", u.admin},
                     {"authority", state_.authority.at(id)}});
  }
  doc["users"] = std::move(users);
  ordered_json rules = ordered_json::array();
  for (const auto& [id, r] : state_.rules) {
    rules.push_back({{"rule_id", raw(id)},
                     {"author", raw(r->author)},
                     {"seq", r->seq},
                     {"if_text", r->if_text},
                     {"then_text", r->then_text},
                     {"score", state_.scores.at(id)}});
  }
  doc["rules"] = std::move(rules);
  ordered_json votes = ordered_json::array();
  for (const auto& [key, value] : state_.votes) {
    votes.push_back({{"voter", raw(key.first)}, {"rule_id", raw(key.second)}, {"value", value}});
  }
  doc["votes"] = std::move(votes);
  doc["index"] = state_.index.serialize();
  return doc.dump(2) + "\n";
}

// --- Store ------------------------------------------------------------------

Store::Store(std::filesystem::path data_dir, StoreOptions options)
    : data_dir_(std::move(data_dir)), options_(options) {
  options_.hash_iterations = std::max(options_.hash_iterations, kMinHashIterations);
  std::error_code ec;
  std::filesystem::create_directories(data_dir_, ec);
  if (ec) throw StoreError(StoreErrc::Io, "cannot create " + data_dir_.string() + ": " + ec.message());

  std::string lock_path = (data_dir_ / kLockFile).string();
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) io_failure("open " + lock_path);
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw StoreError(StoreErrc::Locked, "data directory " + data_dir_.string() +
                                            " is in use by another process");
  }
  try {
    replay();
    std::string log_path = (data_dir_ / kLogFile).string();
    log_fd_ = ::open(log_path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0600);
    if (log_fd_ < 0) io_failure("open " + log_path);
  } catch (...) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw;
  }
}

Store::~Store() {
  if (log_fd_ >= 0) ::close(log_fd_);
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

void Store::replay() {
  std::filesystem::path log_path = data_dir_ / kLogFile;
  std::ifstream in(log_path, std::ios::binary);
  if (!in) return;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) {
      // A torn final write was never acknowledged; drop it.
      std::filesystem::resize_file(log_path, pos);
      break;
    }
    std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;

    std::uint64_t expected = state_.next_event_seq;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      corrupt(expected, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (record.at("seq").get<std::uint64_t>() != expected) corrupt(expected, "sequence gap");
      const auto& event = record.at("event");
      apply_event(state_, expected, event.at("kind").get<std::string>(), event,
                  options_.nesting_limit);
    } catch (const nlohmann::json::exception& e) {
      corrupt(expected, std::string("bad field: ") + e.what());
    } catch (const ParseError& e) {
      corrupt(expected, std::string("unparseable rule: ") + e.what());
    } catch (const IndexError& e) {
      corrupt(expected, e.what());
    }
    ++state_.next_event_seq;
  }
}

void Store::commit(const std::string& kind, ordered_json fields) {
  ordered_json event;
  event["kind"] = kind;
  for (auto& [k, v] : fields.items()) event[k] = std::move(v);
  ordered_json record;
  record["seq"] = state_.next_event_seq;
  record["at"] = format_rfc3339(std::chrono::system_clock::now());
  record["event"] = event;
  std::string line = record.dump() + "\n";

  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = ::write(log_fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure("append to event log");
    }
    written += static_cast<std::size_t>(n);
  }
  if (options_.sync && ::fdatasync(log_fd_) != 0) io_failure("fdatasync event log");

  apply_event(state_, state_.next_event_seq, kind, nlohmann::json::parse(event.dump()),
              options_.nesting_limit);
  ++state_.next_event_seq;

  std::lock_guard cache(snapshot_mutex_);
  snapshot_.reset();
}

UserId Store::register_user(const std::string& name, const std::string& email,
                            const std::string& password) {
  if (name.empty() || blank(name)) throw StoreError(StoreErrc::InvalidName, "name must not be empty");
  if (!plausible_email(email)) throw StoreError(StoreErrc::InvalidEmail, "email is not plausible");
  if (password.size() < kMinPasswordLength) {
    throw StoreError(StoreErrc::WeakPassword, "password must have at least 8 characters");
  }
  std::string key = email_key(email);
  {
    std::shared_lock read(state_mutex_);
    if (state_.users_by_email.count(key) != 0) {
      throw StoreError(StoreErrc::DuplicateEmail, "email already registered");
    }
  }
  // Hash outside the write lock; uniqueness is re-checked below.
  std::string salt = crypto::random_bytes(kSaltBytes);
  std::string hash = crypto::pbkdf2_sha256(password, salt, options_.hash_iterations, kHashBytes);

  std::unique_lock write(state_mutex_);
  if (state_.users_by_email.count(key) != 0) {
    throw StoreError(StoreErrc::DuplicateEmail, "email already registered");
  }
  UserId id{state_.next_user};
  commit("user_registered", {{"user_id", raw(id)},
                             {"name", name},
                             {"email", email},
                             {"salt_b64", crypto::base64_encode(salt)},
                             {"hash_b64", crypto::base64_encode(hash)},
                             {"iterations", options_.hash_iterations}});
  return id;
}

SessionToken Store::authenticate(std::string_view email, std::string_view password) {
  std::optional<Credential> credential;
  UserId user{};
  {
    std::shared_lock read(state_mutex_);
    auto it = state_.users_by_email.find(email_key(email));
    if (it != state_.users_by_email.end()) {
      user = it->second;
      credential = state_.users.at(user).credential;
    }
  }
  // Unknown emails pay for a hash too, so timing does not reveal accounts.
  static const std::string dummy_salt(kSaltBytes, '\x5a');
  const std::string& salt = credential ? credential->salt : dummy_salt;
  std::uint32_t iterations = credential ? credential->iterations : options_.hash_iterations;
  std::string computed = crypto::pbkdf2_sha256(password, salt, iterations, kHashBytes);
  bool ok = credential && crypto::constant_time_equal(computed, credential->hash);
  if (!ok) throw StoreError(StoreErrc::BadCredentials, "invalid email or password");

  SessionToken session{crypto::base64url_encode(crypto::random_bytes(kTokenBytes)), user,
                       std::chrono::system_clock::now() + options_.token_ttl};
  std::lock_guard lock(tokens_mutex_);
  auto now = std::chrono::system_clock::now();
  for (auto it = tokens_.begin(); it != tokens_.end();) {
    it = it->second.expires_at <= now ? tokens_.erase(it) : std::next(it);
  }
  tokens_.emplace(session.token, TokenInfo{session.user, session.expires_at});
  return session;
}

std::optional<UserId> Store::resolve_token(std::string_view token) const {
  std::lock_guard lock(tokens_mutex_);
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  if (it->second.expires_at <= std::chrono::system_clock::now()) {
    tokens_.erase(it);
    return std::nullopt;
  }
  std::shared_lock read(state_mutex_);
  if (state_.users.count(it->second.user) == 0) return std::nullopt;
  return it->second.user;
}

RuleId Store::add_rule(UserId author, const std::string& if_text, const std::string& then_text) {
  // Parse first so errors carry the part tag and nothing is logged.
  make_rule(RuleId{0}, author, if_text, then_text, 0, options_.nesting_limit);
  std::unique_lock write(state_mutex_);
  if (state_.users.count(author) == 0) {
    throw StoreError(StoreErrc::UnknownUser, "no such user: " + std::to_string(raw(author)));
  }
  RuleId id{state_.next_rule};
  commit("rule_added",
         {{"rule_id", raw(id)}, {"author", raw(author)}, {"if_text", if_text}, {"then_text", then_text}});
  return id;
}

void Store::delete_rule(UserId caller, RuleId rule) {
  std::unique_lock write(state_mutex_);
  auto it = state_.rules.find(rule);
  if (it == state_.rules.end()) {
    throw StoreError(StoreErrc::NotFound, "no such rule: " + std::to_string(raw(rule)));
  }
  auto user = state_.users.find(caller);
  bool allowed = user != state_.users.end() && (it->second->author == caller || user->second.admin);
  if (!allowed) throw StoreError(StoreErrc::Forbidden, "only the author or an admin may delete a rule");
  commit("rule_deleted", {{"rule_id", raw(rule)}, {"caller", raw(caller)}});
}

void Store::cast_vote(UserId voter, RuleId rule, int value) {
  if (value != 1 && value != -1) throw StoreError(StoreErrc::BadValue, "vote value must be +1 or -1");
  std::unique_lock write(state_mutex_);
  auto it = state_.rules.find(rule);
  if (it == state_.rules.end()) {
    throw StoreError(StoreErrc::NotFound, "no such rule: " + std::to_string(raw(rule)));
  }
  if (state_.users.count(voter) == 0) {
    throw StoreError(StoreErrc::UnknownUser, "no such user: " + std::to_string(raw(voter)));
  }
  if (it->second->author == voter) throw StoreError(StoreErrc::SelfVote, "authors cannot vote on their own rules");
  commit("vote_cast", {{"voter", raw(voter)}, {"rule_id", raw(rule)}, {"value", value}});
}

void Store::grant_admin(UserId user) {
  std::unique_lock write(state_mutex_);
  auto it = state_.users.find(user);
  if (it == state_.users.end()) {
    throw StoreError(StoreErrc::UnknownUser, "no such user: " + std::to_string(raw(user)));
  }
  if (it->second.admin) return;
  commit("admin_granted", {{"user_id", raw(user)}});
}

std::int64_t Store::rule_score(RuleId rule) const {
  std::shared_lock read(state_mutex_);
  auto it = state_.scores.find(rule);
  if (it == state_.scores.end()) {
    throw StoreError(StoreErrc::NotFound, "no such rule: " + std::to_string(raw(rule)));
  }
  return it->second;
}

std::int64_t Store::user_authority(UserId user) const {
  std::shared_lock read(state_mutex_);
  auto it = state_.authority.find(user);
  if (it == state_.authority.end()) {
    throw StoreError(StoreErrc::UnknownUser, "no such user: " + std::to_string(raw(user)));
  }
  return it->second;
}

std::optional<UserId> Store::find_user_by_email(std::string_view email) const {
  std::shared_lock read(state_mutex_);
  auto it = state_.users_by_email.find(email_key(email));
  if (it == state_.users_by_email.end()) return std::nullopt;
  return it->second;
}

std::shared_ptr<const Snapshot> Store::snapshot() const {
  std::shared_lock read(state_mutex_);
  std::lock_guard cache(snapshot_mutex_);
  if (!snapshot_) snapshot_ = std::make_shared<const Snapshot>(state_);
  return snapshot_;
}

}  // namespace rulehub
