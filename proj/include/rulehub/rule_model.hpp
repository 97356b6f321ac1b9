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

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rulehub {

/// A normalized word: lowercased, punctuation-free, never a connector keyword.
using Token = std::string;
using FactSet = std::set<Token>;

enum class RuleId : std::uint64_t {};
enum class UserId : std::uint64_t {};

constexpr std::uint64_t raw(RuleId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(UserId id) { return static_cast<std::uint64_t>(id); }

/// A word as it appears in surface text, with its byte offset.
struct Word {
  std::string_view text;
  std::size_t offset;
};

/// Splits text into words. A word is a maximal run of ASCII alphanumerics or
/// non-ASCII bytes; a '.' joins two digits ("3.5") and is a separator
/// everywhere else.
std::vector<Word> scan_words(std::string_view text);

/// True for the case-insensitive standalone keywords and / or / xor.
bool is_connector_word(std::string_view word);

/// Lowercased words of `text` in order, connector keywords dropped.
std::vector<Token> tokenize(std::string_view text);

/// An atomic portion of a rule part. Equality and ordering look at the tokens
/// only; the display text is kept for presentation.
class Statement {
 public:
  /// Throws std::invalid_argument when `display_text` has no tokens.
  explicit Statement(std::string display_text);

  const std::vector<Token>& tokens() const { return tokens_; }
  const std::string& display_text() const { return display_text_; }

  /// Tokens joined by single spaces.
  std::string canonical_text() const;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.tokens_ == b.tokens_;
  }
  friend std::strong_ordering operator<=>(const Statement& a, const Statement& b) {
    return a.tokens_ <=> b.tokens_;
  }

 private:
  std::string display_text_;
  std::vector<Token> tokens_;
};

enum class Connector { And, Xor, Or };

/// Uppercase keyword used when formatting.
std::string_view connector_keyword(Connector op);

/// Connector tree over statements. Immutable; copies share structure.
class PartExpr {
 public:
  static PartExpr atom(Statement statement);
  static PartExpr atom(std::string_view text) { return atom(Statement(std::string(text))); }
  static PartExpr combine(Connector op, PartExpr lhs, PartExpr rhs);

  bool is_atom() const { return std::holds_alternative<Statement>(node_); }
  const Statement& statement() const;
  Connector connector() const;
  const PartExpr& lhs() const;
  const PartExpr& rhs() const;

  /// Number of nodes on the longest root-to-leaf path; an atom has depth 1.
  std::size_t depth() const;

  friend bool operator==(const PartExpr& a, const PartExpr& b);

 private:
  struct Binary;
  explicit PartExpr(Statement s) : node_(std::move(s)) {}
  explicit PartExpr(std::shared_ptr<const Binary> b) : node_(std::move(b)) {}

  std::variant<Statement, std::shared_ptr<const Binary>> node_;
};

struct PartExpr::Binary {
  Connector op;
  PartExpr lhs;
  PartExpr rhs;
};

inline PartExpr all_of(PartExpr a, PartExpr b) {
  return PartExpr::combine(Connector::And, std::move(a), std::move(b));
}
inline PartExpr any_of(PartExpr a, PartExpr b) {
  return PartExpr::combine(Connector::Or, std::move(a), std::move(b));
}
inline PartExpr one_of(PartExpr a, PartExpr b) {
  return PartExpr::combine(Connector::Xor, std::move(a), std::move(b));
}

/// Atoms hold when all of their tokens are facts; Xor is binary parity.
bool evaluate(const PartExpr& expr, const FactSet& facts);

/// Every token of every leaf, in first-occurrence order.
std::vector<Token> leaf_tokens(const PartExpr& expr);

struct Rule {
  RuleId id{};
  UserId author{};
  std::string if_text;
  std::string then_text;
  PartExpr if_expr;
  PartExpr then_expr;
  std::uint64_t seq = 0;
};

struct Credential {
  std::string salt;  // raw bytes
  std::string hash;  // raw bytes
  std::uint32_t iterations = 0;

  friend bool operator==(const Credential&, const Credential&) = default;
};

struct UserAccount {
  UserId id{};
  std::string name;
  std::string email;
  Credential credential;
  bool admin = false;
};

struct Vote {
  UserId voter{};
  RuleId rule{};
  int value = 0;
};

}  // namespace rulehub
