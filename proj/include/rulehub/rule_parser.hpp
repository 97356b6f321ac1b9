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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rulehub/rule_model.hpp"

namespace rulehub {

enum class ParseErrorKind { Empty, UnbalancedParen, DanglingConnector, EmptyStatement, TooDeep };

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position);

  ParseErrorKind kind() const { return kind_; }
  /// Byte offset into the parsed text; may equal its length.
  std::size_t position() const { return position_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
};

inline constexpr std::size_t kDefaultNestingLimit = 32;

/// Parses the text of one IF or THEN part.
///
///   part    := or_expr
///   or_expr := xor_expr (OR xor_expr)*
///   xor_expr:= and_expr (XOR and_expr)*
///   and_expr:= atom (AND atom)*
///   atom    := '(' or_expr ')' | statement
///
/// Connectors are standalone case-insensitive words; all three bind to the
/// left. `nesting_limit` caps parenthesis depth.
PartExpr parse_part(std::string_view text, std::size_t nesting_limit = kDefaultNestingLimit);

/// Leaves in left-to-right order, statements with equal tokens kept once.
std::vector<Statement> flatten_statements(const PartExpr& expr);

/// Canonical text with uppercase connectors and only the parentheses that
/// precedence and left associativity require.
std::string format_part(const PartExpr& expr);

/// Which half of a rule a parse error belongs to.
enum class RulePart { If, Then };

std::string_view to_string(RulePart part);

class RuleParseError : public ParseError {
 public:
  RuleParseError(RulePart part, const ParseError& cause);
  RulePart part() const { return part_; }

 private:
  RulePart part_;
};

/// Parses both parts; errors are tagged with the failing part.
Rule make_rule(RuleId id, UserId author, std::string if_text, std::string then_text,
               std::uint64_t seq, std::size_t nesting_limit = kDefaultNestingLimit);

}  // namespace rulehub
