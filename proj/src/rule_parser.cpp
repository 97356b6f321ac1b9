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

#include "rulehub/rule_parser.hpp"

#include <optional>
#include <set>

namespace rulehub {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::Empty: return "empty";
    case ParseErrorKind::UnbalancedParen: return "unbalanced_paren";
    case ParseErrorKind::DanglingConnector: return "dangling_connector";
    case ParseErrorKind::EmptyStatement: return "empty_statement";
    case ParseErrorKind::TooDeep: return "too_deep";
  }
  return "unknown";
}

std::string_view to_string(RulePart part) { return part == RulePart::If ? "if" : "then"; }

ParseError::ParseError(ParseErrorKind kind, std::size_t position)
    : std::runtime_error(std::string(to_string(kind)) + " at offset " + std::to_string(position)),
      kind_(kind),
      position_(position) {}

RuleParseError::RuleParseError(RulePart part, const ParseError& cause)
    : ParseError(cause), part_(part) {}

namespace {

enum class LexKind { Open, Close, Conn, Text };

struct Lexeme {
  LexKind kind;
  std::size_t begin;
  std::size_t end;
  Connector op = Connector::And;
};

Connector connector_of(std::string_view word) {
  char c = word[0];
  if (c == 'a' || c == 'A') return Connector::And;
  if (c == 'x' || c == 'X') return Connector::Xor;
  return Connector::Or;
}

std::vector<Lexeme> lex(std::string_view text) {
  std::vector<Word> words = scan_words(text);
  std::vector<Lexeme> out;
  std::size_t wi = 0;
  auto flush_word = [&](const Word& w) {
    std::size_t begin = w.offset;
    std::size_t end = w.offset + w.text.size();
    if (is_connector_word(w.text)) {
      out.push_back({LexKind::Conn, begin, end, connector_of(w.text)});
    } else if (!out.empty() && out.back().kind == LexKind::Text) {
      out.back().end = end;
    } else {
      out.push_back({LexKind::Text, begin, end});
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '(' && text[i] != ')') continue;
    while (wi < words.size() && words[wi].offset < i) flush_word(words[wi++]);
    out.push_back({text[i] == '(' ? LexKind::Open : LexKind::Close, i, i + 1});
  }
  while (wi < words.size()) flush_word(words[wi++]);
  return out;
}

void check_parens(const std::vector<Lexeme>& lexemes, std::size_t nesting_limit) {
  std::vector<std::size_t> open;
  for (const Lexeme& l : lexemes) {
    if (l.kind == LexKind::Open) {
      open.push_back(l.begin);
      if (open.size() > nesting_limit) throw ParseError(ParseErrorKind::TooDeep, l.begin);
    } else if (l.kind == LexKind::Close) {
      if (open.empty()) throw ParseError(ParseErrorKind::UnbalancedParen, l.begin);
      open.pop_back();
    }
  }
  if (!open.empty()) throw ParseError(ParseErrorKind::UnbalancedParen, open.back());
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<Lexeme>& lexemes)
      : text_(text), lexemes_(lexemes) {}

  PartExpr parse() {
    PartExpr expr = parse_level(Connector::Or);
    if (pos_ < lexemes_.size()) {
      // Balanced parens guarantee this is an operand that lacks a connector.
      throw ParseError(ParseErrorKind::DanglingConnector, lexemes_[pos_].begin);
    }
    return expr;
  }

 private:
  static std::optional<Connector> tighter(Connector op) {
    switch (op) {
      case Connector::Or: return Connector::Xor;
      case Connector::Xor: return Connector::And;
      case Connector::And: return std::nullopt;
    }
    return std::nullopt;
  }

  PartExpr parse_level(Connector op) {
    auto next = tighter(op);
    auto operand = [&] { return next ? parse_level(*next) : parse_atom(); };
    PartExpr lhs = operand();
    while (pos_ < lexemes_.size() && lexemes_[pos_].kind == LexKind::Conn &&
           lexemes_[pos_].op == op) {
      last_connector_ = lexemes_[pos_].begin;
      ++pos_;
      lhs = PartExpr::combine(op, std::move(lhs), operand());
    }
    return lhs;
  }

  PartExpr parse_atom() {
    if (pos_ >= lexemes_.size()) {
      throw ParseError(ParseErrorKind::DanglingConnector, last_connector_.value_or(text_.size()));
    }
    const Lexeme& l = lexemes_[pos_];
    switch (l.kind) {
      case LexKind::Text:
        ++pos_;
        return PartExpr::atom(Statement(std::string(text_.substr(l.begin, l.end - l.begin))));
      case LexKind::Conn:
        throw ParseError(ParseErrorKind::DanglingConnector, l.begin);
      case LexKind::Close:
        if (pos_ > 0 && lexemes_[pos_ - 1].kind == LexKind::Open) {
          throw ParseError(ParseErrorKind::EmptyStatement, lexemes_[pos_ - 1].begin);
        }
        throw ParseError(ParseErrorKind::DanglingConnector,
                         last_connector_.value_or(l.begin));
      case LexKind::Open: {
        ++pos_;
        PartExpr inner = parse_level(Connector::Or);
        // check_parens already proved a matching close exists.
        if (pos_ >= lexemes_.size() || lexemes_[pos_].kind != LexKind::Close) {
          throw ParseError(ParseErrorKind::DanglingConnector,
                           pos_ < lexemes_.size() ? lexemes_[pos_].begin : text_.size());
        }
        ++pos_;
        return inner;
      }
    }
    throw ParseError(ParseErrorKind::Empty, 0);
  }

  std::string_view text_;
  const std::vector<Lexeme>& lexemes_;
  std::size_t pos_ = 0;
  std::optional<std::size_t> last_connector_;
};

int precedence(Connector op) {
  switch (op) {
    case Connector::Or: return 1;
    case Connector::Xor: return 2;
    case Connector::And: return 3;
  }
  return 0;
}

void format_into(const PartExpr& expr, std::string& out);

void format_child(const PartExpr& child, Connector parent, bool right, std::string& out) {
  bool parens = !child.is_atom() &&
                (precedence(child.connector()) < precedence(parent) ||
                 (right && precedence(child.connector()) == precedence(parent)));
  if (parens) out += '(';
  format_into(child, out);
  if (parens) out += ')';
}

void format_into(const PartExpr& expr, std::string& out) {
  if (expr.is_atom()) {
    out += expr.statement().canonical_text();
    return;
  }
  format_child(expr.lhs(), expr.connector(), false, out);
  out += ' ';
  out += connector_keyword(expr.connector());
  out += ' ';
  format_child(expr.rhs(), expr.connector(), true, out);
}

void collect_statements(const PartExpr& expr, std::vector<Statement>& out,
                        std::set<Statement>& seen) {
  if (expr.is_atom()) {
    if (seen.insert(expr.statement()).second) out.push_back(expr.statement());
    return;
  }
  collect_statements(expr.lhs(), out, seen);
  collect_statements(expr.rhs(), out, seen);
}

}  // namespace

PartExpr parse_part(std::string_view text, std::size_t nesting_limit) {
  std::vector<Lexeme> lexemes = lex(text);
  if (lexemes.empty()) throw ParseError(ParseErrorKind::Empty, 0);
  check_parens(lexemes, nesting_limit);
  return Parser(text, lexemes).parse();
}

std::vector<Statement> flatten_statements(const PartExpr& expr) {
  std::vector<Statement> out;
  std::set<Statement> seen;
  collect_statements(expr, out, seen);
  return out;
}

std::string format_part(const PartExpr& expr) {
  std::string out;
  format_into(expr, out);
  return out;
}

Rule make_rule(RuleId id, UserId author, std::string if_text, std::string then_text,
               std::uint64_t seq, std::size_t nesting_limit) {
  auto parse_tagged = [&](RulePart part, std::string_view text) {
    try {
      return parse_part(text, nesting_limit);
    } catch (const ParseError& e) {
      throw RuleParseError(part, e);
    }
  };
  PartExpr if_expr = parse_tagged(RulePart::If, if_text);
  PartExpr then_expr = parse_tagged(RulePart::Then, then_text);
  return Rule{id,
              author,
              std::move(if_text),
              std::move(then_text),
              std::move(if_expr),
              std::move(then_expr),
              seq};
}

}  // namespace rulehub
