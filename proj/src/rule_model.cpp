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

#include "rulehub/rule_model.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace rulehub {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         c >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::vector<Word> scan_words(std::string_view text) {
  std::vector<Word> words;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size()) {
      auto c = static_cast<unsigned char>(text[i]);
      if (is_word_byte(c)) {
        ++i;
      } else if (c == '.' && i > start && is_digit(text[i - 1]) && i + 1 < text.size() &&
                 is_digit(text[i + 1])) {
        ++i;
      } else {
        break;
      }
    }
    words.push_back({text.substr(start, i - start), start});
  }
  return words;
}

bool is_connector_word(std::string_view word) {
  if (word.size() < 2 || word.size() > 3) return false;
  std::string lower(word);
  std::transform(lower.begin(), lower.end(), lower.begin(), ascii_lower);
  return lower == "and" || lower == "or" || lower == "xor";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  for (const Word& w : scan_words(text)) {
    if (is_connector_word(w.text)) continue;
    Token t(w.text);
    std::transform(t.begin(), t.end(), t.begin(), ascii_lower);
    tokens.push_back(std::move(t));
  }
  return tokens;
}

Statement::Statement(std::string display_text)
    : display_text_(std::move(display_text)), tokens_(tokenize(display_text_)) {
  if (tokens_.empty()) throw std::invalid_argument("statement has no tokens");
}

std::string Statement::canonical_text() const {
  std::string out;
  for (const Token& t : tokens_) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string_view connector_keyword(Connector op) {
  switch (op) {
    case Connector::And: return "AND";
    case Connector::Xor: return "XOR";
    case Connector::Or: return "OR";
  }
  return "?";
}

PartExpr PartExpr::atom(Statement statement) { return PartExpr(std::move(statement)); }

PartExpr PartExpr::combine(Connector op, PartExpr lhs, PartExpr rhs) {
  return PartExpr(std::make_shared<const Binary>(Binary{op, std::move(lhs), std::move(rhs)}));
}

const Statement& PartExpr::statement() const {
  if (!is_atom()) throw std::logic_error("PartExpr::statement on a connector node");
  return std::get<Statement>(node_);
}

Connector PartExpr::connector() const {
  if (is_atom()) throw std::logic_error("PartExpr::connector on an atom");
  return std::get<1>(node_)->op;
}

const PartExpr& PartExpr::lhs() const {
  if (is_atom()) throw std::logic_error("PartExpr::lhs on an atom");
  return std::get<1>(node_)->lhs;
}

const PartExpr& PartExpr::rhs() const {
  if (is_atom()) throw std::logic_error("PartExpr::rhs on an atom");
  return std::get<1>(node_)->rhs;
}

std::size_t PartExpr::depth() const {
  if (is_atom()) return 1;
  return 1 + std::max(lhs().depth(), rhs().depth());
}

bool operator==(const PartExpr& a, const PartExpr& b) {
  if (a.is_atom() != b.is_atom()) return false;
  if (a.is_atom()) return a.statement() == b.statement();
  const auto& ab = std::get<1>(a.node_);
  const auto& bb = std::get<1>(b.node_);
  if (ab == bb) return true;
  return ab->op == bb->op && ab->lhs == bb->lhs && ab->rhs == bb->rhs;
}

bool evaluate(const PartExpr& expr, const FactSet& facts) {
  if (expr.is_atom()) {
    const auto& tokens = expr.statement().tokens();
    return std::all_of(tokens.begin(), tokens.end(),
                       [&](const Token& t) { return facts.count(t) > 0; });
  }
  switch (expr.connector()) {
    case Connector::And: return evaluate(expr.lhs(), facts) && evaluate(expr.rhs(), facts);
    case Connector::Or: return evaluate(expr.lhs(), facts) || evaluate(expr.rhs(), facts);
    case Connector::Xor: return evaluate(expr.lhs(), facts) != evaluate(expr.rhs(), facts);
  }
  return false;
}

namespace {

void collect_tokens(const PartExpr& expr, std::vector<Token>& out,
                    std::unordered_set<std::string_view>& seen) {
  if (expr.is_atom()) {
    for (const Token& t : expr.statement().tokens()) {
      if (seen.insert(t).second) out.push_back(t);
    }
    return;
  }
  collect_tokens(expr.lhs(), out, seen);
  collect_tokens(expr.rhs(), out, seen);
}

}  // namespace

std::vector<Token> leaf_tokens(const PartExpr& expr) {
  std::vector<Token> out;
  std::unordered_set<std::string_view> seen;
  collect_tokens(expr, out, seen);
  return out;
}

}  // namespace rulehub
