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

// Minimal Turtle well-formedness checker for the subset an ontology export
// can contain: @prefix directives and triples whose terms are IRIs, prefixed
// names, `a`, or plain string literals. ASCII-only names.

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace oracle {

class TurtleChecker {
 public:
  /// Empty optional on success, otherwise a description of the first error.
  static std::optional<std::string> check(std::string_view doc) {
    TurtleChecker c(doc);
    try {
      c.document();
    } catch (const std::string& e) {
      return e + " near offset " + std::to_string(c.pos_);
    }
    return std::nullopt;
  }

 private:
  explicit TurtleChecker(std::string_view d) : doc_(d) {}

  static bool pn_chars_base(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool pn_chars_u(char c) { return pn_chars_base(c) || c == '_'; }
  static bool pn_chars(char c) {
    return pn_chars_u(c) || c == '-' || std::isdigit(static_cast<unsigned char>(c)) != 0;
  }
  static bool hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

  void skip_ws() {
    while (pos_ < doc_.size()) {
      char c = doc_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < doc_.size() && doc_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= doc_.size();
  }

  char peek() {
    skip_ws();
    if (pos_ >= doc_.size()) throw std::string("unexpected end of document");
    return doc_[pos_];
  }

  void expect(char c) {
    if (peek() != c) throw std::string("expected '") + c + "'";
    ++pos_;
  }

  void iriref() {
    expect('<');
    while (pos_ < doc_.size() && doc_[pos_] != '>') {
      char c = doc_[pos_];
      if (static_cast<unsigned char>(c) <= 0x20 || std::string_view("<\"{}|^`\\").find(c) != std::string_view::npos) {
        throw std::string("illegal character in IRI");
      }
      ++pos_;
    }
    if (pos_ >= doc_.size()) throw std::string("unterminated IRI");
    ++pos_;
  }

  std::string pname_ns() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < doc_.size() && pn_chars_base(doc_[pos_])) {
      while (pos_ < doc_.size() && (pn_chars(doc_[pos_]) || doc_[pos_] == '.')) ++pos_;
      if (doc_[pos_ - 1] == '.') throw std::string("prefix ends with '.'");
    }
    if (pos_ >= doc_.size() || doc_[pos_] != ':') throw std::string("expected prefix name");
    ++pos_;
    return std::string(doc_.substr(start, pos_ - start));
  }

  void local_name() {
    std::size_t start = pos_;
    auto plx = [&]() {
      if (doc_[pos_] == '%') {
        if (pos_ + 2 >= doc_.size() || !hex(doc_[pos_ + 1]) || !hex(doc_[pos_ + 2])) {
          throw std::string("bad percent escape");
        }
        pos_ += 3;
        return true;
      }
      return false;
    };
    if (pos_ >= doc_.size()) return;
    char first = doc_[pos_];
    if (pn_chars_u(first) || first == ':' || std::isdigit(static_cast<unsigned char>(first))) {
      ++pos_;
    } else if (!plx()) {
      return;  // empty local name is allowed
    }
    while (pos_ < doc_.size()) {
      char c = doc_[pos_];
      if (pn_chars(c) || c == ':' || c == '.') {
        ++pos_;
      } else if (!plx()) {
        break;
      }
    }
    // A trailing '.' terminates the statement rather than the name.
    while (pos_ > start && doc_[pos_ - 1] == '.') --pos_;
  }

  void iri() {
    if (peek() == '<') {
      iriref();
      return;
    }
    std::string prefix = pname_ns();
    if (prefixes_.count(prefix) == 0) throw std::string("undeclared prefix '") + prefix + "'";
    local_name();
  }

  void literal() {
    expect('"');
    while (pos_ < doc_.size() && doc_[pos_] != '"') {
      if (doc_[pos_] == '\\') ++pos_;
      if (doc_[pos_] == '\n') throw std::string("newline in short string");
      ++pos_;
    }
    if (pos_ >= doc_.size()) throw std::string("unterminated string");
    ++pos_;
  }

  void verb() {
    skip_ws();
    if (doc_[pos_] == 'a' && pos_ + 1 < doc_.size() &&
        (doc_[pos_ + 1] == ' ' || doc_[pos_ + 1] == '\t' || doc_[pos_ + 1] == '\n')) {
      ++pos_;
      return;
    }
    iri();
  }

  void object() {
    if (peek() == '"') {
      literal();
    } else {
      iri();
    }
  }

  void object_list() {
    object();
    while (peek() == ',') {
      ++pos_;
      object();
    }
  }

  void triples() {
    iri();
    verb();
    object_list();
    while (peek() == ';') {
      ++pos_;
      char c = peek();
      if (c == ';' || c == '.') continue;
      verb();
      object_list();
    }
    expect('.');
  }

  void directive() {
    static constexpr std::string_view kw = "@prefix";
    if (doc_.substr(pos_, kw.size()) != kw) throw std::string("unknown directive");
    pos_ += kw.size();
    std::string prefix = pname_ns();
    iriref();
    expect('.');
    prefixes_.insert(prefix);
  }

  void document() {
    while (!at_end()) {
      if (doc_[pos_] == '@') {
        directive();
      } else {
        triples();
      }
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::set<std::string> prefixes_;
};

}  // namespace oracle
