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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rulehub/rule_model.hpp"

namespace rulehub {

enum class PosTag { Noun, Verb, Adjective, NumberLiteral, Other };

std::string_view to_string(PosTag tag);

class LexiconError : public std::runtime_error {
 public:
  LexiconError(std::string source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Word → part-of-speech overrides, consulted before suffix heuristics.
class Lexicon {
 public:
  Lexicon() = default;

  /// Small English list of common verbs, adjectives and function words.
  static Lexicon builtin();
  static Lexicon load(const std::filesystem::path& path);
  /// TSV: `word<TAB>tag` per line, tag one of noun/verb/adjective/other,
  /// blank lines and '#' comments ignored.
  static Lexicon parse(std::string_view tsv, std::string source = "<memory>");

  void set(std::string_view word, PosTag tag);
  std::optional<PosTag> lookup(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  const std::string& source() const { return source_; }

 private:
  std::map<std::string, PosTag, std::less<>> entries_;
  std::string source_ = "<empty>";
};

/// Decimal literal such as "42" or "3.5".
bool is_number_literal(std::string_view token);

/// Numbers first, then the lexicon, then suffixes: -ing/-ed verb,
/// -ous/-ful/-ive/-al adjective, -ly other, else noun. A suffix only
/// counts when at least three characters precede it.
PosTag pos_tag(std::string_view token, const Lexicon& lexicon);

struct OwlAxiom {
  enum class Kind { Class, ObjectProperty, DatatypeProperty };

  Kind kind = Kind::Class;
  std::string name;    // local name under the ontology base IRI
  std::string domain;  // class local name; empty for classes
  std::string range;   // class local name, or "xsd:..." for datatype properties

  static OwlAxiom klass(std::string name) { return {Kind::Class, std::move(name), {}, {}}; }
  static OwlAxiom object_property(std::string name, std::string domain, std::string range) {
    return {Kind::ObjectProperty, std::move(name), std::move(domain), std::move(range)};
  }
  static OwlAxiom datatype_property(std::string name, std::string domain, std::string range) {
    return {Kind::DatatypeProperty, std::move(name), std::move(domain), std::move(range)};
  }

  friend auto operator<=>(const OwlAxiom&, const OwlAxiom&) = default;
  friend bool operator==(const OwlAxiom&, const OwlAxiom&) = default;
};

inline constexpr std::string_view kDefaultBaseIri = "http://example.org/ck#";

struct Ontology {
  std::string base_iri{kDefaultBaseIri};
  std::set<OwlAxiom> axioms;  // ordered by kind, then name
};

/// "rain" → "Rain". Non-ASCII bytes are percent-encoded.
std::string class_name(std::string_view token);
/// "eats" → "eats".
std::string property_name(std::string_view token);

/// Maps one statement to OWL declarations:
///  - a single-token statement is one class, whatever its tag;
///  - every noun is a class;
///  - a verb between nouns is an object property from the nearest noun on
///    its left to the nearest on its right;
///  - an adjective right before a noun is `has<Adjective>` on that noun,
///    ranged over xsd:string;
///  - a number next to a noun is `hasQuantity` on that noun, xsd:decimal.
/// Results are grouped by rule in that order, left to right within each.
std::vector<OwlAxiom> map_statement(const Statement& statement, const Lexicon& lexicon);

/// Maps the deduplicated statement set of all IF and THEN parts.
Ontology generate(const std::vector<const Rule*>& rules, const Lexicon& lexicon,
                  std::string base_iri = std::string(kDefaultBaseIri));
Ontology generate(const std::vector<std::shared_ptr<const Rule>>& rules, const Lexicon& lexicon,
                  std::string base_iri = std::string(kDefaultBaseIri));

/// Deterministic Turtle: prefix block, blank line, one axiom per line.
std::string to_turtle(const Ontology& ontology);

}  // namespace rulehub
