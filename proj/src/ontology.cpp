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

#include "rulehub/ontology.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rulehub/rule_parser.hpp"

namespace rulehub {

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "noun";
    case PosTag::Verb: return "verb";
    case PosTag::Adjective: return "adjective";
    case PosTag::NumberLiteral: return "number";
    case PosTag::Other: return "other";
  }
  return "other";
}

LexiconError::LexiconError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return out;
}

std::string_view trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

constexpr std::string_view kBuiltinLexicon = R"(# verbs
is	verb
are	verb
was	verb
were	verb
be	verb
has	verb
have	verb
had	verb
eat	verb
eats	verb
drink	verb
drinks	verb
contain	verb
contains	verb
cause	verb
causes	verb
need	verb
needs	verb
make	verb
makes	verb
use	verb
uses	verb
give	verb
gives	verb
produce	verb
produces	verb
require	verb
requires	verb
live	verb
lives	verb
like	verb
likes	verb
own	verb
owns	verb
build	verb
builds	verb
carry	verb
carries	verb
move	verb
moves	verb
grow	verb
grows	verb
see	verb
sees	verb
# adjectives
big	adjective
small	adjective
large	adjective
heavy	adjective
light	adjective
red	adjective
green	adjective
blue	adjective
black	adjective
white	adjective
hot	adjective
cold	adjective
warm	adjective
wet	adjective
dry	adjective
fast	adjective
slow	adjective
high	adjective
low	adjective
good	adjective
bad	adjective
new	adjective
old	adjective
young	adjective
strong	adjective
weak	adjective
long	adjective
short	adjective
tall	adjective
soft	adjective
hard	adjective
# nouns that the suffix rules would misread
animal	noun
metal	noun
signal	noun
ring	noun
thing	noun
king	noun
bed	noun
seed	noun
# function words
the	other
a	other
an	other
of	other
in	other
on	other
at	other
to	other
with	other
by	other
for	other
from	other
not	other
no	other
very	other
)";

bool ends_with_stem(std::string_view token, std::string_view suffix) {
  return token.size() >= suffix.size() + 3 && token.substr(token.size() - suffix.size()) == suffix;
}

std::string percent_encode_non_ascii(std::string_view token) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (char c : token) {
    auto b = static_cast<unsigned char>(c);
    if (b >= 0x80) {
      out += '%';
      out += hex[b >> 4];
      out += hex[b & 0xF];
    } else {
      out += c;
    }
  }
  return out;
}

void check_base_iri(std::string_view iri) {
  if (iri.empty()) throw std::invalid_argument("base IRI must not be empty");
  for (char c : iri) {
    auto b = static_cast<unsigned char>(c);
    if (b <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      throw std::invalid_argument("base IRI contains a character not allowed in an IRI");
    }
  }
}

}  // namespace

Lexicon Lexicon::builtin() { return parse(kBuiltinLexicon, "<builtin>"); }

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError(path.string(), 0, "cannot open lexicon file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

Lexicon Lexicon::parse(std::string_view tsv, std::string source) {
  Lexicon lex;
  lex.source_ = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= tsv.size()) {
    std::size_t eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = trim(tsv.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw LexiconError(lex.source_, line_no, "expected word<TAB>tag");
    std::string_view word = trim(line.substr(0, tab));
    std::string tag = lowered(trim(line.substr(tab + 1)));
    if (word.empty()) throw LexiconError(lex.source_, line_no, "empty word");
    PosTag parsed;
    if (tag == "noun") parsed = PosTag::Noun;
    else if (tag == "verb") parsed = PosTag::Verb;
    else if (tag == "adjective") parsed = PosTag::Adjective;
    else if (tag == "other") parsed = PosTag::Other;
    else throw LexiconError(lex.source_, line_no, "unknown tag '" + tag + "'");
    lex.set(word, parsed);
  }
  return lex;
}

void Lexicon::set(std::string_view word, PosTag tag) { entries_[lowered(word)] = tag; }

std::optional<PosTag> Lexicon::lookup(std::string_view word) const {
  auto it = entries_.find(lowered(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool is_number_literal(std::string_view token) {
  if (token.empty()) return false;
  bool seen_dot = false;
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (c >= '0' && c <= '9') continue;
    if (c == '.' && !seen_dot && i > 0 && i + 1 < token.size()) {
      seen_dot = true;
      continue;
    }
    return false;
  }
  return true;
}

PosTag pos_tag(std::string_view token, const Lexicon& lexicon) {
  if (is_number_literal(token)) return PosTag::NumberLiteral;
  if (auto tag = lexicon.lookup(token)) return *tag;
  for (std::string_view s : {"ing", "ed"}) {
    if (ends_with_stem(token, s)) return PosTag::Verb;
  }
  for (std::string_view s : {"ous", "ful", "ive", "al"}) {
    if (ends_with_stem(token, s)) return PosTag::Adjective;
  }
  if (ends_with_stem(token, "ly")) return PosTag::Other;
  return PosTag::Noun;
}

std::string class_name(std::string_view token) {
  std::string out = percent_encode_non_ascii(token);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

std::string property_name(std::string_view token) { return percent_encode_non_ascii(token); }

std::vector<OwlAxiom> map_statement(const Statement& statement, const Lexicon& lexicon) {
  const std::vector<Token>& tokens = statement.tokens();
  if (tokens.size() == 1) return {OwlAxiom::klass(class_name(tokens[0]))};

  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const Token& t : tokens) tags.push_back(pos_tag(t, lexicon));
  auto is_noun = [&](std::size_t i) { return tags[i] == PosTag::Noun; };

  std::vector<OwlAxiom> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_noun(i)) out.push_back(OwlAxiom::klass(class_name(tokens[i])));
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tags[i] != PosTag::Verb) continue;
    std::optional<std::size_t> before;
    std::optional<std::size_t> after;
    for (std::size_t j = i; j-- > 0;) {
      if (is_noun(j)) {
        before = j;
        break;
      }
    }
    for (std::size_t k = i + 1; k < tokens.size(); ++k) {
      if (is_noun(k)) {
        after = k;
        break;
      }
    }
    if (before && after) {
      out.push_back(OwlAxiom::object_property(property_name(tokens[i]), class_name(tokens[*before]),
                                              class_name(tokens[*after])));
    }
  }
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tags[i] == PosTag::Adjective && is_noun(i + 1)) {
      out.push_back(OwlAxiom::datatype_property("has" + class_name(tokens[i]),
                                                class_name(tokens[i + 1]), "xsd:string"));
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tags[i] != PosTag::NumberLiteral) continue;
    if (i > 0 && is_noun(i - 1)) {
      out.push_back(OwlAxiom::datatype_property("hasQuantity", class_name(tokens[i - 1]), "xsd:decimal"));
    }
    if (i + 1 < tokens.size() && is_noun(i + 1)) {
      out.push_back(OwlAxiom::datatype_property("hasQuantity", class_name(tokens[i + 1]), "xsd:decimal"));
    }
  }
  return out;
}

Ontology generate(const std::vector<const Rule*>& rules, const Lexicon& lexicon,
                  std::string base_iri) {
  check_base_iri(base_iri);
  std::set<Statement> statements;
  for (const Rule* rule : rules) {
    for (const PartExpr* part : {&rule->if_expr, &rule->then_expr}) {
      for (Statement& s : flatten_statements(*part)) statements.insert(std::move(s));
    }
  }
  Ontology ontology;
  ontology.base_iri = std::move(base_iri);
  for (const Statement& s : statements) {
    for (OwlAxiom& axiom : map_statement(s, lexicon)) ontology.axioms.insert(std::move(axiom));
  }
  return ontology;
}

Ontology generate(const std::vector<std::shared_ptr<const Rule>>& rules, const Lexicon& lexicon,
                  std::string base_iri) {
  std::vector<const Rule*> raw_rules;
  raw_rules.reserve(rules.size());
  for (const auto& r : rules) raw_rules.push_back(r.get());
  return generate(raw_rules, lexicon, std::move(base_iri));
}

std::string to_turtle(const Ontology& ontology) {
  std::string out;
  out += "@prefix : <" + ontology.base_iri + "> .\n";
  out += "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n";
  out += "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";
  out += "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n";
  out += "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";
  if (!ontology.axioms.empty()) out += '\n';
  for (const OwlAxiom& a : ontology.axioms) {
    switch (a.kind) {
      case OwlAxiom::Kind::Class:
        out += ":" + a.name + " a owl:Class .\n";
        break;
      case OwlAxiom::Kind::ObjectProperty:
        out += ":" + a.name + " a owl:ObjectProperty ; rdfs:domain :" + a.domain +
               " ; rdfs:range :" + a.range + " .\n";
        break;
      case OwlAxiom::Kind::DatatypeProperty:
        out += ":" + a.name + " a owl:DatatypeProperty ; rdfs:domain :" + a.domain +
               " ; rdfs:range " + a.range + " .\n";
        break;
    }
  }
  return out;
}

}  // namespace rulehub
