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

#include "rulehub/search_index.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>
#include <tuple>

namespace rulehub {

void sort_by_rank(std::vector<RuleId>& ids, const RuleSource& source) {
  struct Keyed {
    RankKey key;
    RuleId id;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(ids.size());
  for (RuleId id : ids) keyed.push_back({source.rank_key(id), id});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tuple(-a.key.authority, -a.key.score, raw(a.id)) <
           std::tuple(-b.key.authority, -b.key.score, raw(b.id));
  });
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = keyed[i].id;
}

IndexError::IndexError(Kind kind, RuleId id)
    : std::logic_error((kind == Kind::AlreadyIndexed ? "rule already indexed: "
                                                     : "rule not indexed: ") +
                       std::to_string(raw(id))),
      kind_(kind) {}

void Index::insert(const Rule& rule) {
  if (!indexed_.insert(rule.id).second) throw IndexError(IndexError::Kind::AlreadyIndexed, rule.id);
  for (const Token& t : leaf_tokens(rule.if_expr)) postings_[t].if_rules.insert(rule.id);
  for (const Token& t : leaf_tokens(rule.then_expr)) postings_[t].then_rules.insert(rule.id);
}

void Index::remove(const Rule& rule) {
  if (indexed_.erase(rule.id) == 0) throw IndexError(IndexError::Kind::NotIndexed, rule.id);
  auto drop = [&](const Token& t, bool if_side) {
    auto it = postings_.find(t);
    if (it == postings_.end()) return;
    (if_side ? it->second.if_rules : it->second.then_rules).erase(rule.id);
    if (it->second.if_rules.empty() && it->second.then_rules.empty()) postings_.erase(it);
  };
  for (const Token& t : leaf_tokens(rule.if_expr)) drop(t, true);
  for (const Token& t : leaf_tokens(rule.then_expr)) drop(t, false);
}

const Index::Posting* Index::posting(std::string_view token) const {
  auto it = postings_.find(token);
  return it == postings_.end() ? nullptr : &it->second;
}

std::vector<RuleId> Index::search(const RuleSource& source,
                                  const std::vector<Token>& query) const {
  std::set<Token> distinct(query.begin(), query.end());
  if (distinct.empty()) return {};

  std::set<RuleId> matches;
  bool first = true;
  for (const Token& t : distinct) {
    const Posting* p = posting(t);
    if (p == nullptr) return {};
    std::set<RuleId> mentioned;
    std::set_union(p->if_rules.begin(), p->if_rules.end(), p->then_rules.begin(),
                   p->then_rules.end(), std::inserter(mentioned, mentioned.end()));
    if (first) {
      matches = std::move(mentioned);
      first = false;
    } else {
      std::set<RuleId> narrowed;
      std::set_intersection(matches.begin(), matches.end(), mentioned.begin(), mentioned.end(),
                            std::inserter(narrowed, narrowed.end()));
      matches = std::move(narrowed);
    }
    if (matches.empty()) return {};
  }
  std::vector<RuleId> out(matches.begin(), matches.end());
  sort_by_rank(out, source);
  return out;
}

std::vector<RuleId> Index::firing_rules(const RuleSource& source, const FactSet& facts) const {
  std::set<RuleId> candidates;
  for (const Token& f : facts) {
    if (const Posting* p = posting(f)) candidates.insert(p->if_rules.begin(), p->if_rules.end());
  }
  std::vector<RuleId> out;
  for (RuleId id : candidates) {
    const Rule* rule = source.find_rule(id);
    if (rule != nullptr && evaluate(rule->if_expr, facts)) out.push_back(id);
  }
  sort_by_rank(out, source);
  return out;
}

std::string Index::serialize() const {
  std::ostringstream os;
  os << "indexed";
  for (RuleId id : indexed_) os << ' ' << raw(id);
  os << '\n';
  for (const auto& [token, p] : postings_) {
    os << token << " if";
    for (RuleId id : p.if_rules) os << ' ' << raw(id);
    os << " then";
    for (RuleId id : p.then_rules) os << ' ' << raw(id);
    os << '\n';
  }
  return os.str();
}

}  // namespace rulehub
