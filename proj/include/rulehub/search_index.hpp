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

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rulehub/rule_model.hpp"

namespace rulehub {

struct RankKey {
  std::int64_t authority = 0;
  std::int64_t score = 0;
};

/// Read access to live rules and their ranking inputs.
class RuleSource {
 public:
  virtual ~RuleSource() = default;
  virtual const Rule* find_rule(RuleId id) const = 0;
  virtual RankKey rank_key(RuleId id) const = 0;
};

/// Orders by author authority desc, rule score desc, then id asc.
void sort_by_rank(std::vector<RuleId>& ids, const RuleSource& source);

class IndexError : public std::logic_error {
 public:
  enum class Kind { AlreadyIndexed, NotIndexed };
  IndexError(Kind kind, RuleId id);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Inverted index from leaf tokens to the rules whose IF or THEN part
/// mentions them.
class Index {
 public:
  struct Posting {
    std::set<RuleId> if_rules;
    std::set<RuleId> then_rules;
  };

  void insert(const Rule& rule);
  void remove(const Rule& rule);

  bool contains(RuleId id) const { return indexed_.count(id) > 0; }
  std::size_t size() const { return indexed_.size(); }
  std::size_t token_count() const { return postings_.size(); }
  const Posting* posting(std::string_view token) const;

  /// Rules mentioning every query token in either part. Empty query, empty
  /// result.
  std::vector<RuleId> search(const RuleSource& source, const std::vector<Token>& query) const;

  /// Rules whose IF expression holds over `facts`. Candidates come from the
  /// IF postings of the facts and are then evaluated exactly.
  std::vector<RuleId> firing_rules(const RuleSource& source, const FactSet& facts) const;

  /// Canonical text form; equal indexes serialize identically.
  std::string serialize() const;

 private:
  std::map<Token, Posting, std::less<>> postings_;
  std::set<RuleId> indexed_;
};

}  // namespace rulehub
