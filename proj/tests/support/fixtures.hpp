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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rulehub/knowledge_store.hpp"
#include "support/oracles.hpp"

namespace oracle {

/// A store in a temp directory, with helpers for seeding users and rules.
struct StoreFixture {
  TempDir dir;
  std::unique_ptr<rulehub::Store> store;

  StoreFixture() {
    rulehub::StoreOptions o;
    o.sync = false;
    store = std::make_unique<rulehub::Store>(dir.path(), o);
  }

  rulehub::UserId user(const std::string& name) {
    return store->register_user(name, name + "@example.org", "password-" + name);
  }

  std::vector<rulehub::RuleId> rules(rulehub::UserId author,
                                     const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<rulehub::RuleId> ids;
    for (const auto& [i, t] : pairs) ids.push_back(store->add_rule(author, i, t));
    return ids;
  }
};

}  // namespace oracle
