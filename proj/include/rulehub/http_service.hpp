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

#include <chrono>
#include <memory>
#include <string>

#include "rulehub/dialog_engine.hpp"
#include "rulehub/knowledge_store.hpp"
#include "rulehub/ontology.hpp"

namespace rulehub {

struct ServiceConfig {
  std::string base_iri{kDefaultBaseIri};
  /// Default max_depth for chained dialogs.
  int chain_depth = kDefaultChainDepth;
  std::chrono::seconds session_ttl{std::chrono::minutes(30)};
  std::size_t default_search_limit = 50;
  std::size_t max_search_limit = 500;
};

/// Turtle for every live rule in `snapshot`. The HTTP export and the CLI
/// both go through here so their bytes match.
std::string render_ontology(const Snapshot& snapshot, const Lexicon& lexicon,
                            const std::string& base_iri);

/// JSON-over-HTTP front end for a Store.
///
///   POST   /api/register             {name,email,password}   201 {user_id}
///   POST   /api/login                {email,password}        200 {token,expires_at}
///   POST   /api/rules          auth  {if,then}               201 {rule_id}
///   GET    /api/rules/{id}                                   200 rule
///   DELETE /api/rules/{id}     auth                          204
///   POST   /api/rules/{id}/vote auth {value:1|-1}            204
///   GET    /api/search?q=&offset=&limit=                     200 {rules:[...]}
///   POST   /api/dialog               {query,chain?,max_depth?} 200 {session,outcome}
///   POST   /api/dialog/{s}/answer    {accept}                200 {outcome}
///   GET    /api/ontology                                     200 text/turtle
///
/// Errors are JSON bodies {code, message, detail?}.
class HttpService {
 public:
  HttpService(Store& store, Lexicon lexicon, ServiceConfig config = {});
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Returns the bound port, or -1.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rulehub
