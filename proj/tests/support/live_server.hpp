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

#include <httplib.h>

#include <json.hpp>
#include <memory>
#include <string>
#include <thread>

#include "rulehub/http_service.hpp"
#include "support/oracles.hpp"

namespace oracle {

/// Store + HttpService serving on 127.0.0.1 at an ephemeral port.
class LiveServer {
 public:
  explicit LiveServer(rulehub::ServiceConfig config = {}) {
    rulehub::StoreOptions o;
    o.sync = false;
    store_ = std::make_unique<rulehub::Store>(dir_.path(), o);
    service_ = std::make_unique<rulehub::HttpService>(*store_, rulehub::Lexicon::builtin(), config);
    port_ = service_->bind_any_port("127.0.0.1");
    thread_ = std::thread([this] { service_->run(); });
    service_->wait_until_ready();
  }
  ~LiveServer() {
    service_->stop();
    thread_.join();
  }

  int port() const { return port_; }
  rulehub::Store& store() { return *store_; }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  httplib::Result post(const std::string& path, const nlohmann::json& body, const std::string& token = "") const {
    auto c = client();
    httplib::Headers h;
    if (!token.empty()) h.emplace("Authorization", "Bearer " + token);
    return c.Post(path, h, body.dump(), "application/json");
  }

  /// Registers and logs in; returns the bearer token.
  std::string login(const std::string& name) const {
    std::string email = name + "@example.org";
    post("/api/register", {{"name", name}, {"email", email}, {"password", "password-" + name}});
    auto res = post("/api/login", {{"email", email}, {"password", "password-" + name}});
    return nlohmann::json::parse(res->body).at("token").get<std::string>();
  }

 private:
  TempDir dir_;
  std::unique_ptr<rulehub::Store> store_;
  std::unique_ptr<rulehub::HttpService> service_;
  int port_ = -1;
  std::thread thread_;
};

inline nlohmann::json body_of(const httplib::Result& res) { return nlohmann::json::parse(res->body); }

}  // namespace oracle
