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

#include "rulehub/http_service.hpp"

#include <httplib.h>

#include <charconv>
#include <functional>
#include <json.hpp>

namespace rulehub {

using json = nlohmann::json;

std::string render_ontology(const Snapshot& snapshot, const Lexicon& lexicon,
                            const std::string& base_iri) {
  return to_turtle(generate(snapshot.rules(), lexicon, base_iri));
}

namespace {

struct ApiError {
  int status;
  std::string code;
  std::string message;
  json detail = nullptr;
};

int status_for(StoreErrc code) {
  switch (code) {
    case StoreErrc::DuplicateEmail: return 409;
    case StoreErrc::WeakPassword:
    case StoreErrc::InvalidEmail:
    case StoreErrc::InvalidName:
    case StoreErrc::BadValue: return 400;
    case StoreErrc::BadCredentials: return 401;
    case StoreErrc::Forbidden:
    case StoreErrc::SelfVote: return 403;
    case StoreErrc::UnknownUser:
    case StoreErrc::NotFound: return 404;
    case StoreErrc::Locked:
    case StoreErrc::CorruptLog:
    case StoreErrc::UnsupportedEvent:
    case StoreErrc::Io: return 500;
  }
  return 500;
}

int status_for(DialogErrc code) {
  switch (code) {
    case DialogErrc::EmptyQuery:
    case DialogErrc::BadDepth: return 400;
    case DialogErrc::SessionFinished: return 409;
    case DialogErrc::UnknownSession: return 404;
  }
  return 500;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) {
  json body{{"code", e.code}, {"message", e.message}};
  if (!e.detail.is_null()) body["detail"] = e.detail;
  send_json(res, e.status, body);
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw ApiError{400, "bad_request", "request body must be a JSON object"};
  }
  return body;
}

std::string string_field(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end() || !it->is_string()) {
    throw ApiError{400, "bad_request", std::string("field '") + name + "' must be a string"};
  }
  return it->get<std::string>();
}

std::uint64_t id_param(const httplib::Request& req, const char* name) {
  const std::string& text = req.path_params.at(name);
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ApiError{404, "not_found", "no such resource"};
  }
  return value;
}

std::size_t size_query(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  std::string text = req.get_param_value(name);
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ApiError{400, "bad_request", std::string("query parameter '") + name +
                                           "' must be a non-negative integer"};
  }
  return value;
}

json outcome_json(const Outcome& outcome) {
  return std::visit(
      [](const auto& o) -> json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Propose>) {
          return {{"type", "propose"},
                  {"rule_id", raw(o.rule)},
                  {"conclusion", o.conclusion_text},
                  {"prompt", prompt_for(o)}};
        } else if constexpr (std::is_same_v<T, Result>) {
          return {{"type", "result"}, {"text", o.text}};
        } else {
          return {{"type", "no_result"}};
        }
      },
      outcome);
}

json accepted_json(const std::vector<Accepted>& accepted) {
  json out = json::array();
  for (const Accepted& a : accepted) {
    out.push_back({{"rule_id", raw(a.rule)}, {"conclusion", a.conclusion_text}});
  }
  return out;
}

json rule_json(const Snapshot& snap, const Rule& rule) {
  const UserAccount* author = snap.find_user(rule.author);
  return {{"rule_id", raw(rule.id)},
          {"if", rule.if_text},
          {"then", rule.then_text},
          {"score", snap.rule_score(rule.id)},
          {"author_name", author ? author->name : std::string()},
          {"authority", snap.user_authority(rule.author)}};
}

}  // namespace

struct HttpService::Impl {
  Store& store;
  Lexicon lexicon;
  ServiceConfig config;
  SessionRegistry sessions;
  httplib::Server server;

  Impl(Store& s, Lexicon lex, ServiceConfig cfg)
      : store(s), lexicon(std::move(lex)), config(std::move(cfg)), sessions(config.session_ttl) {
    routes();
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  /// Converts domain exceptions into JSON error responses.
  httplib::Server::Handler guarded(Handler fn) {
    return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ApiError& e) {
        send_error(res, e);
      } catch (const RuleParseError& e) {
        send_error(res, {422, "parse_error", e.what(),
                         json{{"part", to_string(e.part())},
                              {"kind", to_string(e.kind())},
                              {"position", e.position()}}});
      } catch (const StoreError& e) {
        send_error(res, {status_for(e.code()), std::string(to_string(e.code())), e.what()});
      } catch (const DialogError& e) {
        send_error(res, {status_for(e.code()), std::string(to_string(e.code())), e.what()});
      }
    };
  }

  /// Resolves the bearer token or throws 401 before anything else happens.
  UserId require_user(const httplib::Request& req) {
    static const std::string prefix = "Bearer ";
    std::string header = req.get_header_value("Authorization");
    if (header.compare(0, prefix.size(), prefix) == 0) {
      if (auto user = store.resolve_token(std::string_view(header).substr(prefix.size()))) {
        return *user;
      }
    }
    throw ApiError{401, "unauthorized", "a valid bearer token is required"};
  }

  void routes() {
    server.Post("/api/register", guarded([this](const auto& req, auto& res) {
      json body = parse_body(req);
      UserId id = store.register_user(string_field(body, "name"), string_field(body, "email"),
                                      string_field(body, "password"));
      send_json(res, 201, {{"user_id", raw(id)}});
    }));

    server.Post("/api/login", guarded([this](const auto& req, auto& res) {
      json body = parse_body(req);
      SessionToken token = store.authenticate(string_field(body, "email"), string_field(body, "password"));
      send_json(res, 200, {{"token", token.token}, {"expires_at", format_rfc3339(token.expires_at)}});
    }));

    server.Post("/api/rules", guarded([this](const auto& req, auto& res) {
      UserId user = require_user(req);
      json body = parse_body(req);
      RuleId id = store.add_rule(user, string_field(body, "if"), string_field(body, "then"));
      send_json(res, 201, {{"rule_id", raw(id)}});
    }));

    server.Get("/api/rules/:id", guarded([this](const auto& req, auto& res) {
      RuleId id{id_param(req, "id")};
      auto snap = store.snapshot();
      const Rule* rule = snap->find_rule(id);
      if (rule == nullptr) throw ApiError{404, "not_found", "no such rule"};
      send_json(res, 200, rule_json(*snap, *rule));
    }));

    server.Delete("/api/rules/:id", guarded([this](const auto& req, auto& res) {
      UserId user = require_user(req);
      store.delete_rule(user, RuleId{id_param(req, "id")});
      res.status = 204;
    }));

    server.Post("/api/rules/:id/vote", guarded([this](const auto& req, auto& res) {
      UserId user = require_user(req);
      RuleId id{id_param(req, "id")};
      json body = parse_body(req);
      auto it = body.find("value");
      if (it == body.end() || !it->is_number_integer()) {
        throw ApiError{400, "bad_request", "field 'value' must be 1 or -1"};
      }
      store.cast_vote(user, id, it->template get<int>());
      res.status = 204;
    }));

    server.Get("/api/search", guarded([this](const auto& req, auto& res) {
      std::string q = req.has_param("q") ? req.get_param_value("q") : std::string();
      std::size_t offset = size_query(req, "offset", 0);
      std::size_t limit =
          std::min(size_query(req, "limit", config.default_search_limit), config.max_search_limit);
      auto snap = store.snapshot();
      std::vector<RuleId> ids = snap->index().search(*snap, tokenize(q));
      json rules = json::array();
      for (std::size_t i = offset; i < ids.size() && rules.size() < limit; ++i) {
        rules.push_back(rule_json(*snap, *snap->find_rule(ids[i])));
      }
      send_json(res, 200, {{"rules", rules}, {"total", ids.size()}});
    }));

    server.Post("/api/dialog", guarded([this](const auto& req, auto& res) {
      json body = parse_body(req);
      DialogOptions options;
      options.max_depth = config.chain_depth;
      if (auto it = body.find("chain"); it != body.end()) {
        if (!it->is_boolean()) throw ApiError{400, "bad_request", "field 'chain' must be a boolean"};
        options.chain = it->template get<bool>();
      }
      if (auto it = body.find("max_depth"); it != body.end()) {
        if (!it->is_number_integer()) {
          throw ApiError{400, "bad_request", "field 'max_depth' must be an integer"};
        }
        options.max_depth = it->template get<int>();
      }
      auto started = sessions.start(store.snapshot(), string_field(body, "query"), options);
      send_json(res, 200, {{"session", started.session_id}, {"outcome", outcome_json(started.outcome)}});
    }));

    server.Post("/api/dialog/:session/answer", guarded([this](const auto& req, auto& res) {
      const std::string& id = req.path_params.at("session");
      json body = parse_body(req);
      auto it = body.find("accept");
      if (it == body.end() || !it->is_boolean()) {
        throw ApiError{400, "bad_request", "field 'accept' must be a boolean"};
      }
      Outcome outcome = sessions.answer(id, it->template get<bool>());
      json reply{{"outcome", outcome_json(outcome)}};
      if (auto session = sessions.find(id)) reply["accepted"] = accepted_json(session->accepted());
      send_json(res, 200, reply);
    }));

    server.Get("/api/ontology", guarded([this](const auto&, auto& res) {
      res.status = 200;
      res.set_content(render_ontology(*store.snapshot(), lexicon, config.base_iri), "text/turtle");
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, {404, "not_found", "no such resource"});
      } else if (res.status == 405) {
        send_error(res, {405, "method_not_allowed", "method not allowed"});
      }
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send_error(res, {500, "internal", what});
    });
  }
};

HttpService::HttpService(Store& store, Lexicon lexicon, ServiceConfig config)
    : impl_(std::make_unique<Impl>(store, std::move(lexicon), std::move(config))) {}

HttpService::~HttpService() { stop(); }

int HttpService::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpService::bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

bool HttpService::run() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace rulehub
