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

#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "rulehub/dialog_engine.hpp"
#include "rulehub/knowledge_store.hpp"
#include "rulehub/ontology.hpp"
#include "rulehub/rule_parser.hpp"

namespace py = pybind11;
using namespace rulehub;

namespace {

/// Owns the store so Python can release the directory lock deterministically.
class PyStore {
 public:
  PyStore(const std::filesystem::path& dir, double token_ttl, bool sync) {
    StoreOptions o;
    o.token_ttl = std::chrono::seconds(static_cast<long long>(token_ttl));
    o.sync = sync;
    store_ = std::make_unique<Store>(dir, o);
  }

  Store& get() {
    if (!store_) throw py::value_error("store is closed");
    return *store_;
  }
  void close() { store_.reset(); }
  bool closed() const { return !store_; }

 private:
  std::unique_ptr<Store> store_;
};

py::dict rule_dict(const Snapshot& snap, const Rule& r) {
  py::dict d;
  d["rule_id"] = raw(r.id);
  d["if"] = r.if_text;
  d["then"] = r.then_text;
  d["author_id"] = raw(r.author);
  d["score"] = snap.rule_score(r.id);
  d["authority"] = snap.user_authority(r.author);
  return d;
}

py::dict outcome_dict(const Outcome& o) {
  py::dict d;
  if (auto* p = std::get_if<Propose>(&o)) {
    d["type"] = "propose";
    d["rule_id"] = raw(p->rule);
    d["conclusion"] = p->conclusion_text;
    d["prompt"] = prompt_for(*p);
  } else if (auto* r = std::get_if<Result>(&o)) {
    d["type"] = "result";
    d["text"] = r->text;
  } else {
    d["type"] = "no_result";
  }
  return d;
}

std::vector<std::uint64_t> ids(const std::vector<RuleId>& v) {
  std::vector<std::uint64_t> out;
  for (RuleId id : v) out.push_back(raw(id));
  return out;
}

std::string connector_name(const PartExpr& e) { return std::string(connector_keyword(e.connector())); }

}  // namespace

PYBIND11_MODULE(_rulehub, m) {
  m.doc() = "IF..THEN rule store, dialog inference and ontology export";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<RuleParseError> rule_parse_error(m, "RuleParseError", parse_error.ptr());
  static py::exception<StoreError> store_error(m, "StoreError", PyExc_RuntimeError);
  static py::exception<DialogError> dialog_error(m, "DialogError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    // args mirror the C++ error fields so callers can branch on them.
    try {
      if (p) std::rethrow_exception(p);
    } catch (const RuleParseError& e) {
      py::tuple args = py::make_tuple(e.what(), to_string(e.part()), to_string(e.kind()),
                                      e.position());
      PyErr_SetObject(rule_parse_error.ptr(), args.ptr());
    } catch (const ParseError& e) {
      py::tuple args = py::make_tuple(e.what(), to_string(e.kind()), e.position());
      PyErr_SetObject(parse_error.ptr(), args.ptr());
    } catch (const StoreError& e) {
      py::tuple args = py::make_tuple(e.what(), to_string(e.code()));
      PyErr_SetObject(store_error.ptr(), args.ptr());
    } catch (const DialogError& e) {
      py::tuple args = py::make_tuple(e.what(), to_string(e.code()));
      PyErr_SetObject(dialog_error.ptr(), args.ptr());
    }
  });

  m.def("tokenize", &tokenize, py::arg("text"));

  py::class_<PartExpr>(m, "PartExpr")
      .def_property_readonly("is_atom", &PartExpr::is_atom)
      .def_property_readonly("connector", &connector_name)
      .def_property_readonly("lhs", &PartExpr::lhs)
      .def_property_readonly("rhs", &PartExpr::rhs)
      .def_property_readonly("text", [](const PartExpr& e) { return e.statement().display_text(); })
      .def_property_readonly("tokens", [](const PartExpr& e) { return e.statement().tokens(); })
      .def_property_readonly("depth", &PartExpr::depth)
      .def("evaluate", [](const PartExpr& e, const FactSet& facts) { return evaluate(e, facts); }, py::arg("facts"))
      .def("leaf_tokens", [](const PartExpr& e) { return leaf_tokens(e); })
      .def("__eq__", [](const PartExpr& a, const PartExpr& b) { return a == b; })
      .def("__str__", &format_part)
      .def("__repr__", [](const PartExpr& e) { return "PartExpr(" + format_part(e) + ")"; });

  m.def("parse_part", &parse_part, py::arg("text"), py::arg("nesting_limit") = kDefaultNestingLimit);
  m.def("format_part", &format_part, py::arg("expr"));
  m.def("flatten_statements", [](const PartExpr& e) {
    std::vector<std::string> out;
    for (const auto& s : flatten_statements(e)) out.push_back(s.canonical_text());
    return out;
  });
  m.def("atom", [](const std::string& text) { return PartExpr::atom(text); }, py::arg("text"));
  m.def("all_of", &all_of);
  m.def("any_of", &any_of);
  m.def("one_of", &one_of);

  py::class_<PyStore>(m, "Store")
      .def(py::init<const std::filesystem::path&, double, bool>(), py::arg("data_dir"),
           py::arg("token_ttl") = 86400.0, py::arg("sync") = true)
      .def("close", &PyStore::close)
      .def_property_readonly("closed", &PyStore::closed)
      .def("__enter__", [](PyStore& s) -> PyStore& { return s; }, py::return_value_policy::reference)
      .def("__exit__", [](PyStore& s, py::args) { s.close(); })
      .def(
          "register_user",
          [](PyStore& s, const std::string& name, const std::string& email, const std::string& password) {
            Store& store = s.get();
            py::gil_scoped_release release;
            return raw(store.register_user(name, email, password));
          },
          py::arg("name"), py::arg("email"), py::arg("password"))
      .def(
          "authenticate",
          [](PyStore& s, const std::string& email, const std::string& password) {
            Store& store = s.get();
            SessionToken t = [&] {
              py::gil_scoped_release release;
              return store.authenticate(email, password);
            }();
            py::dict d;
            d["token"] = t.token;
            d["user_id"] = raw(t.user);
            d["expires_at"] = t.expires_at;
            return d;
          },
          py::arg("email"), py::arg("password"))
      .def(
          "resolve_token",
          [](PyStore& s, const std::string& token) -> std::optional<std::uint64_t> {
            auto u = s.get().resolve_token(token);
            if (!u) return std::nullopt;
            return raw(*u);
          },
          py::arg("token"))
      .def(
          "add_rule",
          [](PyStore& s, std::uint64_t author, const std::string& if_text, const std::string& then_text) {
            return raw(s.get().add_rule(UserId{author}, if_text, then_text));
          },
          py::arg("author"), py::arg("if_text"), py::arg("then_text"))
      .def(
          "delete_rule", [](PyStore& s, std::uint64_t caller, std::uint64_t rule) {
            s.get().delete_rule(UserId{caller}, RuleId{rule});
          },
          py::arg("caller"), py::arg("rule_id"))
      .def(
          "cast_vote",
          [](PyStore& s, std::uint64_t voter, std::uint64_t rule, int value) {
            s.get().cast_vote(UserId{voter}, RuleId{rule}, value);
          },
          py::arg("voter"), py::arg("rule_id"), py::arg("value"))
      .def("grant_admin", [](PyStore& s, std::uint64_t user) { s.get().grant_admin(UserId{user}); })
      .def("rule_score", [](PyStore& s, std::uint64_t rule) { return s.get().rule_score(RuleId{rule}); })
      .def("user_authority", [](PyStore& s, std::uint64_t user) { return s.get().user_authority(UserId{user}); })
      .def(
          "rule",
          [](PyStore& s, std::uint64_t id) -> py::object {
            auto snap = s.get().snapshot();
            const Rule* r = snap->find_rule(RuleId{id});
            if (!r) return py::none();
            return rule_dict(*snap, *r);
          },
          py::arg("rule_id"))
      .def("rules",
           [](PyStore& s) {
             auto snap = s.get().snapshot();
             py::list out;
             for (const auto& r : snap->rules()) out.append(rule_dict(*snap, *r));
             return out;
           })
      .def(
          "search",
          [](PyStore& s, const std::string& query) {
            auto snap = s.get().snapshot();
            return ids(snap->index().search(*snap, tokenize(query)));
          },
          py::arg("query"))
      .def(
          "firing_rules",
          [](PyStore& s, const FactSet& facts) {
            auto snap = s.get().snapshot();
            return ids(snap->index().firing_rules(*snap, facts));
          },
          py::arg("facts"))
      .def("serialize", [](PyStore& s) { return s.get().snapshot()->serialize(); })
      .def(
          "ontology",
          [](PyStore& s, const std::string& base_iri, std::optional<std::filesystem::path> lexicon) {
            Lexicon lex = lexicon ? Lexicon::load(*lexicon) : Lexicon::builtin();
            auto snap = s.get().snapshot();
            return to_turtle(generate(snap->rules(), lex, base_iri));
          },
          py::arg("base_iri") = std::string(kDefaultBaseIri), py::arg("lexicon") = py::none());

  py::class_<DialogSession>(m, "DialogSession")
      .def("answer", [](DialogSession& d, bool accept) { return outcome_dict(answer(d, accept)); },
           py::arg("accept"))
      .def_property_readonly("phase",
                             [](const DialogSession& d) {
                               switch (d.phase()) {
                                 case DialogSession::Phase::Awaiting: return "awaiting";
                                 case DialogSession::Phase::Finished: return "finished";
                                 default: return "exhausted";
                               }
                             })
      .def_property_readonly("facts", &DialogSession::facts)
      .def_property_readonly("accepted", [](const DialogSession& d) {
        py::list out;
        for (const auto& a : d.accepted()) out.append(py::make_tuple(raw(a.rule), a.conclusion_text));
        return out;
      });

  m.def(
      "start_dialog",
      [](PyStore& s, const std::string& query, bool chain, int max_depth) {
        auto [session, outcome] = start_session(s.get().snapshot(), query, {.chain = chain, .max_depth = max_depth});
        return py::make_tuple(std::move(session), outcome_dict(outcome));
      },
      py::arg("store"), py::arg("query"), py::arg("chain") = false, py::arg("max_depth") = 5);
}
