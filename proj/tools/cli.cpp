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

#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <thread>

#include "rulehub/http_service.hpp"
#include "rulehub/knowledge_store.hpp"
#include "rulehub/ontology.hpp"

namespace rulehub::cli {
namespace {

struct Options {
  std::string data_dir = "data";
  std::string lexicon;
  std::string base_iri{kDefaultBaseIri};
  std::string host = "0.0.0.0";
  int port = 8080;
  int chain_depth = kDefaultChainDepth;
  long token_ttl = 24 * 60 * 60;

  std::string name;
  std::string email;
  std::string password;
  std::string file;
  std::string as;
};

Lexicon load_lexicon(const Options& o) {
  return o.lexicon.empty() ? Lexicon::builtin() : Lexicon::load(o.lexicon);
}

StoreOptions store_options(const Options& o) {
  StoreOptions so;
  so.token_ttl = std::chrono::seconds(o.token_ttl);
  return so;
}

int serve(const Options& o, std::ostream& out, std::ostream& err) {
  Lexicon lexicon = load_lexicon(o);
  Store store(o.data_dir, store_options(o));
  ServiceConfig config;
  config.base_iri = o.base_iri;
  config.chain_depth = o.chain_depth;
  HttpService service(store, std::move(lexicon), config);
  if (!service.bind(o.host, o.port)) {
    err << "cannot bind " << o.host << ":" << o.port << "\n";
    return kExitData;
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });

  out << "rulehub listening on " << o.host << ":" << o.port << " (data " << o.data_dir << ")"
      << std::endl;
  service.run();
  // run() also returns on bind loss; wake the waiter so it can be joined.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

int init_admin(const Options& o, std::ostream& out) {
  Store store(o.data_dir, store_options(o));
  UserId id{};
  if (auto existing = store.find_user_by_email(o.email)) {
    store.authenticate(o.email, o.password);
    id = *existing;
  } else {
    id = store.register_user(o.name, o.email, o.password);
  }
  store.grant_admin(id);
  out << "admin " << o.email << " is user " << raw(id) << "\n";
  return kExitOk;
}

int import_rules(const Options& o, std::ostream& out, std::ostream& err) {
  std::ifstream in(o.file, std::ios::binary);
  if (!in) {
    err << "cannot open " << o.file << "\n";
    return kExitData;
  }
  Store store(o.data_dir, store_options(o));
  auto author = store.find_user_by_email(o.as);
  if (!author) {
    err << "no registered user with email " << o.as << "\n";
    return kExitData;
  }
  std::size_t imported = 0;
  std::size_t failed = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fail = [&](const std::string& why) {
      err << o.file << ":" << line_no << ": " << why << "\n";
      ++failed;
    };
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      fail("not a JSON object");
      continue;
    }
    auto field = [&](const char* key) -> std::optional<std::string> {
      auto it = rec.find(key);
      if (it == rec.end() || !it->is_string()) return std::nullopt;
      return it->get<std::string>();
    };
    auto if_text = field("if");
    auto then_text = field("then");
    if (!if_text || !then_text) {
      fail("expected string fields \"if\" and \"then\"");
      continue;
    }
    try {
      store.add_rule(*author, *if_text, *then_text);
      ++imported;
    } catch (const RuleParseError& e) {
      fail(std::string(to_string(e.part())) + " part: " + e.what());
    }
  }
  out << "imported " << imported << " rule(s), " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitData;
}

int export_rules(const Options& o, std::ostream& out, std::ostream& err) {
  Store store(o.data_dir, store_options(o));
  std::ofstream file(o.file, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot write " << o.file << "\n";
    return kExitData;
  }
  auto snap = store.snapshot();
  for (const auto& rule : snap->rules()) {
    nlohmann::ordered_json rec{{"if", rule->if_text}, {"then", rule->then_text}};
    file << rec.dump() << "\n";
  }
  out << "exported " << snap->rule_count() << " rule(s)\n";
  return kExitOk;
}

int export_ontology(const Options& o, std::ostream& out, std::ostream& err) {
  Lexicon lexicon = load_lexicon(o);
  Store store(o.data_dir, store_options(o));
  std::string turtle = render_ontology(*store.snapshot(), lexicon, o.base_iri);
  std::ofstream file(o.file, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot write " << o.file << "\n";
    return kExitData;
  }
  file << turtle;
  out << "wrote " << o.file << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"rulehub: collective IF..THEN knowledge server", "rulehub"};
  app.require_subcommand(1);

  auto add_data_dir = [&](CLI::App* cmd) {
    cmd->add_option("--data-dir", o.data_dir, "Directory holding the event log")
        ->envname("RH_DATA_DIR")
        ->capture_default_str();
  };
  auto add_ontology_flags = [&](CLI::App* cmd) {
    cmd->add_option("--lexicon", o.lexicon, "Part-of-speech lexicon TSV")
        ->envname("RH_LEXICON")
        ->check(CLI::ExistingFile);
    cmd->add_option("--base-iri", o.base_iri, "Ontology base IRI")
        ->envname("RH_BASE_IRI")
        ->capture_default_str();
  };
  auto add_token_ttl = [&](CLI::App* cmd) {
    cmd->add_option("--token-ttl", o.token_ttl, "Login token lifetime in seconds")
        ->envname("RH_TOKEN_TTL")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  add_data_dir(serve_cmd);
  add_ontology_flags(serve_cmd);
  add_token_ttl(serve_cmd);
  serve_cmd->add_option("--host", o.host, "Listen address")->capture_default_str();
  serve_cmd->add_option("--port", o.port, "Listen port")
      ->envname("RH_PORT")
      ->check(CLI::Range(1, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--chain-depth", o.chain_depth, "Default depth for chained dialogs")
      ->envname("RH_CHAIN_DEPTH")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();

  auto* admin_cmd = app.add_subcommand("init-admin", "Create or promote an administrator");
  add_data_dir(admin_cmd);
  admin_cmd->add_option("--name", o.name)->required();
  admin_cmd->add_option("--email", o.email)->required();
  admin_cmd->add_option("--password", o.password)->required();

  auto* import_cmd = app.add_subcommand("import", "Import rules from JSONL");
  add_data_dir(import_cmd);
  import_cmd->add_option("--file", o.file, "Rules JSONL, one {\"if\",\"then\"} per line")->required();
  import_cmd->add_option("--as", o.as, "Email of the registered author")->required();

  auto* export_cmd = app.add_subcommand("export-rules", "Write all rules as JSONL");
  add_data_dir(export_cmd);
  export_cmd->add_option("--file", o.file)->required();

  auto* onto_cmd = app.add_subcommand("export-ontology", "Write the generated ontology as Turtle");
  add_data_dir(onto_cmd);
  add_ontology_flags(onto_cmd);
  onto_cmd->add_option("--file", o.file)->required();

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*serve_cmd) return serve(o, out, err);
    if (*admin_cmd) return init_admin(o, out);
    if (*import_cmd) return import_rules(o, out, err);
    if (*export_cmd) return export_rules(o, out, err);
    if (*onto_cmd) return export_ontology(o, out, err);
  } catch (const StoreError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const LexiconError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace rulehub::cli
