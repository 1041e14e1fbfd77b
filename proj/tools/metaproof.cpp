// Command-line driver: REPL, script runner and HTTP server for the JSON
// stepper protocol.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "metaproof/error.hpp"
#include "metaproof/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"metaproof: a generic theorem prover for the meta-logic M"};
  int port = 0;
  bool repl = false;
  std::vector<std::string> loads;
  std::string script;
  app.add_option("--serve", port, "Serve the JSON protocol over HTTP on localhost:PORT");
  app.add_flag("--repl", repl, "Read commands from standard input");
  app.add_option("--load", loads, "Load a theory file before anything else");
  app.add_option("--run", script, "Run a script of REPL commands; exit nonzero on the first failure");
  CLI11_PARSE(app, argc, argv);

  metaproof::Session session;
  for (const auto& path : loads) {
    std::string resp = session.exec_line("load_theory " + path);
    if (!metaproof::response_ok(resp)) {
      std::cerr << resp << '\n';
      return 1;
    }
  }

  if (!script.empty()) {
    std::ifstream in(script);
    if (!in) {
      std::cerr << "cannot read " << script << '\n';
      return 1;
    }
    if (!metaproof::serve_stdio(session, in, std::cout, true)) return 1;
  }
  if (port > 0) {
    std::cerr << "listening on http://127.0.0.1:" << port << "/api\n";
    try {
      metaproof::serve_http(session, port);
    } catch (const metaproof::Error& e) {
      std::cerr << e.what() << '\n';
      return 1;
    }
    return 0;
  }
  if (repl || (script.empty() && loads.empty())) metaproof::serve_stdio(session, std::cin, std::cout, false);
  return 0;
}
