#pragma once

// Interactive driver. Every command is a JSON object {"cmd": ..., args...}
// and every response a JSON object {"ok": bool, ...}; failures are reported
// as data, never by exceptions escaping exec().

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "metaproof/kernel.hpp"
#include "metaproof/tactic.hpp"

namespace metaproof {

class Session {
 public:
  Session();
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Run one JSON command and return the JSON response text.
  std::string exec(std::string_view request);

  /// A REPL line: either a JSON object or the word form, e.g.
  /// `goal IPL Tr(A --> A)`, `apply resolve impI 1`, `back`, `qed name`.
  std::string exec_line(std::string_view line);

  TheoryRef theory(const std::string& name) const;
  std::optional<Theorem> stored(const std::string& name) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::mutex mu_;
};

/// Translate a REPL line to its JSON command text. Throws BadCommand.
std::string line_to_request(std::string_view line);

/// True when a response reports success.
bool response_ok(std::string_view response);

/// Read one command per line from `in`, write one response per line to
/// `out`. With `stop_on_error`, returns false at the first failure.
bool serve_stdio(Session& session, std::istream& in, std::ostream& out, bool stop_on_error = false);

/// POST /api with a JSON command body; blocks until the server stops.
void serve_http(Session& session, int port, const std::string& host = "127.0.0.1");

}  // namespace metaproof
