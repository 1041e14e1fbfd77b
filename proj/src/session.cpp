#include "metaproof/session.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "metaproof/error.hpp"
#include "metaproof/syntax.hpp"

namespace metaproof {

using json = nlohmann::json;

namespace {

json error_response(const std::string& message, std::string_view kind) {
  return json{{"ok", false}, {"error", message}, {"kind", std::string(kind)}};
}

json error_response(const Error& e) {
  json r = error_response(e.what(), error_kind_name(e.kind()));
  if (e.has_offset()) r["offset"] = e.offset();
  return r;
}

struct Frame {
  ProofState state;
  Seq<ProofState> rest;
  std::string step;
};

struct Proof {
  TheoryRef thy;
  std::vector<std::pair<std::string, Theorem>> assumptions;
  std::vector<Term> discharge;
  std::vector<Frame> stack;
};

/// Outer `!!` become schematic variables so the theorem can serve as a rule.
Theorem rule_form(Theorem th) {
  while (auto q = dest_all(th.prop())) {
    std::string name = q->hint.empty() ? "x" : q->hint;
    th = forall_elim(Term::var(name, th.max_index() + 1, q->type), th);
  }
  return th;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::BadCommand, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) fail(ErrorKind::BadCommand, std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::size_t index_field(const json& j, const char* key, std::size_t dflt) {
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    fail(ErrorKind::BadCommand, std::string("field \"") + key + "\" must be a positive integer");
  }
  return static_cast<std::size_t>(it->get<long long>());
}

}  // namespace

struct Session::Impl {
  std::map<std::string, TheoryRef> theories;
  std::vector<std::pair<std::string, Theorem>> stored;
  std::map<long long, Proof> proofs;
  long long next_id = 1;

  TheoryRef find_theory(const std::string& name) const {
    auto it = theories.find(name);
    if (it != theories.end()) return it->second;
    return builtin(name);
  }

  const Theorem* find_stored(const std::string& name) const {
    for (const auto& [n, th] : stored) {
      if (n == name) return &th;
    }
    return nullptr;
  }

  Proof& proof(const json& req) {
    const json& id = field(req, "proofId");
    if (!id.is_number_integer()) fail(ErrorKind::BadCommand, "proofId must be an integer");
    auto it = proofs.find(id.get<long long>());
    if (it == proofs.end()) fail(ErrorKind::UnknownId, "no proof " + id.dump());
    return it->second;
  }

  // --- rendering ---------------------------------------------------------

  static json render_state(const Proof& p) {
    SyntaxTable table = SyntaxTable::of(*p.thy);
    const ProofState& st = p.stack.back().state;
    json subs = json::array();
    auto goals = st.subgoals();
    for (std::size_t i = 0; i < goals.size(); ++i) {
      SubgoalView v = SubgoalView::of(goals[i]);
      std::set<std::string> taken = symbol_names(goals[i]);
      for (const auto& [n, c] : table.consts) taken.insert(n);
      std::vector<std::string> names;
      json params = json::array();
      for (const auto& prm : v.params) {
        std::string n = prm.name;
        for (int k = 1; taken.count(n); ++k) n = prm.name + std::to_string(k);
        taken.insert(n);
        names.push_back(n);
        params.push_back(json{{"name", n}, {"type", print_type(prm.type)}});
      }
      PrintOptions po;
      po.bound_names.assign(names.rbegin(), names.rend());
      json asms = json::array();
      for (const auto& a : v.asms) asms.push_back(print_term(table, a, po));
      subs.push_back(json{{"index", i + 1},
                          {"params", params},
                          {"asms", asms},
                          {"concl", print_term(table, v.concl, po)},
                          {"text", print_term(table, goals[i])}});
    }
    json ff = json::array();
    for (const auto& d : st.thm.flexflex()) {
      ff.push_back(print_term(table, d.lhs) + " == " + print_term(table, d.rhs));
    }
    return json{{"theory", p.thy->name()},
                {"goal", print_term(table, st.goal())},
                {"text", print_theorem(table, st.thm)},
                {"nsubgoals", st.nsubgoals},
                {"subgoals", subs},
                {"flexflex", ff},
                {"history", p.stack.size() - 1}};
  }

  json state_response(long long id) const {
    return json{{"ok", true}, {"proofId", id}, {"state", render_state(proofs.at(id))}};
  }

  // --- tactics -----------------------------------------------------------

  Theorem lookup_rule(const Proof& p, const std::string& name) const {
    for (const auto& [n, th] : p.assumptions) {
      if (n == name) return th;
    }
    if (const Theorem* th = find_stored(name)) return *th;
    if (p.thy->find_axiom(name)) return axiom(p.thy, name);
    if (p.thy->find_def_named(name)) return definition(p.thy, name);
    fail(ErrorKind::UnknownAxiom, "no rule named " + name);
  }

  Theorem instantiate_where(const Proof& p, const Theorem& rule, const json& where) const {
    if (!where.is_object()) fail(ErrorKind::BadCommand, "\"where\" must be an object");
    SyntaxTable table = SyntaxTable::of(*p.thy);
    auto vars = vars_of(rule.prop());
    Subst s;
    for (const auto& [key, val] : where.items()) {
      std::string name = key.rfind('?', 0) == 0 ? key.substr(1) : key;
      int index = 0;
      if (auto dot = name.find('.'); dot != std::string::npos) {
        try {
          index = std::stoi(name.substr(dot + 1));
        } catch (const std::exception&) {
          fail(ErrorKind::BadCommand, "bad schematic variable " + key);
        }
        name = name.substr(0, dot);
      }
      const VarKey* found = nullptr;
      for (const auto& v : vars) {
        if (v.name == name && v.index == index) found = &v;
      }
      if (!found) fail(ErrorKind::BadCommand, "rule has no schematic variable " + key);
      if (!val.is_string()) fail(ErrorKind::BadCommand, "instantiation of " + key + " must be a string");
      ParseOptions po;
      po.expected = found->type;
      s.emplace(*found, parse_term(table, val.get<std::string>(), po));
    }
    return instantiate(s, rule);
  }

  Tactic build_tactic(const Proof& p, const json& spec) const {
    if (spec.is_string()) {
      std::string s = spec.get<std::string>();
      if (s == "all") return all_tac();
      if (s == "no") return no_tac();
      if (s == "assumption") return assume_tac(1);
      fail(ErrorKind::BadCommand, "unknown tactic " + s);
    }
    if (!spec.is_object()) fail(ErrorKind::BadCommand, "tactic must be an object");
    std::size_t i = index_field(spec, "subgoal", 1);
    if (auto it = spec.find("resolve"); it != spec.end()) {
      std::vector<Theorem> rules;
      auto add = [&](const json& n) {
        if (!n.is_string()) fail(ErrorKind::BadCommand, "rule names must be strings");
        Theorem r = lookup_rule(p, n.get<std::string>());
        if (auto w = spec.find("where"); w != spec.end()) r = instantiate_where(p, r, *w);
        rules.push_back(r);
      };
      if (it->is_array()) {
        for (const auto& n : *it) add(n);
      } else {
        add(*it);
      }
      if (rules.empty()) fail(ErrorKind::BadCommand, "resolve needs at least one rule");
      return resolve_tac(rules, i);
    }
    if (auto it = spec.find("assumption"); it != spec.end()) {
      if (it->is_number_integer()) return assume_tac(index_field(spec, "assumption", 1));
      return assume_tac(i);
    }
    auto list = [&](const char* key) {
      const json& l = spec.at(key);
      if (!l.is_array() || l.empty()) fail(ErrorKind::BadCommand, std::string(key) + " needs a nonempty list");
      std::vector<Tactic> ts;
      for (const auto& t : l) ts.push_back(build_tactic(p, t));
      return ts;
    };
    if (spec.contains("then")) {
      auto ts = list("then");
      Tactic t = ts[0];
      for (std::size_t k = 1; k < ts.size(); ++k) t = then_(t, ts[k]);
      return t;
    }
    if (spec.contains("orelse")) {
      auto ts = list("orelse");
      Tactic t = ts.back();
      for (std::size_t k = ts.size() - 1; k-- > 0;) t = orelse(ts[k], t);
      return t;
    }
    if (auto it = spec.find("repeat"); it != spec.end()) return repeat(build_tactic(p, *it));
    fail(ErrorKind::BadCommand, "unknown tactic " + spec.dump());
  }

  // --- commands ----------------------------------------------------------

  json load_theory(const json& req) {
    TheoryRef thy;
    if (req.contains("path")) {
      std::string src = read_file(string_field(req, "path"));
      thy = parse_theory(src, [this](const std::string& n) { return find_theory(n); });
    } else if (req.contains("source")) {
      thy = parse_theory(string_field(req, "source"), [this](const std::string& n) { return find_theory(n); });
    } else {
      thy = find_theory(string_field(req, "name"));
    }
    if (auto it = theories.find(thy->name()); it != theories.end() && it->second != thy) {
      fail(ErrorKind::DuplicateName, "theory " + thy->name() + " is already loaded");
    }
    theories[thy->name()] = thy;
    json axioms = json::array();
    for (const auto& a : thy->axioms()) axioms.push_back(a.name);
    return json{{"ok", true}, {"theory", thy->name()}, {"axioms", axioms}};
  }

  json goal(const json& req) {
    Proof p;
    p.thy = find_theory(string_field(req, "thy"));
    SyntaxTable table = SyntaxTable::of(*p.thy);
    Term g = parse_prop(table, string_field(req, "prop"));
    if (auto it = req.find("assumes"); it != req.end()) {
      if (!it->is_array()) fail(ErrorKind::BadCommand, "\"assumes\" must be a list");
      for (std::size_t k = 0; k < it->size(); ++k) {
        const json& a = (*it)[k];
        std::string name = "H" + std::to_string(k + 1);
        std::string src;
        if (a.is_object()) {
          name = string_field(a, "name");
          src = string_field(a, "prop");
        } else if (a.is_string()) {
          src = a.get<std::string>();
        } else {
          fail(ErrorKind::BadCommand, "assumptions must be strings or {name, prop}");
        }
        Term h = parse_prop(table, src);
        p.assumptions.emplace_back(name, rule_form(assume(p.thy, h)));
        p.discharge.push_back(h);
      }
    }
    p.stack.push_back(Frame{initial_state(p.thy, g), Seq<ProofState>::empty(), "goal"});
    long long id = next_id++;
    proofs.emplace(id, std::move(p));
    return state_response(id);
  }

  json apply(const json& req) {
    Proof& p = proof(req);
    long long id = field(req, "proofId").get<long long>();
    Tactic t = build_tactic(p, field(req, "tactic"));
    auto step = t(p.stack.back().state).pull();
    if (!step) {
      return error_response("tactic failed: no unifier", error_kind_name(ErrorKind::TacticFailed));
    }
    p.stack.push_back(Frame{step->first, step->second, field(req, "tactic").dump()});
    return state_response(id);
  }

  json back(const json& req) {
    Proof& p = proof(req);
    long long id = field(req, "proofId").get<long long>();
    Frame& top = p.stack.back();
    auto step = top.rest.pull();
    if (!step) return json{{"ok", false}, {"error", "no more alternatives"}};
    top.state = step->first;
    top.rest = step->second;
    return state_response(id);
  }

  json undo(const json& req) {
    Proof& p = proof(req);
    long long id = field(req, "proofId").get<long long>();
    if (p.stack.size() <= 1) return error_response("nothing to undo", error_kind_name(ErrorKind::BadCommand));
    p.stack.pop_back();
    return state_response(id);
  }

  json qed(const json& req) {
    Proof& p = proof(req);
    std::string name = string_field(req, "name");
    if (find_stored(name) || p.thy->find_axiom(name)) {
      fail(ErrorKind::DuplicateName, "a theorem named " + name + " already exists");
    }
    Theorem th = finalize(p.stack.back().state, p.discharge);
    stored.emplace_back(name, th);
    SyntaxTable table = SyntaxTable::of(*th.theory());
    return json{{"ok", true}, {"name", name}, {"theorem", print_theorem(table, th)}};
  }

  json list_rules(const json& req) {
    TheoryRef thy = find_theory(string_field(req, "thy"));
    SyntaxTable table = SyntaxTable::of(*thy);
    json rules = json::array();
    for (const auto& a : thy->axioms()) {
      rules.push_back(json{{"name", a.name},
                           {"theory", a.origin},
                           {"kind", "axiom"},
                           {"text", print_theorem(table, axiom(thy, a.name))}});
    }
    for (const auto& d : thy->defs()) {
      rules.push_back(json{{"name", d.name},
                           {"theory", d.origin},
                           {"kind", "definition"},
                           {"text", print_theorem(table, definition(thy, d.name))}});
    }
    for (const auto& [n, th] : stored) {
      if (!thy->descends_from(th.theory_name())) continue;
      rules.push_back(
          json{{"name", n}, {"theory", th.theory_name()}, {"kind", "theorem"}, {"text", print_theorem(table, th)}});
    }
    return json{{"ok", true}, {"rules", rules}};
  }

  json dispatch(const json& req) {
    if (!req.is_object()) fail(ErrorKind::BadCommand, "a command must be a JSON object");
    std::string cmd = string_field(req, "cmd");
    if (cmd == "load_theory") return load_theory(req);
    if (cmd == "goal") return goal(req);
    if (cmd == "apply") return apply(req);
    if (cmd == "back") return back(req);
    if (cmd == "undo") return undo(req);
    if (cmd == "state") {
      proof(req);
      return state_response(field(req, "proofId").get<long long>());
    }
    if (cmd == "qed") return qed(req);
    if (cmd == "list_rules") return list_rules(req);
    fail(ErrorKind::BadCommand, "unknown command " + cmd);
  }
};

Session::Session() : impl_(std::make_unique<Impl>()) {}
Session::~Session() = default;

std::string Session::exec(std::string_view request) {
  std::lock_guard<std::mutex> lock(mu_);
  json req;
  try {
    req = json::parse(request);
  } catch (const json::exception&) {
    return json{{"ok", false}, {"error", "parse"}}.dump();
  }
  try {
    return impl_->dispatch(req).dump();
  } catch (const Error& e) {
    return error_response(e).dump();
  } catch (const json::exception& e) {
    return error_response(e.what(), error_kind_name(ErrorKind::BadCommand)).dump();
  } catch (const std::exception& e) {
    return error_response(e.what(), "Internal").dump();
  }
}

std::string Session::exec_line(std::string_view line) {
  std::string req;
  try {
    req = line_to_request(line);
  } catch (const Error& e) {
    return error_response(e).dump();
  }
  return exec(req);
}

TheoryRef Session::theory(const std::string& name) const { return impl_->find_theory(name); }

std::optional<Theorem> Session::stored(const std::string& name) const {
  if (const Theorem* th = impl_->find_stored(name)) return *th;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

json word_tactic(const std::vector<std::string>& w, std::size_t from) {
  if (from >= w.size()) fail(ErrorKind::BadCommand, "apply needs a tactic");
  const std::string& t = w[from];
  std::vector<std::string> rest(w.begin() + static_cast<long>(from) + 1, w.end());
  json spec;
  if (!rest.empty() && all_digits(rest.back())) {
    spec["subgoal"] = std::stoll(rest.back());
    rest.pop_back();
  }
  if (t == "resolve") {
    if (rest.empty()) fail(ErrorKind::BadCommand, "resolve needs a rule name");
    spec["resolve"] = rest;
  } else if (t == "assumption" || t == "assume") {
    if (!rest.empty()) fail(ErrorKind::BadCommand, "assumption takes only a subgoal number");
    spec["assumption"] = true;
  } else {
    fail(ErrorKind::BadCommand, "unknown tactic " + t + " (use JSON for compound tactics)");
  }
  return spec;
}

}  // namespace

std::string line_to_request(std::string_view raw) {
  std::string line = trim(raw);
  if (line.empty() || line[0] == '{') return line;
  std::size_t sp = line.find_first_of(" \t");
  std::string cmd = line.substr(0, sp);
  std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp));
  auto w = words(rest);
  json req{{"cmd", cmd}};
  if (cmd == "load_theory") {
    if (rest.empty()) fail(ErrorKind::BadCommand, "load_theory needs a path or theory name");
    std::string arg = unquote(rest);
    if (arg.find('/') != std::string::npos || arg.find('.') != std::string::npos) {
      req["path"] = arg;
    } else {
      req["name"] = arg;
    }
  } else if (cmd == "goal") {
    if (w.size() < 2) fail(ErrorKind::BadCommand, "usage: goal THEORY PROP");
    req["thy"] = w[0];
    req["prop"] = unquote(rest.substr(rest.find(w[0]) + w[0].size()));
  } else if (cmd == "apply") {
    std::size_t from = 0;
    if (!w.empty() && w[0].size() > 1 && w[0][0] == '#') {
      req["proofId"] = std::stoll(w[0].substr(1));
      from = 1;
    }
    std::string tail = trim(rest.substr(from ? rest.find(w[0]) + w[0].size() : 0));
    req["tactic"] = !tail.empty() && tail[0] == '{' ? json::parse(tail) : word_tactic(w, from);
  } else if (cmd == "back" || cmd == "undo" || cmd == "state") {
    if (!w.empty()) req["proofId"] = std::stoll(w[0][0] == '#' ? w[0].substr(1) : w[0]);
  } else if (cmd == "qed") {
    if (w.empty()) fail(ErrorKind::BadCommand, "usage: qed NAME");
    req["name"] = w.back();
    if (w.size() > 1) req["proofId"] = std::stoll(w[0][0] == '#' ? w[0].substr(1) : w[0]);
  } else if (cmd == "list_rules") {
    if (w.size() != 1) fail(ErrorKind::BadCommand, "usage: list_rules THEORY");
    req["thy"] = w[0];
  } else {
    fail(ErrorKind::BadCommand, "unknown command " + cmd);
  }
  return req.dump();
}

bool response_ok(std::string_view response) {
  try {
    json r = json::parse(response);
    return r.value("ok", false);
  } catch (const json::exception&) {
    return false;
  }
}

bool serve_stdio(Session& session, std::istream& in, std::ostream& out, bool stop_on_error) {
  // Word-form commands without an explicit proof id refer to the latest proof.
  long long current = 0;
  for (std::string line; std::getline(in, line);) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::string resp;
    try {
      std::string req_text = line_to_request(t);
      json req = json::parse(req_text);
      std::string cmd = req.value("cmd", "");
      if (!req.contains("proofId") && current > 0 &&
          (cmd == "apply" || cmd == "back" || cmd == "undo" || cmd == "state" || cmd == "qed")) {
        req["proofId"] = current;
      }
      resp = session.exec(req.dump());
      json r = json::parse(resp);
      if (cmd == "goal" && r.value("ok", false)) current = r["proofId"].get<long long>();
    } catch (const Error& e) {
      resp = error_response(e).dump();
    } catch (const json::exception&) {
      resp = json{{"ok", false}, {"error", "parse"}}.dump();
    } catch (const std::exception& e) {
      resp = error_response(e.what(), error_kind_name(ErrorKind::BadCommand)).dump();
    }
    out << resp << '\n' << std::flush;
    if (stop_on_error && !response_ok(resp)) return false;
  }
  return true;
}

void serve_http(Session& session, int port, const std::string& host) {
  httplib::Server svr;
  svr.Post("/api", [&session](const httplib::Request& req, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(session.exec(req.body), "application/json");
  });
  svr.Options("/api", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "POST, OPTIONS");
  });
  if (!svr.listen(host, port)) fail(ErrorKind::Io, "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace metaproof
