#include "metaproof/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <sstream>

#include "metaproof/error.hpp"
#include "metaproof/kernel.hpp"

namespace metaproof {

SyntaxTable SyntaxTable::of(const Theory& thy) { return SyntaxTable{thy.consts(), thy.types()}; }

const ConstInfo* SyntaxTable::find(const std::string& name) const {
  auto it = consts.find(name);
  return it == consts.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void parse_error(const std::string& msg, std::size_t pos) {
  throw Error(ErrorKind::ParseError, msg, pos);
}

[[noreturn]] void type_error(const std::string& msg, std::size_t pos) {
  throw Error(ErrorKind::IllTyped, msg, pos);
}

bool is_symbol_char(char c) {
  static const std::string chars = "!#$%&*+-/:<=>@^|~\\";
  return chars.find(c) != std::string::npos;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_symbolic(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_symbol_char);
}

// ---------------------------------------------------------------------------
// Lexer

struct Tok {
  enum class K { Ident, Var, Sym, Punct, End };
  K k = K::End;
  std::string text;
  int index = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  Lexer(std::string_view src, const SyntaxTable& table) : src_(src) {
    symbols_ = {"::", "=>", "%"};
    for (const auto& [name, info] : table.consts) {
      if (is_symbolic(name)) symbols_.push_back(name);
    }
    std::sort(symbols_.begin(), symbols_.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }

  std::vector<Tok> run() {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (true) {
      while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i]))) ++i;
      if (i >= src_.size()) break;
      char c = src_[i];
      Tok t;
      t.pos = i;
      if (is_ident_start(c)) {
        std::size_t j = i;
        while (j < src_.size() && is_ident_char(src_[j])) ++j;
        t.k = Tok::K::Ident;
        t.text = std::string(src_.substr(i, j - i));
        i = j;
      } else if (c == '?') {
        std::size_t j = i + 1;
        if (j >= src_.size() || !is_ident_start(src_[j])) parse_error("expected a name after '?'", i);
        while (j < src_.size() && is_ident_char(src_[j])) ++j;
        t.k = Tok::K::Var;
        t.text = std::string(src_.substr(i + 1, j - i - 1));
        if (j + 1 < src_.size() && src_[j] == '.' && std::isdigit(static_cast<unsigned char>(src_[j + 1]))) {
          std::size_t k = j + 1;
          while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
          std::string digits(src_.substr(j + 1, k - j - 1));
          if (digits.size() > 9) parse_error("schematic index too large", j + 1);
          t.index = std::stoi(digits);
          j = k;
        }
        i = j;
      } else if (c == '(' || c == ')' || c == ',' || c == '.') {
        t.k = Tok::K::Punct;
        t.text = std::string(1, c);
        ++i;
      } else if (is_symbol_char(c)) {
        std::string_view rest = src_.substr(i);
        const std::string* match = nullptr;
        for (const auto& s : symbols_) {
          if (rest.substr(0, s.size()) == s) {
            match = &s;
            break;
          }
        }
        if (!match) parse_error("unknown symbol", i);
        t.k = Tok::K::Sym;
        t.text = *match;
        i += match->size();
      } else {
        parse_error(std::string("unexpected character '") + c + "'", i);
      }
      out.push_back(std::move(t));
    }
    Tok end;
    end.pos = src_.size();
    out.push_back(end);
    return out;
  }

 private:
  std::string_view src_;
  std::vector<std::string> symbols_;
};

// ---------------------------------------------------------------------------
// Syntax tree before type inference

struct Ast;
using AstP = std::shared_ptr<Ast>;

struct Ast {
  enum class K { Name, Var, Abs, App, Annot };
  K k = K::Name;
  std::string name;
  int index = 0;
  std::size_t pos = 0;
  bool force_const = false;
  std::optional<Type> annot;
  AstP a, b;
  // Filled in by inference.
  int ty = -1;
  enum class Res { Unresolved, Bound, Const, Free } res = Res::Unresolved;
  int bound_level = 0;  // scope position of the binder for Res::Bound
};

AstP mk_name(std::string n, std::size_t pos, bool force = false) {
  auto p = std::make_shared<Ast>();
  p->k = Ast::K::Name;
  p->name = std::move(n);
  p->pos = pos;
  p->force_const = force;
  return p;
}

AstP mk_app(AstP f, AstP x, std::size_t pos) {
  auto p = std::make_shared<Ast>();
  p->k = Ast::K::App;
  p->a = std::move(f);
  p->b = std::move(x);
  p->pos = pos;
  return p;
}

AstP mk_abs(std::string n, std::optional<Type> ty, AstP body, std::size_t pos) {
  auto p = std::make_shared<Ast>();
  p->k = Ast::K::Abs;
  p->name = std::move(n);
  p->annot = std::move(ty);
  p->a = std::move(body);
  p->pos = pos;
  return p;
}

class Parser {
 public:
  Parser(std::vector<Tok> toks, const SyntaxTable& table) : toks_(std::move(toks)), table_(table) {}

  AstP parse_all() {
    AstP t = expr(0);
    if (peek().k != Tok::K::End) parse_error("unexpected '" + peek().text + "'", peek().pos);
    return t;
  }

  Type parse_type_all() {
    Type t = type();
    if (peek().k != Tok::K::End) parse_error("unexpected '" + peek().text + "' in type", peek().pos);
    return t;
  }

 private:
  const Tok& peek() const { return toks_[i_]; }
  const Tok& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool is_punct(const char* p) const { return peek().k == Tok::K::Punct && peek().text == p; }
  bool is_sym(const char* s) const { return peek().k == Tok::K::Sym && peek().text == s; }
  void expect_punct(const char* p) {
    if (!is_punct(p)) {
      std::string got = peek().k == Tok::K::End ? "end of input" : "'" + peek().text + "'";
      parse_error(std::string("expected '") + p + "' but found " + got, peek().pos);
    }
    next();
  }

  const ConstInfo* op_info(const Tok& t) const {
    if (t.k != Tok::K::Sym && t.k != Tok::K::Ident) return nullptr;
    return table_.find(t.text);
  }
  bool is_infix(const Tok& t) const {
    const ConstInfo* c = op_info(t);
    return c && c->fixity.is_infix();
  }
  bool is_binder(const Tok& t) const {
    if (t.k == Tok::K::Sym && t.text == "%") return true;
    const ConstInfo* c = op_info(t);
    return c && c->fixity.is_binder();
  }

  AstP expr(int minprec) {
    AstP lhs = prefix();
    int last_nonassoc = -1;
    while (is_infix(peek())) {
      const Tok& op = peek();
      const Fixity& fx = table_.find(op.text)->fixity;
      int p = fx.precedence;
      if (p < minprec) break;
      if (p == last_nonassoc) parse_error("operator '" + op.text + "' is not associative", op.pos);
      Tok optok = next();
      int rp = fx.kind == Fixity::Kind::InfixR ? p : p + 1;
      AstP rhs = expr(rp);
      lhs = mk_app(mk_app(mk_name(optok.text, optok.pos, true), lhs, optok.pos), rhs, optok.pos);
      last_nonassoc = fx.kind == Fixity::Kind::Infix ? p : -1;
    }
    return lhs;
  }

  AstP prefix() {
    if (is_binder(peek())) return binder();
    return postfix(atom());
  }

  AstP binder() {
    Tok b = next();
    std::vector<std::tuple<std::string, std::optional<Type>, std::size_t>> names;
    while (peek().k == Tok::K::Ident) {
      Tok n = next();
      std::optional<Type> ty;
      if (is_sym("::")) {
        next();
        ty = type();
      }
      names.emplace_back(n.text, ty, n.pos);
    }
    if (names.empty()) parse_error("expected a bound variable name", peek().pos);
    expect_punct(".");
    AstP body = expr(0);
    for (auto it = names.rbegin(); it != names.rend(); ++it) {
      AstP abs = mk_abs(std::get<0>(*it), std::get<1>(*it), body, std::get<2>(*it));
      body = b.text == "%" ? abs : mk_app(mk_name(b.text, b.pos, true), abs, b.pos);
    }
    return body;
  }

  AstP atom() {
    const Tok& t = peek();
    if (t.k == Tok::K::Ident) {
      if (is_infix(t)) parse_error("operator '" + t.text + "' needs a left operand", t.pos);
      Tok n = next();
      return mk_name(n.text, n.pos);
    }
    if (t.k == Tok::K::Var) {
      Tok v = next();
      auto p = std::make_shared<Ast>();
      p->k = Ast::K::Var;
      p->name = v.text;
      p->index = v.index;
      p->pos = v.pos;
      return p;
    }
    if (is_punct("(")) {
      std::size_t open = next().pos;
      const Tok& inner = peek();
      if ((inner.k == Tok::K::Sym || inner.k == Tok::K::Ident) && table_.find(inner.text) &&
          table_.find(inner.text)->fixity.kind != Fixity::Kind::Prefix && i_ + 1 < toks_.size() &&
          toks_[i_ + 1].k == Tok::K::Punct && toks_[i_ + 1].text == ")") {
        Tok op = next();
        next();
        return mk_name(op.text, open, true);
      }
      AstP e = expr(0);
      expect_punct(")");
      return e;
    }
    if (t.k == Tok::K::End) parse_error("unexpected end of input", t.pos);
    parse_error("unexpected '" + t.text + "'", t.pos);
  }

  AstP postfix(AstP head) {
    for (;;) {
      if (is_punct("(")) {
        std::size_t pos = next().pos;
        if (is_punct(")")) parse_error("empty argument list", peek().pos);
        head = mk_app(head, expr(0), pos);
        while (is_punct(",")) {
          next();
          head = mk_app(head, expr(0), pos);
        }
        expect_punct(")");
      } else if (is_sym("::")) {
        std::size_t pos = next().pos;
        auto p = std::make_shared<Ast>();
        p->k = Ast::K::Annot;
        p->annot = type();
        p->a = head;
        p->pos = pos;
        head = p;
      } else {
        return head;
      }
    }
  }

  Type type() {
    Type lhs = type_atom();
    if (is_sym("=>")) {
      next();
      return Type::fun(lhs, type());
    }
    return lhs;
  }

  Type type_atom() {
    if (is_punct("(")) {
      next();
      Type t = type();
      expect_punct(")");
      return t;
    }
    const Tok& t = peek();
    if (t.k != Tok::K::Ident) {
      parse_error(t.k == Tok::K::End ? "expected a type" : "expected a type, found '" + t.text + "'", t.pos);
    }
    if (!table_.types.count(t.text)) parse_error("unknown type " + t.text, t.pos);
    next();
    return Type::basic(t.text);
  }

  std::vector<Tok> toks_;
  std::size_t i_ = 0;
  const SyntaxTable& table_;
};

// ---------------------------------------------------------------------------
// Type inference by unification over type variables

class Infer {
 public:
  explicit Infer(const SyntaxTable& table, const ParseOptions& opts) : table_(table), opts_(opts) {
    for (const auto& [n, ty] : opts.bound_context) outer_.push_back({n, from_type(ty)});
    for (const auto& [n, ty] : opts.free_types) frees_[n] = from_type(ty);
  }

  int fresh() {
    nodes_.push_back(Node{});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int from_type(const Type& t, int poly = -1) {
    if (t.is_basic()) {
      if (t.name() == "'a" && poly >= 0) return poly;
      int n = fresh();
      nodes_[n].kind = Node::Basic;
      nodes_[n].name = t.name();
      return n;
    }
    int d = from_type(t.dom(), poly);
    int c = from_type(t.cod(), poly);
    return fun(d, c);
  }

  int fun(int d, int c) {
    int n = fresh();
    nodes_[n].kind = Node::Fun;
    nodes_[n].dom = d;
    nodes_[n].cod = c;
    return n;
  }

  int find(int n) {
    while (nodes_[n].kind == Node::Link) n = nodes_[n].dom;
    return n;
  }

  bool occurs(int v, int n) {
    n = find(n);
    if (n == v) return true;
    if (nodes_[n].kind == Node::Fun) return occurs(v, nodes_[n].dom) || occurs(v, nodes_[n].cod);
    return false;
  }

  bool unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    if (nodes_[a].kind == Node::Free) {
      if (occurs(a, b)) return false;
      nodes_[a].kind = Node::Link;
      nodes_[a].dom = b;
      return true;
    }
    if (nodes_[b].kind == Node::Free) return unify(b, a);
    if (nodes_[a].kind != nodes_[b].kind) return false;
    if (nodes_[a].kind == Node::Basic) return nodes_[a].name == nodes_[b].name;
    return unify(nodes_[a].dom, nodes_[b].dom) && unify(nodes_[a].cod, nodes_[b].cod);
  }

  std::optional<Type> resolve(int n) {
    n = find(n);
    const Node& node = nodes_[n];
    if (node.kind == Node::Free) return std::nullopt;
    if (node.kind == Node::Basic) return Type::basic(node.name);
    auto d = resolve(node.dom);
    auto c = resolve(node.cod);
    if (!d || !c) return std::nullopt;
    return Type::fun(*d, *c);
  }

  std::string show(int n) {
    n = find(n);
    const Node& node = nodes_[n];
    if (node.kind == Node::Free) return "'t" + std::to_string(n);
    if (node.kind == Node::Basic) return node.name;
    std::string l = show(node.dom);
    if (nodes_[find(node.dom)].kind == Node::Fun) l = "(" + l + ")";
    return l + " => " + show(node.cod);
  }

  int infer(Ast& a) {
    switch (a.k) {
      case Ast::K::Name: {
        if (!a.force_const) {
          for (std::size_t i = scope_.size(); i-- > 0;) {
            if (scope_[i].first == a.name) {
              a.res = Ast::Res::Bound;
              a.bound_level = static_cast<int>(i);
              return a.ty = scope_[i].second;
            }
          }
          for (std::size_t i = 0; i < outer_.size(); ++i) {
            if (outer_[i].first == a.name) {
              a.res = Ast::Res::Bound;
              a.bound_level = -1 - static_cast<int>(i);
              return a.ty = outer_[i].second;
            }
          }
        }
        if (const ConstInfo* c = table_.find(a.name)) {
          a.res = Ast::Res::Const;
          return a.ty = from_type(c->type, c->polymorphic ? fresh() : -1);
        }
        if (a.force_const) parse_error("unknown constant " + a.name, a.pos);
        a.res = Ast::Res::Free;
        auto it = frees_.find(a.name);
        if (it == frees_.end()) it = frees_.emplace(a.name, fresh()).first;
        return a.ty = it->second;
      }
      case Ast::K::Var: {
        auto key = std::make_pair(a.name, a.index);
        auto it = vars_.find(key);
        if (it == vars_.end()) it = vars_.emplace(key, fresh()).first;
        return a.ty = it->second;
      }
      case Ast::K::Abs: {
        int bt = a.annot ? from_type(*a.annot) : fresh();
        a.bound_level = bt;
        scope_.emplace_back(a.name, bt);
        int body = infer(*a.a);
        scope_.pop_back();
        return a.ty = fun(bt, body);
      }
      case Ast::K::App: {
        int f = infer(*a.a);
        int x = infer(*a.b);
        int r = fresh();
        if (!unify(f, fun(x, r))) {
          int ff = find(f);
          if (nodes_[ff].kind == Node::Fun) {
            type_error("argument has type " + show(x) + " but " + show(nodes_[ff].dom) + " was expected",
                       a.b->pos);
          }
          type_error("cannot apply a term of type " + show(f), a.pos);
        }
        return a.ty = r;
      }
      case Ast::K::Annot: {
        int t = infer(*a.a);
        if (!unify(t, from_type(*a.annot))) {
          type_error("term has type " + show(t) + ", not " + a.annot->to_string(), a.a->pos);
        }
        return a.ty = t;
      }
    }
    return -1;
  }

  Type need(int n, std::size_t pos, const std::string& what) {
    auto t = resolve(n);
    if (!t) type_error("cannot determine the type of " + what + "; annotate it with ::", pos);
    return *t;
  }

  Term build(const Ast& a, int depth) {
    switch (a.k) {
      case Ast::K::Name:
        if (a.res == Ast::Res::Bound) {
          if (a.bound_level >= 0) return Term::bound(depth - 1 - a.bound_level);
          return Term::bound(depth + (-1 - a.bound_level));
        }
        if (a.res == Ast::Res::Const) return Term::constant(a.name, need(a.ty, a.pos, a.name));
        return Term::free(a.name, need(a.ty, a.pos, a.name));
      case Ast::K::Var:
        return Term::var(a.name, a.index, need(a.ty, a.pos, "?" + a.name));
      case Ast::K::Abs:
        return Term::abs(a.name, need(a.bound_level, a.pos, a.name), build(*a.a, depth + 1));
      case Ast::K::App:
        return Term::app(build(*a.a, depth), build(*a.b, depth));
      case Ast::K::Annot:
        return build(*a.a, depth);
    }
    return Term::bound(0);
  }

 private:
  struct Node {
    enum Kind { Free, Link, Basic, Fun } kind = Free;
    std::string name;
    int dom = -1;
    int cod = -1;
  };

  const SyntaxTable& table_;
  const ParseOptions& opts_;
  std::vector<Node> nodes_;
  std::vector<std::pair<std::string, int>> scope_;
  std::vector<std::pair<std::string, int>> outer_;
  std::map<std::string, int> frees_;
  std::map<std::pair<std::string, int>, int> vars_;
};

}  // namespace

Term parse_term(const SyntaxTable& table, std::string_view src, const ParseOptions& opts) {
  Parser p(Lexer(src, table).run(), table);
  AstP ast = p.parse_all();
  Infer inf(table, opts);
  int root = inf.infer(*ast);
  if (opts.expected && !inf.unify(root, inf.from_type(*opts.expected))) {
    throw Error(ErrorKind::IllTyped,
                "expected type " + opts.expected->to_string() + " but the term has type " + inf.show(root), 0);
  }
  Term t = inf.build(*ast, 0);
  return opts.normalize ? norm(t) : t;
}

Term parse_prop(const SyntaxTable& table, std::string_view src) {
  ParseOptions o;
  o.expected = prop_type();
  return parse_term(table, src, o);
}

Type parse_type(const SyntaxTable& table, std::string_view src) {
  Parser p(Lexer(src, table).run(), table);
  return p.parse_type_all();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

constexpr int kAtomPrec = 1000;

class Printer {
 public:
  Printer(const SyntaxTable& table, const PrintOptions& opts, const Term& root) : table_(table), opts_(opts) {
    taken_ = symbol_names(root);
    for (const auto& [name, info] : table.consts) taken_.insert(name);
    for (auto it = opts.bound_names.rbegin(); it != opts.bound_names.rend(); ++it) scope_.push_back(*it);
  }

  std::string print(const Term& t, int prec, bool tail) {
    switch (t.kind()) {
      case TermKind::Const: {
        const ConstInfo* c = table_.find(t.name());
        bool op = c && (c->fixity.is_infix() || c->fixity.is_binder());
        std::string s = op ? "(" + t.name() + ")" : t.name();
        if (opts_.annotate && c && c->polymorphic) return "(" + s + "::" + print_type(t.type()) + ")";
        return s;
      }
      case TermKind::Free:
        if (opts_.annotate) return "(" + t.name() + "::" + print_type(t.type()) + ")";
        return t.name();
      case TermKind::Var: {
        std::string s = "?" + t.name();
        if (t.index() != 0) s += "." + std::to_string(t.index());
        if (opts_.annotate) return "(" + s + "::" + print_type(t.type()) + ")";
        return s;
      }
      case TermKind::Bound: {
        auto d = static_cast<int>(scope_.size());
        if (t.offset() < d) return scope_[static_cast<std::size_t>(d - 1 - t.offset())];
        return "B." + std::to_string(t.offset() - d);
      }
      case TermKind::Abs:
        return binder_chain(Term::bound(0), t, prec, tail);
      case TermKind::App:
        return application(t, prec, tail);
    }
    return {};
  }

 private:
  std::string fresh_name(const std::string& hint) {
    auto used = [&](const std::string& n) {
      return taken_.count(n) || std::find(scope_.begin(), scope_.end(), n) != scope_.end();
    };
    if (hint.empty()) {
      for (const char* c : {"x", "y", "z", "u", "v", "w"}) {
        if (!used(c)) return c;
      }
    }
    std::string base = hint.empty() ? "x" : hint;
    if (!used(base)) return base;
    for (int k = 1;; ++k) {
      std::string n = base + std::to_string(k);
      if (!used(n)) return n;
    }
  }

  static std::string paren(const std::string& s, bool p) { return p ? "(" + s + ")" : s; }

  std::string binder_chain(const Term& binder, const Term& first, int prec, bool tail) {
    // `binder` is the binder constant, or a Bound placeholder for %; `first`
    // is the abstraction, or the possibly eta-contracted argument.
    const bool lambda = !binder.is_const();
    const std::string sym = lambda ? "%" : binder.name();
    std::vector<std::string> names;
    Term cur = first;
    Term cur_binder = binder;
    std::size_t pushed = 0;
    std::string out;
    for (;;) {
      Type vt;
      std::string hint;
      Term body = cur;
      if (cur.is_abs()) {
        vt = cur.type();
        hint = cur.name();
        body = cur.body();
      } else {
        vt = cur_binder.type().dom().dom();
        body = Term::app(incr_bound(cur, 1), Term::bound(0));
      }
      std::string n = fresh_name(hint);
      scope_.push_back(n);
      ++pushed;
      names.push_back(opts_.annotate ? n + "::" + print_type(vt) : n);
      if (lambda && body.is_abs()) {
        cur = body;
      } else if (!lambda && sym == "!!" && body.is_app() && body.fun().is_const() && body.fun().name() == sym) {
        cur_binder = body.fun();
        cur = body.arg();
      } else {
        out = body_text(sym, names, body);
        break;
      }
    }
    for (std::size_t k = 0; k < pushed; ++k) scope_.pop_back();
    return paren(out, !tail || prec > kAtomPrec);
  }

  std::string body_text(const std::string& sym, const std::vector<std::string>& names, const Term& body) {
    std::string s = sym;
    if (is_ident_start(sym[0])) s += " ";
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) s += " ";
      s += names[i];
    }
    return s + ". " + print(body, 0, true);
  }

  std::string application(const Term& t, int prec, bool tail) {
    auto [head, args] = strip_comb(t);
    if (head.is_const()) {
      const ConstInfo* c = table_.find(head.name());
      if (c && c->fixity.is_infix() && args.size() >= 2) {
        std::string s = infix(head.name(), c->fixity, args[0], args[1], args.size() == 2 ? prec : kAtomPrec + 1,
                              args.size() == 2 && tail);
        if (args.size() == 2) return s;
        return paren_if_needed(s) + arg_list(args, 2);
      }
      if (c && c->fixity.is_binder() && !args.empty()) {
        if (args.size() == 1) return binder_chain(head, args[0], prec, tail);
        return "(" + binder_chain(head, args[0], 0, true) + ")" + arg_list(args, 1);
      }
    }
    std::string h = print(head, kAtomPrec + 1, false);
    if (head.is_abs()) h = paren_if_needed(h);
    return h + arg_list(args, 0);
  }

  static std::string paren_if_needed(const std::string& s) {
    if (!s.empty() && s.front() == '(' && s.back() == ')') {
      int depth = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && i + 1 < s.size()) return "(" + s + ")";
      }
      return s;
    }
    return "(" + s + ")";
  }

  std::string arg_list(const std::vector<Term>& args, std::size_t from) {
    std::string s = "(";
    for (std::size_t i = from; i < args.size(); ++i) {
      if (i > from) s += ", ";
      s += print(args[i], 0, true);
    }
    return s + ")";
  }

  std::string infix(const std::string& op, const Fixity& fx, const Term& l, const Term& r, int prec, bool tail) {
    int p = fx.precedence;
    bool par = p < prec;
    bool inner_tail = par ? true : tail;
    int lp = fx.kind == Fixity::Kind::InfixL ? p : p + 1;
    int rp = fx.kind == Fixity::Kind::InfixR ? p : p + 1;
    std::string s = print(l, lp, false) + " " + op + " " + print(r, rp, inner_tail);
    return paren(s, par);
  }

  const SyntaxTable& table_;
  const PrintOptions& opts_;
  std::set<std::string> taken_;
  std::vector<std::string> scope_;  // innermost last
};

}  // namespace

std::string print_term(const SyntaxTable& table, const Term& t, const PrintOptions& opts) {
  Printer p(table, opts, t);
  return p.print(t, 0, true);
}

std::string print_type(const Type& t) { return t.to_string(); }

std::string print_theorem(const SyntaxTable& table, const Theorem& th) {
  Term prop = th.prop();
  for (auto it = th.flexflex().rbegin(); it != th.flexflex().rend(); ++it) {
    prop = mk_implies(mk_equals(it->lhs, it->rhs), prop);
  }
  std::string s;
  for (std::size_t i = 0; i < th.hyps().size(); ++i) {
    if (i) s += ", ";
    s += print_term(table, th.hyps()[i]);
  }
  if (!s.empty()) s += " |- ";
  return s + print_term(table, prop);
}

// ---------------------------------------------------------------------------
// Theory files

TheoryRef resolve_builtin(const std::string& name) { return builtin(name); }

namespace {

struct FTok {
  enum class K { Ident, Number, String, Sym, End };
  K k = K::End;
  std::string text;
  std::size_t pos = 0;
};

std::vector<FTok> lex_file(std::string_view src) {
  std::vector<FTok> out;
  std::size_t i = 0;
  while (true) {
    while (i < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[i]))) {
        ++i;
      } else if (src.substr(i, 2) == "(*") {
        std::size_t start = i;
        int depth = 0;
        while (i < src.size()) {
          if (src.substr(i, 2) == "(*") {
            ++depth;
            i += 2;
          } else if (src.substr(i, 2) == "*)") {
            --depth;
            i += 2;
            if (depth == 0) break;
          } else {
            ++i;
          }
        }
        if (depth != 0) parse_error("unterminated comment", start);
      } else {
        break;
      }
    }
    if (i >= src.size()) break;
    FTok t;
    t.pos = i;
    char c = src[i];
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      t.k = FTok::K::Ident;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.k = FTok::K::Number;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (c == '"') {
      std::size_t j = src.find('"', i + 1);
      if (j == std::string_view::npos) parse_error("unterminated string", i);
      t.k = FTok::K::String;
      t.text = std::string(src.substr(i + 1, j - i - 1));
      i = j + 1;
    } else if (c == ';' || c == '(' || c == ')' || c == ',') {
      t.k = FTok::K::Sym;
      t.text = std::string(1, c);
      ++i;
    } else if (is_symbol_char(c)) {
      std::size_t j = i;
      while (j < src.size() && is_symbol_char(src[j])) ++j;
      t.k = FTok::K::Sym;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else {
      parse_error(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back(std::move(t));
  }
  FTok end;
  end.pos = src.size();
  out.push_back(end);
  return out;
}

class FileParser {
 public:
  FileParser(std::string_view src, const TheoryResolver& resolve) : src_(src), toks_(lex_file(src)), resolve_(resolve) {}

  TheoryRef run() {
    keyword("theory");
    decls_.name = ident("theory name");
    std::vector<TheoryRef> parents;
    if (at_ident("extends")) {
      next();
      while (peek().k == FTok::K::Ident && !is_section(peek().text) && peek().text != "end") {
        FTok n = next();
        try {
          parents.push_back(resolve_(n.text));
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::UnknownTheory) throw Error(ErrorKind::UnknownTheory, e.what(), n.pos);
          throw;
        }
      }
      if (parents.empty()) parse_error("expected a parent theory name", peek().pos);
    }
    if (at_sym(";") || at_sym("=")) next();
    for (const auto& p : parents) {
      types_.insert(p->types().begin(), p->types().end());
    }
    if (parents.empty()) types_.insert("prop");

    while (peek().k != FTok::K::End) {
      if (at_ident("end")) {
        next();
        if (peek().k != FTok::K::End) parse_error("unexpected text after end", peek().pos);
        break;
      }
      if (at_ident("types")) {
        next();
        types_section();
      } else if (at_ident("consts")) {
        next();
        consts_section();
      } else if (at_ident("axioms")) {
        next();
        axioms_section(false);
      } else if (at_ident("defs")) {
        next();
        axioms_section(true);
      } else {
        parse_error("expected types, consts, axioms, defs or end", peek().pos);
      }
    }
    bool empty = decls_.types.empty() && decls_.consts.empty() && decls_.axioms.empty() && decls_.defs.empty();
    if (parents.empty() && empty && decls_.name == "Pure") return Theory::pure();
    return Theory::extend(parents, decls_);
  }

 private:
  static bool is_section(const std::string& s) {
    return s == "types" || s == "consts" || s == "axioms" || s == "defs";
  }
  const FTok& peek() const { return toks_[i_]; }
  FTok next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool at_ident(const char* s) const { return peek().k == FTok::K::Ident && peek().text == s; }
  bool at_sym(const char* s) const { return peek().k == FTok::K::Sym && peek().text == s; }
  bool entry_ends() const {
    return peek().k == FTok::K::End || (peek().k == FTok::K::Ident && (is_section(peek().text) || peek().text == "end"));
  }

  [[noreturn]] void expected(const std::string& what) {
    std::string got = peek().k == FTok::K::End ? "end of input" : "'" + peek().text + "'";
    parse_error("expected " + what + " but found " + got, peek().pos);
  }

  void keyword(const char* k) {
    if (!at_ident(k)) expected(std::string("'") + k + "'");
    next();
  }
  void sym(const char* s) {
    if (!at_sym(s)) expected(std::string("'") + s + "'");
    next();
  }
  std::string ident(const std::string& what) {
    if (peek().k != FTok::K::Ident) expected(what);
    return next().text;
  }

  void types_section() {
    while (peek().k == FTok::K::Ident && !entry_ends()) {
      FTok t = next();
      decls_.types.push_back(t.text);
      types_.insert(t.text);
      if (at_sym(",")) next();
    }
    sym(";");
  }

  Type file_type() {
    Type lhs = file_type_atom();
    if (at_sym("=>")) {
      next();
      return Type::fun(lhs, file_type());
    }
    return lhs;
  }

  Type file_type_atom() {
    if (at_sym("(")) {
      next();
      Type t = file_type();
      sym(")");
      return t;
    }
    if (peek().k != FTok::K::Ident) expected("a type");
    if (!types_.count(peek().text)) parse_error("unknown type " + peek().text, peek().pos);
    return Type::basic(next().text);
  }

  void consts_section() {
    while (!entry_ends()) {
      FTok n = next();
      if (n.k != FTok::K::Ident && n.k != FTok::K::String && n.k != FTok::K::Sym) {
        parse_error("expected a constant name", n.pos);
      }
      if (n.text.empty()) parse_error("empty constant name", n.pos);
      sym("::");
      Type ty = Type::basic("prop");
      if (peek().k == FTok::K::String) {
        FTok s = next();
        SyntaxTable tt;
        tt.types = types_;
        try {
          ty = parse_type(tt, s.text);
        } catch (const Error& e) {
          throw Error(e.kind(), e.what(), s.pos + 1 + (e.has_offset() ? e.offset() : 0));
        }
      } else {
        ty = file_type();
      }
      Fixity fx;
      if (at_ident("infixl") || at_ident("infixr") || at_ident("infix")) {
        std::string k = next().text;
        if (peek().k != FTok::K::Number) expected("a precedence");
        FTok num = next();
        if (num.text.size() > 4) parse_error("precedence out of range", num.pos);
        int p = std::stoi(num.text);
        fx = k == "infixl" ? Fixity::infixl(p) : k == "infixr" ? Fixity::infixr(p) : Fixity::infix(p);
      } else if (at_ident("binder")) {
        next();
        fx = Fixity::binder();
      }
      sym(";");
      decls_.consts.push_back(ConstDecl{n.text, ty, fx});
    }
  }

  void axioms_section(bool defs) {
    while (!entry_ends()) {
      std::string name = ident(defs ? "a definition name" : "an axiom name");
      sym(":");
      if (peek().k != FTok::K::String) expected("a quoted proposition");
      FTok s = next();
      sym(";");
      if (defs) {
        decls_.defs.push_back(DefDecl{name, s.text, s.pos + 1});
      } else {
        decls_.axioms.push_back(AxiomDecl{name, s.text, s.pos + 1});
      }
    }
  }

  std::string_view src_;
  std::vector<FTok> toks_;
  std::size_t i_ = 0;
  const TheoryResolver& resolve_;
  TheoryDecls decls_;
  std::set<std::string> types_;
};

}  // namespace

TheoryRef parse_theory(std::string_view src, const TheoryResolver& resolve) {
  return FileParser(src, resolve).run();
}

}  // namespace metaproof
