#include "metaproof/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "metaproof/error.hpp"

namespace metaproof {

// ---------------------------------------------------------------------------
// Types

struct Type::Node {
  std::string name;  // empty for function types
  std::optional<Type> dom;
  std::optional<Type> cod;
};

Type Type::basic(std::string name) {
  auto n = std::make_shared<Node>();
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::fun(Type dom, Type cod) {
  auto n = std::make_shared<Node>();
  n->dom = std::move(dom);
  n->cod = std::move(cod);
  return Type(std::move(n));
}

Type Type::fun(std::span<const Type> args, Type result) {
  Type t = std::move(result);
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = fun(*it, t);
  return t;
}

bool Type::is_fun() const { return node_->dom.has_value(); }
const std::string& Type::name() const { return node_->name; }
const Type& Type::dom() const { return *node_->dom; }
const Type& Type::cod() const { return *node_->cod; }

std::pair<std::vector<Type>, Type> Type::strip() const {
  std::vector<Type> args;
  Type t = *this;
  while (t.is_fun()) {
    args.push_back(t.dom());
    Type next = t.cod();
    t = next;
  }
  return {std::move(args), t};
}

std::size_t Type::arity() const {
  std::size_t n = 0;
  for (const Type* t = this; t->is_fun(); t = &t->cod()) ++n;
  return n;
}

std::string Type::to_string() const {
  if (!is_fun()) return name();
  std::string lhs = dom().to_string();
  if (dom().is_fun()) lhs = "(" + lhs + ")";
  return lhs + " => " + cod().to_string();
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_fun() != b.is_fun()) return false;
  if (!a.is_fun()) return a.name() == b.name();
  return a.dom() == b.dom() && a.cod() == b.cod();
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.is_fun() != b.is_fun()) return a.is_fun() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!a.is_fun()) return a.name() <=> b.name();
  if (auto c = a.dom() <=> b.dom(); c != 0) return c;
  return a.cod() <=> b.cod();
}

Type::Type() : Type(prop_type()) {}

Type prop_type() {
  static const Type prop = Type::basic("prop");
  return prop;
}

std::strong_ordering operator<=>(const VarKey& a, const VarKey& b) {
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.index <=> b.index; c != 0) return c;
  return a.type <=> b.type;
}

// ---------------------------------------------------------------------------
// Terms

struct Term::Node {
  TermKind kind;
  std::string name;
  std::optional<Type> type;
  int number = 0;  // Var index or Bound offset
  std::optional<Term> left;   // Abs body, App fun
  std::optional<Term> right;  // App arg
  int loose = 0;
  int maxidx = -1;
  std::size_t size = 1;
  bool normal = true;
};

namespace {

bool eta_redex_body(const Term& body) {
  return body.is_app() && body.arg().is_bound() && body.arg().offset() == 0 &&
         !has_loose_bound(body.fun(), 0);
}

}  // namespace

Term Term::constant(std::string name, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Const;
  n->name = std::move(name);
  n->type = std::move(type);
  return Term(std::move(n));
}

Term Term::free(std::string name, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Free;
  n->name = std::move(name);
  n->type = std::move(type);
  return Term(std::move(n));
}

Term Term::var(std::string name, int index, Type type) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Var;
  n->name = std::move(name);
  n->number = index;
  n->type = std::move(type);
  n->maxidx = index;
  return Term(std::move(n));
}

Term Term::bound(int offset) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Bound;
  n->number = offset;
  n->loose = offset + 1;
  return Term(std::move(n));
}

Term Term::abs(std::string hint, Type var_type, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Abs;
  n->name = std::move(hint);
  n->type = std::move(var_type);
  n->loose = std::max(0, body.loose_bound_limit() - 1);
  n->maxidx = body.max_index();
  n->size = body.size() + 1;
  n->normal = body.node_->normal && !eta_redex_body(body);
  n->left = std::move(body);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::App;
  n->loose = std::max(fun.loose_bound_limit(), arg.loose_bound_limit());
  n->maxidx = std::max(fun.max_index(), arg.max_index());
  n->size = fun.size() + arg.size() + 1;
  n->normal = fun.node_->normal && arg.node_->normal && !fun.is_abs();
  n->left = std::move(fun);
  n->right = std::move(arg);
  return Term(std::move(n));
}

Term Term::apply(Term head, std::span<const Term> args) {
  for (const auto& a : args) head = app(std::move(head), a);
  return head;
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Type& Term::type() const { return *node_->type; }
int Term::index() const { return node_->number; }
int Term::offset() const { return node_->number; }
VarKey Term::var_key() const { return VarKey{name(), index(), type()}; }
const Term& Term::body() const { return *node_->left; }
const Term& Term::fun() const { return *node_->left; }
const Term& Term::arg() const { return *node_->right; }
int Term::loose_bound_limit() const { return node_->loose; }
int Term::max_index() const { return node_->maxidx; }
std::size_t Term::size() const { return node_->size; }
bool Term::is_normal_form() const { return node_->normal; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.node_->size != b.node_->size || a.node_->maxidx != b.node_->maxidx) return false;
  switch (a.kind()) {
    case TermKind::Const:
    case TermKind::Free:
      return a.name() == b.name() && a.type() == b.type();
    case TermKind::Var:
      return a.index() == b.index() && a.name() == b.name() && a.type() == b.type();
    case TermKind::Bound:
      return a.offset() == b.offset();
    case TermKind::Abs:
      return a.type() == b.type() && a.body() == b.body();
    case TermKind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case TermKind::Const:
    case TermKind::Free:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      return a.type() <=> b.type();
    case TermKind::Var:
      return a.var_key() <=> b.var_key();
    case TermKind::Bound:
      return a.offset() <=> b.offset();
    case TermKind::Abs:
      if (auto c = a.type() <=> b.type(); c != 0) return c;
      return a.body() <=> b.body();
    case TermKind::App:
      if (auto c = a.fun() <=> b.fun(); c != 0) return c;
      return a.arg() <=> b.arg();
  }
  return std::strong_ordering::equal;
}

std::string Term::debug_string() const {
  std::ostringstream out;
  switch (kind()) {
    case TermKind::Const: out << name(); break;
    case TermKind::Free: out << name(); break;
    case TermKind::Var: out << '?' << name() << '.' << index(); break;
    case TermKind::Bound: out << 'B' << offset(); break;
    case TermKind::Abs: out << "(%" << name() << ". " << body().debug_string() << ')'; break;
    case TermKind::App: out << '(' << fun().debug_string() << ' ' << arg().debug_string() << ')'; break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Operations

BinderContext push_binder(const BinderContext& ctx, const Type& t) {
  BinderContext out;
  out.reserve(ctx.size() + 1);
  out.push_back(t);
  out.insert(out.end(), ctx.begin(), ctx.end());
  return out;
}

namespace {

Type type_of_rec(const Term& t, std::vector<Type>& stack) {
  // `stack` holds binder types with the innermost last.
  switch (t.kind()) {
    case TermKind::Const:
    case TermKind::Free:
    case TermKind::Var:
      return t.type();
    case TermKind::Bound: {
      auto depth = static_cast<int>(stack.size());
      if (t.offset() >= depth) {
        fail(ErrorKind::DanglingBound, "dangling bound variable B" + std::to_string(t.offset()));
      }
      return stack[stack.size() - 1 - static_cast<std::size_t>(t.offset())];
    }
    case TermKind::Abs: {
      stack.push_back(t.type());
      Type body = type_of_rec(t.body(), stack);
      stack.pop_back();
      return Type::fun(t.type(), body);
    }
    case TermKind::App: {
      Type f = type_of_rec(t.fun(), stack);
      Type a = type_of_rec(t.arg(), stack);
      if (!f.is_fun()) {
        fail(ErrorKind::IllTyped, "application of non-function of type " + f.to_string());
      }
      if (!(f.dom() == a)) {
        fail(ErrorKind::IllTyped, "argument type " + a.to_string() + " does not match " +
                                      f.dom().to_string());
      }
      return f.cod();
    }
  }
  fail(ErrorKind::IllTyped, "unknown term");
}

}  // namespace

Type type_of(const Term& t, const BinderContext& ctx) {
  std::vector<Type> stack(ctx.rbegin(), ctx.rend());
  return type_of_rec(t, stack);
}

bool aconv(const Term& a, const Term& b) { return a == b; }

Term incr_bound(const Term& t, int k, int cutoff) {
  if (k == 0 || t.loose_bound_limit() <= cutoff) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      return Term::bound(t.offset() + k);
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), incr_bound(t.body(), k, cutoff + 1));
    case TermKind::App:
      return Term::app(incr_bound(t.fun(), k, cutoff), incr_bound(t.arg(), k, cutoff));
    default:
      return t;
  }
}

namespace {

Term subst_bound_rec(const Term& t, const Term& arg, int depth) {
  if (t.loose_bound_limit() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound:
      if (t.offset() == depth) return incr_bound(arg, depth);
      return Term::bound(t.offset() - 1);
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), subst_bound_rec(t.body(), arg, depth + 1));
    case TermKind::App:
      return Term::app(subst_bound_rec(t.fun(), arg, depth), subst_bound_rec(t.arg(), arg, depth));
    default:
      return t;
  }
}

bool has_loose_rec(const Term& t, int offset) {
  if (t.loose_bound_limit() <= offset) return false;
  switch (t.kind()) {
    case TermKind::Bound: return t.offset() == offset;
    case TermKind::Abs: return has_loose_rec(t.body(), offset + 1);
    case TermKind::App: return has_loose_rec(t.fun(), offset) || has_loose_rec(t.arg(), offset);
    default: return false;
  }
}

void loose_rec(const Term& t, int depth, std::set<int>& out) {
  if (t.loose_bound_limit() <= depth) return;
  switch (t.kind()) {
    case TermKind::Bound: out.insert(t.offset() - depth); break;
    case TermKind::Abs: loose_rec(t.body(), depth + 1, out); break;
    case TermKind::App:
      loose_rec(t.fun(), depth, out);
      loose_rec(t.arg(), depth, out);
      break;
    default: break;
  }
}

}  // namespace

Term subst_bound(const Term& body, const Term& arg) { return subst_bound_rec(body, arg, 0); }

bool has_loose_bound(const Term& t, int offset) { return has_loose_rec(t, offset); }

std::set<int> loose_bounds(const Term& t) {
  std::set<int> out;
  loose_rec(t, 0, out);
  return out;
}

bool is_normal(const Term& t) { return t.is_normal_form(); }

Term norm(const Term& t) {
  if (is_normal(t)) return t;
  switch (t.kind()) {
    case TermKind::Abs: {
      Term b = norm(t.body());
      if (eta_redex_body(b)) return incr_bound(b.fun(), -1);
      return Term::abs(t.name(), t.type(), std::move(b));
    }
    case TermKind::App: {
      Term f = norm(t.fun());
      Term a = norm(t.arg());
      if (f.is_abs()) return norm(subst_bound(f.body(), a));
      return Term::app(std::move(f), std::move(a));
    }
    default:
      return t;
  }
}

Term head_norm(const Term& t) {
  if (!t.is_app()) return t;
  Term f = head_norm(t.fun());
  if (f.is_abs()) return head_norm(subst_bound(f.body(), t.arg()));
  if (f.same_node(t.fun())) return t;
  return Term::app(f, t.arg());
}

std::pair<Term, std::vector<Term>> strip_comb(const Term& t) {
  std::vector<Term> args;
  const Term* cur = &t;
  while (cur->is_app()) {
    args.push_back(cur->arg());
    cur = &cur->fun();
  }
  std::reverse(args.begin(), args.end());
  return {*cur, std::move(args)};
}

Term head_of(const Term& t) {
  const Term* cur = &t;
  while (cur->is_app()) cur = &cur->fun();
  return *cur;
}

namespace {

Term replace_atom(const Term& t, const Term& atom, int depth) {
  if (t == atom) return Term::bound(depth);
  switch (t.kind()) {
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), replace_atom(t.body(), atom, depth + 1));
    case TermKind::App:
      return Term::app(replace_atom(t.fun(), atom, depth), replace_atom(t.arg(), atom, depth));
    default:
      return t;
  }
}

}  // namespace

Term abstract_over(const Term& atom, const Term& t, std::string hint) {
  if (hint.empty()) hint = atom.name();
  return Term::abs(std::move(hint), atom.type(), replace_atom(incr_bound(t, 1), atom, 0));
}

int max_index(const Term& t) { return t.max_index(); }

Term incr_indexes(const Term& t, int k) {
  if (k == 0 || !t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var:
      return Term::var(t.name(), t.index() + k, t.type());
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), incr_indexes(t.body(), k));
    case TermKind::App:
      return Term::app(incr_indexes(t.fun(), k), incr_indexes(t.arg(), k));
    default:
      return t;
  }
}

namespace {

template <typename F>
void visit_atoms(const Term& t, F&& f) {
  switch (t.kind()) {
    case TermKind::Abs: visit_atoms(t.body(), f); break;
    case TermKind::App:
      visit_atoms(t.fun(), f);
      visit_atoms(t.arg(), f);
      break;
    default: f(t); break;
  }
}

}  // namespace

std::set<VarKey> vars_of(const Term& t) {
  std::set<VarKey> out;
  if (!t.has_vars()) return out;
  visit_atoms(t, [&](const Term& a) {
    if (a.is_var()) out.insert(a.var_key());
  });
  return out;
}

bool occurs_var(const VarKey& v, const Term& t) {
  if (t.max_index() < v.index) return false;
  switch (t.kind()) {
    case TermKind::Var: return t.index() == v.index && t.name() == v.name && t.type() == v.type;
    case TermKind::Abs: return occurs_var(v, t.body());
    case TermKind::App: return occurs_var(v, t.fun()) || occurs_var(v, t.arg());
    default: return false;
  }
}

std::vector<Term> frees_of(const Term& t) {
  std::vector<Term> out;
  visit_atoms(t, [&](const Term& a) {
    if (a.is_free() && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  });
  return out;
}

bool occurs_free(const Term& free, const Term& t) {
  switch (t.kind()) {
    case TermKind::Free: return t == free;
    case TermKind::Abs: return occurs_free(free, t.body());
    case TermKind::App: return occurs_free(free, t.fun()) || occurs_free(free, t.arg());
    default: return false;
  }
}

std::set<std::string> symbol_names(const Term& t) {
  std::set<std::string> out;
  visit_atoms(t, [&](const Term& a) {
    if (a.is_free() || a.is_const()) out.insert(a.name());
  });
  return out;
}

Term instantiate_vars(const Subst& s, const Term& t) {
  if (s.empty() || !t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = s.find(t.var_key());
      if (it == s.end()) return t;
      if (!it->second.is_closed()) {
        fail(ErrorKind::IllTyped, "substitution image for ?" + t.name() + " has loose bound variables");
      }
      return it->second;
    }
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), instantiate_vars(s, t.body()));
    case TermKind::App:
      return Term::app(instantiate_vars(s, t.fun()), instantiate_vars(s, t.arg()));
    default:
      return t;
  }
}

Term instantiate_frees(const std::map<std::pair<std::string, Type>, Term>& s, const Term& t) {
  if (s.empty()) return t;
  switch (t.kind()) {
    case TermKind::Free: {
      auto it = s.find({t.name(), t.type()});
      return it == s.end() ? t : it->second;
    }
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), instantiate_frees(s, t.body()));
    case TermKind::App:
      return Term::app(instantiate_frees(s, t.fun()), instantiate_frees(s, t.arg()));
    default:
      return t;
  }
}

Term apply_subst(const Subst& s, const Term& t) {
  for (const auto& [key, image] : s) {
    Type it = type_of(image);
    if (!(it == key.type)) {
      fail(ErrorKind::IllTyped, "substitution for ?" + key.name + " has type " + it.to_string() +
                                    ", expected " + key.type.to_string());
    }
  }
  return norm(instantiate_vars(s, t));
}

// ---------------------------------------------------------------------------
// Meta-level connectives

namespace {

const Term& implies_const() {
  static const Term c = Term::constant(kImplies, Type::fun(prop_type(), Type::fun(prop_type(), prop_type())));
  return c;
}

}  // namespace

Term mk_implies(const Term& a, const Term& b) {
  return Term::app(Term::app(implies_const(), a), b);
}

Term mk_implies(std::span<const Term> prems, const Term& concl) {
  Term t = concl;
  for (auto it = prems.rbegin(); it != prems.rend(); ++it) t = mk_implies(*it, t);
  return t;
}

std::optional<std::pair<Term, Term>> dest_implies(const Term& t) {
  if (t.is_app() && t.fun().is_app() && t.fun().fun().is_const() && t.fun().fun().name() == kImplies) {
    return std::make_pair(t.fun().arg(), t.arg());
  }
  return std::nullopt;
}

std::pair<std::vector<Term>, Term> strip_implies(const Term& t) {
  return strip_implies(t, static_cast<std::size_t>(-1));
}

std::pair<std::vector<Term>, Term> strip_implies(const Term& t, std::size_t n) {
  std::vector<Term> prems;
  Term cur = t;
  while (prems.size() < n) {
    auto d = dest_implies(cur);
    if (!d) break;
    prems.push_back(d->first);
    Term next = d->second;
    cur = next;
  }
  return {std::move(prems), cur};
}

Term mk_all_const(const Type& bound_type) {
  return Term::constant(kAll, Type::fun(Type::fun(bound_type, prop_type()), prop_type()));
}

Term mk_all(const std::string& hint, const Type& type, const Term& body) {
  return Term::app(mk_all_const(type), Term::abs(hint, type, body));
}

std::optional<QuantView> dest_all(const Term& t) {
  if (!(t.is_app() && t.fun().is_const() && t.fun().name() == kAll)) return std::nullopt;
  const Type& qt = t.fun().type();
  if (!qt.is_fun() || !qt.dom().is_fun()) return std::nullopt;
  const Term& f = t.arg();
  if (f.is_abs()) return QuantView{f.name(), f.type(), f.body()};
  return QuantView{"x", qt.dom().dom(), Term::app(incr_bound(f, 1), Term::bound(0))};
}

Term mk_equals(const Term& a, const Term& b) {
  Type t = type_of(a);
  Term eq = Term::constant(kEquals, Type::fun(t, Type::fun(t, prop_type())));
  return Term::app(Term::app(eq, a), b);
}

std::optional<std::pair<Term, Term>> dest_equals(const Term& t) {
  if (t.is_app() && t.fun().is_app() && t.fun().fun().is_const() && t.fun().fun().name() == kEquals) {
    return std::make_pair(t.fun().arg(), t.arg());
  }
  return std::nullopt;
}

}  // namespace metaproof
