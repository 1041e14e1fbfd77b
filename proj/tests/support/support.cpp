#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>

#include "metaproof/error.hpp"

namespace testing_support {

std::vector<GoldenEntry> read_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden file " + path);
  std::vector<GoldenEntry> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(": ");
    if (colon == std::string::npos) throw std::runtime_error("bad golden line: " + line);
    out.push_back({line.substr(0, colon), line.substr(colon + 2)});
  }
  return out;
}

std::string golden_path(const std::string& name) { return std::string(METAPROOF_GOLDEN_DIR) + "/" + name; }

Term canonical_vars(const Term& t) {
  std::map<VarKey, int> seen;
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    switch (u.kind()) {
      case TermKind::Var: {
        auto [it, fresh] = seen.emplace(u.var_key(), static_cast<int>(seen.size()));
        return Term::var("v" + std::to_string(it->second), 0, u.type());
      }
      case TermKind::Abs:
        return Term::abs(u.name(), u.type(), go(u.body()));
      case TermKind::App: {
        Term f = go(u.fun());
        return Term::app(f, go(u.arg()));
      }
      default:
        return u;
    }
  };
  return go(t);
}

bool same_up_to_vars(const Term& a, const Term& b) { return aconv(canonical_vars(a), canonical_vars(b)); }

Term prop(const TheoryRef& thy, const std::string& src) { return parse_prop(SyntaxTable::of(*thy), src); }

std::string show(const TheoryRef& thy, const Term& t) { return print_term(SyntaxTable::of(*thy), t); }

Theorem where(const Theorem& th, const std::vector<std::pair<std::string, std::string>>& inst) {
  SyntaxTable table = SyntaxTable::of(*th.theory());
  auto vars = vars_of(th.prop());
  Subst s;
  for (const auto& [name, src] : inst) {
    auto it = std::find_if(vars.begin(), vars.end(), [&](const VarKey& v) { return v.name == name && v.index == 0; });
    if (it == vars.end()) throw std::runtime_error("no schematic ?" + name);
    ParseOptions opts;
    opts.expected = it->type;
    s.emplace(*it, parse_term(table, src, opts));
  }
  return instantiate(s, th);
}

ProofState step(const Tactic& tac, const ProofState& st) {
  auto s = tac(st).pull();
  if (!s) throw std::runtime_error("tactic produced no state");
  return s->first;
}

// ---------------------------------------------------------------------------
// Reduction oracle on a private representation.

namespace {

struct ONode;
using OTerm = std::shared_ptr<const ONode>;

struct ONode {
  enum K { Atom, Bnd, Lam, Ap } k;
  Term atom = Term::bound(0);
  int idx = 0;
  Type ty;
  OTerm a, b;
};

OTerm o_atom(const Term& t) { return std::make_shared<ONode>(ONode{ONode::Atom, t, 0, {}, nullptr, nullptr}); }
OTerm o_bnd(int i) { return std::make_shared<ONode>(ONode{ONode::Bnd, Term::bound(0), i, {}, nullptr, nullptr}); }
OTerm o_lam(const Type& ty, OTerm body) {
  return std::make_shared<ONode>(ONode{ONode::Lam, Term::bound(0), 0, ty, std::move(body), nullptr});
}
OTerm o_ap(OTerm f, OTerm x) {
  return std::make_shared<ONode>(ONode{ONode::Ap, Term::bound(0), 0, {}, std::move(f), std::move(x)});
}

OTerm to_o(const Term& t) {
  switch (t.kind()) {
    case TermKind::Bound:
      return o_bnd(t.offset());
    case TermKind::Abs:
      return o_lam(t.type(), to_o(t.body()));
    case TermKind::App:
      return o_ap(to_o(t.fun()), to_o(t.arg()));
    default:
      return o_atom(t);
  }
}

Term from_o(const OTerm& t) {
  switch (t->k) {
    case ONode::Atom:
      return t->atom;
    case ONode::Bnd:
      return Term::bound(t->idx);
    case ONode::Lam:
      return Term::abs("x", t->ty, from_o(t->a));
    case ONode::Ap:
      return Term::app(from_o(t->a), from_o(t->b));
  }
  return Term::bound(0);
}

OTerm shift(const OTerm& t, int d, int cutoff) {
  switch (t->k) {
    case ONode::Bnd:
      return t->idx >= cutoff ? o_bnd(t->idx + d) : t;
    case ONode::Lam:
      return o_lam(t->ty, shift(t->a, d, cutoff + 1));
    case ONode::Ap:
      return o_ap(shift(t->a, d, cutoff), shift(t->b, d, cutoff));
    default:
      return t;
  }
}

// Replace index j by s (s lives outside all binders of t), lowering the rest.
OTerm subst(const OTerm& t, int j, const OTerm& s) {
  switch (t->k) {
    case ONode::Bnd:
      if (t->idx == j) return shift(s, j, 0);
      return t->idx > j ? o_bnd(t->idx - 1) : t;
    case ONode::Lam:
      return o_lam(t->ty, subst(t->a, j + 1, s));
    case ONode::Ap:
      return o_ap(subst(t->a, j, s), subst(t->b, j, s));
    default:
      return t;
  }
}

bool free_in(const OTerm& t, int j) {
  switch (t->k) {
    case ONode::Bnd:
      return t->idx == j;
    case ONode::Lam:
      return free_in(t->a, j + 1);
    case ONode::Ap:
      return free_in(t->a, j) || free_in(t->b, j);
    default:
      return false;
  }
}

std::optional<OTerm> lo_step(const OTerm& t) {
  if (t->k == ONode::Ap) {
    if (t->a->k == ONode::Lam) return subst(t->a->a, 0, t->b);
    if (auto f = lo_step(t->a)) return o_ap(*f, t->b);
    if (auto x = lo_step(t->b)) return o_ap(t->a, *x);
    return std::nullopt;
  }
  if (t->k == ONode::Lam) {
    if (auto b = lo_step(t->a)) return o_lam(t->ty, *b);
  }
  return std::nullopt;
}

OTerm innermost(const OTerm& t) {
  switch (t->k) {
    case ONode::Lam:
      return o_lam(t->ty, innermost(t->a));
    case ONode::Ap: {
      OTerm f = innermost(t->a);
      OTerm x = innermost(t->b);
      if (f->k == ONode::Lam) return innermost(subst(f->a, 0, x));
      return o_ap(f, x);
    }
    default:
      return t;
  }
}

OTerm eta(const OTerm& t) {
  switch (t->k) {
    case ONode::Lam: {
      OTerm body = eta(t->a);
      if (body->k == ONode::Ap && body->b->k == ONode::Bnd && body->b->idx == 0 && !free_in(body->a, 0)) {
        return shift(body->a, -1, 0);
      }
      return o_lam(t->ty, body);
    }
    case ONode::Ap:
      return o_ap(eta(t->a), eta(t->b));
    default:
      return t;
  }
}

}  // namespace

Term reduce_leftmost_outermost(const Term& t) {
  OTerm cur = to_o(t);
  while (auto next = lo_step(cur)) cur = *next;
  return from_o(eta(cur));
}

Term reduce_innermost(const Term& t) { return from_o(eta(innermost(to_o(t)))); }

// ---------------------------------------------------------------------------
// Random terms

Type TermGen::random_type(int depth) {
  static const Type i = Type::basic("i");
  static const Type o = Type::basic("o");
  if (depth <= 0 || chance(0.55)) return chance(0.5) ? i : o;
  return Type::fun(random_type(depth - 1), random_type(depth - 1));
}

Term TermGen::atom_of(const Type& type, const BinderContext& ctx) {
  std::vector<int> bounds;
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    if (ctx[k] == type) bounds.push_back(static_cast<int>(k));
  }
  if (!bounds.empty() && chance(0.6)) return Term::bound(bounds[uniform(0, static_cast<int>(bounds.size()) - 1)]);
  int pick = uniform(0, 2);
  std::string suffix = std::to_string(uniform(0, 1));
  if (pick == 0) return Term::constant("c" + suffix, type);
  if (pick == 1) return Term::free("v" + suffix, type);
  return Term::var("S" + suffix, uniform(0, 1), type);
}

Term TermGen::term(const Type& type, const BinderContext& ctx, int budget) {
  if (budget <= 1) return atom_of(type, ctx);
  int choice = uniform(0, 9);
  if (type.is_fun() && choice < 3) {
    return Term::abs("x", type.dom(), term(type.cod(), push_binder(ctx, type.dom()), budget - 1));
  }
  if (choice < 6) {
    Type arg = random_type(1);
    int half = (budget - 1) / 2;
    return Term::app(term(Type::fun(arg, type), ctx, half), term(arg, ctx, budget - 1 - half));
  }
  if (choice < 8) {
    // An explicit beta-redex.
    Type arg = random_type(1);
    int half = (budget - 2) / 2;
    Term body = term(type, push_binder(ctx, arg), std::max(1, half));
    return Term::app(Term::abs("y", arg, body), term(arg, ctx, std::max(1, budget - 2 - half)));
  }
  return atom_of(type, ctx);
}

namespace {

Term ifol_const(const TheoryRef& thy, const std::string& n) { return thy->make_const(n); }

Type form_t() { return Type::basic("form"); }
Type term_t() { return Type::basic("term"); }

}  // namespace

Term TermGen::fo_term(const TheoryRef& thy, std::vector<std::string>& bound, int depth) {
  (void)thy;
  if (!bound.empty() && chance(0.6)) return Term::bound(uniform(0, static_cast<int>(bound.size()) - 1));
  if (depth > 0 && chance(0.3)) return Term::app(Term::free("f", Type::fun(term_t(), term_t())), fo_term(thy, bound, depth - 1));
  return Term::free(chance(0.5) ? "a" : "b", term_t());
}

Term TermGen::formula(const TheoryRef& thy, int depth, std::vector<std::string>& bound) {
  int c = depth <= 0 ? uniform(0, 2) : uniform(0, 8);
  switch (c) {
    case 0: {
      const char* names[] = {"A", "B", "C"};
      return Term::free(names[uniform(0, 2)], form_t());
    }
    case 1: {
      Term p = Term::free(chance(0.5) ? "P" : "Q", Type::fun(term_t(), form_t()));
      return Term::app(p, fo_term(thy, bound, 1));
    }
    case 2:
      if (chance(0.3)) return ifol_const(thy, "False");
      return Term::apply(ifol_const(thy, "="), std::vector<Term>{fo_term(thy, bound, 1), fo_term(thy, bound, 1)});
    case 3:
    case 4:
    case 5: {
      const char* ops[] = {"&", "|", "-->"};
      Term op = ifol_const(thy, ops[c - 3]);
      Term l = formula(thy, depth - 1, bound);
      return Term::apply(op, std::vector<Term>{l, formula(thy, depth - 1, bound)});
    }
    default: {
      // Quantifier whose variable is used in the body.
      std::vector<std::string> inner = bound;
      inner.insert(inner.begin(), "x");
      Term p = Term::free(chance(0.5) ? "P" : "Q", Type::fun(term_t(), form_t()));
      Term body = formula(thy, depth - 1, inner);
      body = Term::apply(ifol_const(thy, "&"), std::vector<Term>{Term::app(p, Term::bound(0)), body});
      return Term::app(ifol_const(thy, chance(0.5) ? "ALL" : "EX"), Term::abs("x", term_t(), body));
    }
  }
}

Term TermGen::meta_formula(const TheoryRef& thy, int depth, bool schematics) {
  Term tr = ifol_const(thy, "Tr");
  std::vector<std::string> none;
  int c = depth <= 0 ? 0 : uniform(0, 4);
  switch (c) {
    case 0:
    case 1: {
      if (schematics && chance(0.3)) return Term::app(tr, Term::var(chance(0.5) ? "A" : "B", uniform(0, 2), form_t()));
      return Term::app(tr, formula(thy, std::min(depth, 2), none));
    }
    case 2:
      return mk_implies(meta_formula(thy, depth - 1, schematics), meta_formula(thy, depth - 1, schematics));
    case 3: {
      Term l = Term::app(Term::free("f", Type::fun(term_t(), term_t())), Term::free("a", term_t()));
      return mk_equals(l, Term::free("b", term_t()));
    }
    default: {
      std::vector<std::string> bound{"z"};
      Term p = Term::free("P", Type::fun(term_t(), form_t()));
      Term inner = Term::apply(ifol_const(thy, "&"), std::vector<Term>{Term::app(p, Term::bound(0)), formula(thy, 1, bound)});
      Term body = Term::app(tr, inner);
      return mk_all("z", term_t(), body);
    }
  }
}

Term TermGen::ipl_prop(const TheoryRef& ipl, int depth) {
  std::function<Term(int)> f = [&](int d) -> Term {
    if (d <= 0 || chance(0.3)) {
      const char* names[] = {"A", "B", "C", "D"};
      if (chance(0.1)) return ipl->make_const("False");
      return Term::free(names[uniform(0, 3)], form_t());
    }
    const char* ops[] = {"&", "|", "-->"};
    Term op = ipl->make_const(ops[uniform(0, 2)]);
    Term l = f(d - 1);
    return Term::apply(op, std::vector<Term>{l, f(d - 1)});
  };
  return Term::app(ipl->make_const("Tr"), f(depth));
}

// ---------------------------------------------------------------------------
// Robinson unification

bool fo_equal(const Fo& a, const Fo& b) {
  if (a.var != b.var || a.sym != b.sym || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!fo_equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

Fo fo_apply(const FoSubst& s, const Fo& t) {
  if (t.var) {
    auto it = s.find(t.sym);
    return it == s.end() ? t : fo_apply(s, it->second);
  }
  Fo out{t.sym, false, {}};
  for (const auto& a : t.args) out.args.push_back(fo_apply(s, a));
  return out;
}

namespace {

bool fo_occurs(const std::string& v, const Fo& t) {
  if (t.var) return t.sym == v;
  for (const auto& a : t.args) {
    if (fo_occurs(v, a)) return true;
  }
  return false;
}

bool fo_unify(Fo a, Fo b, FoSubst& s) {
  a = fo_apply(s, a);
  b = fo_apply(s, b);
  if (a.var && b.var && a.sym == b.sym) return true;
  if (a.var || b.var) {
    const Fo& v = a.var ? a : b;
    const Fo& t = a.var ? b : a;
    if (fo_occurs(v.sym, t)) return false;
    s[v.sym] = t;
    return true;
  }
  if (a.sym != b.sym || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!fo_unify(a.args[i], b.args[i], s)) return false;
  }
  return true;
}

}  // namespace

std::optional<FoSubst> robinson(const Fo& a, const Fo& b) {
  FoSubst s;
  if (!fo_unify(a, b, s)) return std::nullopt;
  FoSubst full;
  for (const auto& [v, t] : s) full[v] = fo_apply(s, t);
  return full;
}

Fo random_fo(TermGen& gen, int depth) {
  int c = depth <= 0 ? gen.uniform(0, 1) : gen.uniform(0, 4);
  switch (c) {
    case 0: {
      const char* vs[] = {"X", "Y", "Z"};
      return Fo{vs[gen.uniform(0, 2)], true, {}};
    }
    case 1:
      return Fo{gen.chance(0.5) ? "a" : "b", false, {}};
    case 2:
      return Fo{"g", false, {random_fo(gen, depth - 1)}};
    default:
      return Fo{"f", false, {random_fo(gen, depth - 1), random_fo(gen, depth - 1)}};
  }
}

Term fo_to_term(const Fo& t) {
  Type i = term_t();
  if (t.var) return Term::var(t.sym, 0, i);
  std::vector<Type> args(t.args.size(), i);
  Term head = Term::constant(t.sym, Type::fun(args, i));
  std::vector<Term> xs;
  for (const auto& a : t.args) xs.push_back(fo_to_term(a));
  return Term::apply(head, xs);
}

// ---------------------------------------------------------------------------
// Lifting over assumptions by kernel primitives

Theorem lift_by_primitives(const Theorem& rule, const std::vector<Term>& asms) {
  const TheoryRef& thy = rule.theory();
  auto [prems, concl] = strip_implies(rule.prop());
  std::vector<Theorem> asm_thms;
  for (const auto& a : asms) asm_thms.push_back(assume(thy, a));
  std::vector<Term> lifted_prems;
  Theorem th = rule;
  for (const auto& p : prems) {
    Term lp = mk_implies(asms, p);
    lifted_prems.push_back(lp);
    Theorem d = assume(thy, lp);
    for (const auto& t : asm_thms) d = implies_elim(d, t);
    th = implies_elim(th, d);
  }
  for (auto it = asms.rbegin(); it != asms.rend(); ++it) th = implies_intr(*it, th);
  for (auto it = lifted_prems.rbegin(); it != lifted_prems.rend(); ++it) th = implies_intr(*it, th);
  return th;
}

}  // namespace testing_support
