#include "metaproof/kernel.hpp"

#include <algorithm>

#include "metaproof/error.hpp"
#include "trusted.hpp"

namespace metaproof {

using detail::TrustedAccess;

int Theorem::max_index() const {
  int m = prop_.max_index();
  for (const auto& p : flexflex_) m = std::max({m, p.lhs.max_index(), p.rhs.max_index()});
  return m;
}

std::vector<Term> union_hyps(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace {

void check_prop(const Theory& thy, const Term& phi) {
  if (!phi.is_closed()) fail(ErrorKind::DanglingBound, "proposition has loose bound variables");
  thy.check_term(phi);
  Type t = type_of(phi);
  if (!(t == prop_type())) fail(ErrorKind::IllTyped, "expected a proposition, got type " + t.to_string());
}

void check_closed_term(const Theory& thy, const Term& t) {
  if (!t.is_closed()) fail(ErrorKind::DanglingBound, "term has loose bound variables");
  thy.check_term(t);
  type_of(t);
}

std::vector<DisagreementPair> concat(const std::vector<DisagreementPair>& a,
                                     const std::vector<DisagreementPair>& b) {
  std::vector<DisagreementPair> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool free_in_context(const Term& x, const Theorem& th) {
  for (const auto& h : th.hyps()) {
    if (occurs_free(x, h)) return true;
  }
  for (const auto& p : th.flexflex()) {
    if (occurs_free(x, p.lhs) || occurs_free(x, p.rhs)) return true;
  }
  return false;
}

Theorem make(TheoryRef thy, std::vector<Term> hyps, std::vector<DisagreementPair> ff, Term prop,
             const char* rule) {
  return TrustedAccess::make(std::move(thy), std::move(hyps), std::move(ff), norm(prop), rule);
}

std::pair<Term, Term> need_equality(const Theorem& th) {
  auto eq = dest_equals(th.prop());
  if (!eq) fail(ErrorKind::NotEquality, "not an equality");
  return *eq;
}

}  // namespace

Theorem assume(const TheoryRef& thy, const Term& phi_in) {
  check_prop(*thy, phi_in);
  Term phi = norm(phi_in);
  if (phi.has_vars()) fail(ErrorKind::SchematicInHyp, "hypotheses may not contain schematic variables");
  return make(thy, {phi}, {}, phi, "assume");
}

Theorem implies_intr(const Term& phi_in, const Theorem& th) {
  check_prop(*th.theory(), phi_in);
  Term phi = norm(phi_in);
  std::vector<Term> hyps;
  for (const auto& h : th.hyps()) {
    if (!(h == phi)) hyps.push_back(h);
  }
  return make(th.theory(), std::move(hyps), th.flexflex(), mk_implies(phi, th.prop()), "implies_intr");
}

Theorem implies_elim(const Theorem& th_ab, const Theorem& th_a) {
  auto thy = join_theories(th_ab.theory(), th_a.theory());
  auto d = dest_implies(th_ab.prop());
  if (!d) fail(ErrorKind::NotImplication, "major premise is not an implication");
  if (!(d->first == th_a.prop())) fail(ErrorKind::PremiseMismatch, "premise does not match");
  return make(thy, union_hyps(th_ab.hyps(), th_a.hyps()), concat(th_ab.flexflex(), th_a.flexflex()), d->second,
              "implies_elim");
}

Theorem forall_intr(const Term& x, const Theorem& th) {
  if (!x.is_free()) fail(ErrorKind::IllTyped, "can only generalize over a free variable");
  th.theory()->check_term(x);
  if (free_in_context(x, th)) {
    fail(ErrorKind::EigenvariableViolation, "variable " + x.name() + " is free in the assumptions");
  }
  Term body = abstract_over(x, th.prop());
  return make(th.theory(), th.hyps(), th.flexflex(), Term::app(mk_all_const(x.type()), body), "forall_intr");
}

Theorem forall_elim(const Term& t, const Theorem& th) {
  auto q = dest_all(th.prop());
  if (!q) fail(ErrorKind::NotQuantified, "not a universal quantification");
  check_closed_term(*th.theory(), t);
  Type tt = type_of(t);
  if (!(tt == q->type)) {
    fail(ErrorKind::IllTyped, "instance has type " + tt.to_string() + ", expected " + q->type.to_string());
  }
  return make(th.theory(), th.hyps(), th.flexflex(), subst_bound(q->body, t), "forall_elim");
}

Theorem instantiate(const Subst& s, const Theorem& th) {
  if (s.empty()) return th;
  for (const auto& [key, image] : s) {
    check_closed_term(*th.theory(), image);
    th.theory()->check_term(Term::var(key));
  }
  Term prop = apply_subst(s, th.prop());
  std::vector<DisagreementPair> ff;
  for (const auto& p : th.flexflex()) {
    Term l = apply_subst(s, p.lhs);
    Term r = apply_subst(s, p.rhs);
    if (!(l == r)) ff.push_back(DisagreementPair{{}, l, r});
  }
  return make(th.theory(), th.hyps(), std::move(ff), prop, "instantiate");
}

Theorem reflexive(const TheoryRef& thy, const Term& a) {
  check_closed_term(*thy, a);
  Term n = norm(a);
  return make(thy, {}, {}, mk_equals(n, n), "reflexive");
}

Theorem symmetric(const Theorem& th) {
  auto [a, b] = need_equality(th);
  return make(th.theory(), th.hyps(), th.flexflex(), mk_equals(b, a), "symmetric");
}

Theorem transitive(const Theorem& th1, const Theorem& th2) {
  auto thy = join_theories(th1.theory(), th2.theory());
  auto [a, b] = need_equality(th1);
  auto [b2, c] = need_equality(th2);
  if (!(b == b2)) fail(ErrorKind::MiddleMismatch, "middle terms differ");
  return make(thy, union_hyps(th1.hyps(), th2.hyps()), concat(th1.flexflex(), th2.flexflex()), mk_equals(a, c),
              "transitive");
}

Theorem abstract_rule(const Term& x, const Theorem& th) {
  if (!x.is_free()) fail(ErrorKind::IllTyped, "can only abstract over a free variable");
  auto [a, b] = need_equality(th);
  if (free_in_context(x, th)) {
    fail(ErrorKind::EigenvariableViolation, "variable " + x.name() + " is free in the assumptions");
  }
  Term la = abstract_over(x, a);
  Term lb = abstract_over(x, b);
  return make(th.theory(), th.hyps(), th.flexflex(), mk_equals(norm(la), norm(lb)), "abstract_rule");
}

Theorem combination(const Theorem& th1, const Theorem& th2) {
  auto thy = join_theories(th1.theory(), th2.theory());
  auto [f, g] = need_equality(th1);
  auto [a, b] = need_equality(th2);
  Type ft = type_of(f);
  Type at = type_of(a);
  if (!ft.is_fun() || !(ft.dom() == at)) {
    fail(ErrorKind::IllTyped, "cannot apply " + ft.to_string() + " to " + at.to_string());
  }
  return make(thy, union_hyps(th1.hyps(), th2.hyps()), concat(th1.flexflex(), th2.flexflex()),
              mk_equals(norm(Term::app(f, a)), norm(Term::app(g, b))), "combination");
}

Theorem equal_intr(const Theorem& th1, const Theorem& th2) {
  auto thy = join_theories(th1.theory(), th2.theory());
  const Term& psi = th1.prop();
  const Term& phi = th2.prop();
  auto has = [](const std::vector<Term>& hs, const Term& t) { return std::binary_search(hs.begin(), hs.end(), t); };
  if (!has(th1.hyps(), phi) || !has(th2.hyps(), psi)) {
    fail(ErrorKind::Mismatch, "each theorem must assume the other's proposition");
  }
  std::vector<Term> h1, h2;
  std::copy_if(th1.hyps().begin(), th1.hyps().end(), std::back_inserter(h1), [&](const Term& h) { return !(h == phi); });
  std::copy_if(th2.hyps().begin(), th2.hyps().end(), std::back_inserter(h2), [&](const Term& h) { return !(h == psi); });
  return make(thy, union_hyps(h1, h2), concat(th1.flexflex(), th2.flexflex()), mk_equals(phi, psi), "equal_intr");
}

Theorem equal_elim(const Theorem& th_eq, const Theorem& th) {
  auto thy = join_theories(th_eq.theory(), th.theory());
  auto [phi, psi] = need_equality(th_eq);
  if (!(type_of(phi) == prop_type())) fail(ErrorKind::Mismatch, "equality is not between propositions");
  if (!(phi == th.prop())) fail(ErrorKind::Mismatch, "proposition does not match the equation");
  return make(thy, union_hyps(th_eq.hyps(), th.hyps()), concat(th_eq.flexflex(), th.flexflex()), psi, "equal_elim");
}

Theorem beta_eta_conversion(const TheoryRef& thy, const Term& t) {
  check_closed_term(*thy, t);
  return make(thy, {}, {}, mk_equals(t, norm(t)), "beta_eta_conversion");
}

Theorem axiom(const TheoryRef& thy, const std::string& name) {
  const AxiomInfo* ax = thy->find_axiom(name);
  if (!ax) fail(ErrorKind::UnknownAxiom, "no axiom named " + name + " in " + thy->name());
  Term prop = ax->prop;
  while (auto q = dest_all(prop)) {
    std::string n = q->hint.empty() ? "x" : q->hint;
    VarKey key{n, 0, q->type};
    for (int k = 1; occurs_var(key, q->body); ++k) key.name = n + std::to_string(k);
    prop = norm(subst_bound(q->body, Term::var(key)));
  }
  return make(thy, {}, {}, prop, "axiom");
}

Theorem definition(const TheoryRef& thy, const std::string& name) {
  const DefInfo* d = thy->find_def_named(name);
  if (!d) d = thy->find_def_for(name);
  if (!d) fail(ErrorKind::NoSuchDef, "no definition " + name + " in " + thy->name());
  Term k = thy->make_const(d->const_name);
  return make(thy, {}, {}, mk_equals(k, d->rhs), "definition");
}

Theorem varify(const Theorem& th) {
  if (!th.hyps().empty()) fail(ErrorKind::HasHypotheses, "cannot generalize a theorem with hypotheses");
  std::vector<Term> frees = frees_of(th.prop());
  for (const auto& p : th.flexflex()) {
    for (const auto& f : frees_of(p.lhs)) if (std::find(frees.begin(), frees.end(), f) == frees.end()) frees.push_back(f);
    for (const auto& f : frees_of(p.rhs)) if (std::find(frees.begin(), frees.end(), f) == frees.end()) frees.push_back(f);
  }
  if (frees.empty()) return th;
  int next = th.max_index() + 1;
  std::set<VarKey> existing = vars_of(th.prop());
  for (const auto& p : th.flexflex()) {
    auto l = vars_of(p.lhs);
    auto r = vars_of(p.rhs);
    existing.insert(l.begin(), l.end());
    existing.insert(r.begin(), r.end());
  }
  std::map<std::pair<std::string, Type>, Term> s;
  for (const auto& f : frees) {
    VarKey key{f.name(), 0, f.type()};
    if (existing.count(key)) key.index = next;
    s.emplace(std::make_pair(f.name(), f.type()), Term::var(key));
  }
  std::vector<DisagreementPair> ff;
  for (const auto& p : th.flexflex()) {
    ff.push_back(DisagreementPair{{}, instantiate_frees(s, p.lhs), instantiate_frees(s, p.rhs)});
  }
  return make(th.theory(), {}, std::move(ff), instantiate_frees(s, th.prop()), "varify");
}

Theorem trivial(const TheoryRef& thy, const Term& phi_in) {
  check_prop(*thy, phi_in);
  Term phi = norm(phi_in);
  return make(thy, {}, {}, mk_implies(phi, phi), "trivial");
}

}  // namespace metaproof
