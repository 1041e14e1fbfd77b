#include <doctest.h>

#include "metaproof/error.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

const Type form_t = Type::basic("form");
const Type term_t = Type::basic("term");

TheoryRef IPL() { return builtin("IPL"); }
TheoryRef IFOL() { return builtin("IFOL"); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("assume") {
  auto thy = IPL();
  Term ab = prop(thy, "Tr(A & B)");
  Theorem th = assume(thy, ab);
  CHECK(aconv(th.prop(), ab));
  REQUIRE(th.hyps().size() == 1);
  CHECK(aconv(th.hyps()[0], ab));
  CHECK(kind_of([&] { assume(thy, prop(thy, "Tr(?A)")); }) == ErrorKind::SchematicInHyp);
  CHECK(kind_of([&] { assume(thy, ab.arg()); }) == ErrorKind::IllTyped);
  CHECK(kind_of([&] { assume(thy, Term::app(Term::constant("Tr", Type::fun(term_t, prop_type())), Term::free("a", term_t))); }) ==
        ErrorKind::IllTyped);
}

TEST_CASE("implication rules") {
  auto thy = IPL();
  Term c = prop(thy, "Tr(C)");
  Theorem triv = implies_intr(c, assume(thy, c));
  CHECK(aconv(triv.prop(), prop(thy, "Tr(C) ==> Tr(C)")));
  CHECK(triv.hyps().empty());

  Term ab = prop(thy, "Tr(A & B)");
  Theorem rule = where(axiom(thy, "conjE1"), {{"A", "A"}, {"B", "B"}});
  Theorem th = implies_elim(rule, assume(thy, ab));
  CHECK(aconv(th.prop(), prop(thy, "Tr(A)")));
  REQUIRE(th.hyps().size() == 1);
  CHECK(aconv(th.hyps()[0], ab));

  CHECK(kind_of([&] { implies_elim(rule, assume(thy, prop(thy, "Tr(A | B)"))); }) == ErrorKind::PremiseMismatch);
  CHECK(kind_of([&] { implies_elim(assume(thy, ab), assume(thy, ab)); }) == ErrorKind::NotImplication);

  // Discharging a formula that is not a hypothesis is allowed.
  Theorem weak = implies_intr(prop(thy, "Tr(D)"), th);
  CHECK(aconv(weak.prop(), prop(thy, "Tr(D) ==> Tr(A)")));
  CHECK(weak.hyps().size() == 1);
}

TEST_CASE("quantifier rules") {
  auto thy = IPL();
  Term x = Term::free("X", form_t);
  Term tx = prop(thy, "Tr(X)");
  CHECK(kind_of([&] { forall_intr(x, assume(thy, tx)); }) == ErrorKind::EigenvariableViolation);

  Theorem conj = where(axiom(thy, "conjI"), {{"A", "A"}, {"B", "B"}});
  Theorem gen = forall_intr(Term::free("A", form_t), forall_intr(Term::free("B", form_t), conj));
  CHECK(aconv(gen.prop(), prop(thy, "!!A B. Tr(A) ==> Tr(B) ==> Tr(A & B)")));
  Theorem cd = forall_elim(Term::free("D", form_t), forall_elim(Term::free("C", form_t), gen));
  CHECK(aconv(cd.prop(), prop(thy, "Tr(C) ==> Tr(D) ==> Tr(C & D)")));

  Theorem triv = implies_intr(tx, assume(thy, tx));
  Theorem round = forall_elim(x, forall_intr(x, triv));
  CHECK(aconv(round.prop(), triv.prop()));

  CHECK(kind_of([&] { forall_elim(x, triv); }) == ErrorKind::NotQuantified);
  CHECK(kind_of([&] { forall_elim(Term::free("t", term_t), gen); }) == ErrorKind::IllTyped);
  CHECK(kind_of([&] { forall_intr(Term::var("A", 0, form_t), conj); }) == ErrorKind::IllTyped);
}

TEST_CASE("instantiate") {
  auto thy = IPL();
  Theorem imp = where(axiom(thy, "impI"), {{"A", "A & B"}, {"B", "C --> A & C"}});
  CHECK(aconv(imp.prop(), prop(thy, "(Tr(A & B) ==> Tr(C --> A & C)) ==> Tr(A & B --> (C --> A & C))")));
  Theorem same = instantiate({}, axiom(thy, "impI"));
  CHECK(aconv(same.prop(), axiom(thy, "impI").prop()));

  auto fol = IFOL();
  Theorem all = where(axiom(fol, "allI"), {{"F", "%x. EX y. x = y"}});
  CHECK(aconv(all.prop(), prop(fol, "(!!x. Tr(EX y. x = y)) ==> Tr(ALL x. EX y. x = y)")));

  Subst bad;
  bad.emplace(VarKey{"A", 0, form_t}, Term::free("t", term_t));
  CHECK(kind_of([&] { instantiate(bad, axiom(thy, "impI")); }) == ErrorKind::IllTyped);

  // Hypotheses are never touched.
  Theorem h = implies_intr(prop(thy, "Tr(?A)"), assume(thy, prop(thy, "Tr(B)")));
  Theorem hi = where(h, {{"A", "C"}});
  CHECK(aconv(hi.prop(), prop(thy, "Tr(C) ==> Tr(B)")));
  CHECK(hi.hyps() == h.hyps());
}

TEST_CASE("equality rules") {
  auto thy = IFOL();
  Term a = Term::free("a", term_t);
  Term b = Term::free("b", term_t);
  Term c = Term::free("c", term_t);
  Theorem refl = reflexive(thy, a);
  CHECK(aconv(refl.prop(), mk_equals(a, a)));
  Theorem ab = assume(thy, mk_equals(a, b));
  Theorem bc = assume(thy, mk_equals(b, c));
  CHECK(aconv(symmetric(ab).prop(), mk_equals(b, a)));
  CHECK(aconv(transitive(ab, bc).prop(), mk_equals(a, c)));
  CHECK(transitive(ab, bc).hyps().size() == 2);
  CHECK(kind_of([&] { transitive(ab, ab); }) == ErrorKind::MiddleMismatch);
  CHECK(kind_of([&] { symmetric(assume(thy, prop(thy, "Tr(A)"))); }) == ErrorKind::NotEquality);

  Term x = Term::free("x", term_t);
  Theorem absx = abstract_rule(x, reflexive(thy, x));
  Term idx = Term::abs("x", term_t, Term::bound(0));
  CHECK(aconv(absx.prop(), mk_equals(idx, idx)));
  CHECK(kind_of([&] { abstract_rule(a, ab); }) == ErrorKind::EigenvariableViolation);

  Type ff = Type::fun(term_t, term_t);
  Term f = Term::free("f", ff);
  Term g = Term::free("g", ff);
  Theorem fg = assume(thy, mk_equals(f, g));
  Theorem comb = combination(fg, ab);
  CHECK(aconv(comb.prop(), mk_equals(Term::app(f, a), Term::app(g, b))));
  CHECK(kind_of([&] { combination(ab, ab); }) == ErrorKind::IllTyped);
}

TEST_CASE("logical equivalence") {
  auto thy = IPL();
  Term phi = prop(thy, "Tr(A & B)");
  Term psi = prop(thy, "Tr(B & A)");
  Theorem ab = implies_elim(
      implies_elim(where(axiom(thy, "conjI"), {{"A", "B"}, {"B", "A"}}),
                   implies_elim(where(axiom(thy, "conjE2"), {{"A", "A"}, {"B", "B"}}), assume(thy, phi))),
      implies_elim(where(axiom(thy, "conjE1"), {{"A", "A"}, {"B", "B"}}), assume(thy, phi)));
  Theorem ba = implies_elim(
      implies_elim(where(axiom(thy, "conjI"), {{"A", "A"}, {"B", "B"}}),
                   implies_elim(where(axiom(thy, "conjE2"), {{"A", "B"}, {"B", "A"}}), assume(thy, psi))),
      implies_elim(where(axiom(thy, "conjE1"), {{"A", "B"}, {"B", "A"}}), assume(thy, psi)));
  Theorem eq = equal_intr(ab, ba);
  CHECK(aconv(eq.prop(), mk_equals(phi, psi)));
  CHECK(eq.hyps().empty());

  Theorem out = equal_elim(eq, assume(thy, phi));
  CHECK(aconv(out.prop(), psi));
  CHECK(kind_of([&] { equal_elim(eq, assume(thy, psi)); }) == ErrorKind::Mismatch);
}

TEST_CASE("beta_eta_conversion") {
  auto thy = IFOL();
  Type ttt = Type::fun(term_t, Type::fun(term_t, term_t));
  Term f = Term::free("f", ttt);
  Term a = Term::free("a", term_t);
  Term redex = Term::app(Term::abs("x", term_t, Term::app(Term::app(f, Term::bound(0)), Term::bound(0))), a);
  Theorem th = beta_eta_conversion(thy, redex);
  auto eq = dest_equals(th.prop());
  REQUIRE(eq.has_value());
  CHECK(aconv(eq->second, Term::app(Term::app(f, a), a)));

  Theorem triv = beta_eta_conversion(thy, a);
  CHECK(aconv(triv.prop(), mk_equals(a, a)));

  Term fv = Term::var("F", 0, Type::fun(term_t, form_t));
  Term eta = Term::abs("x", term_t, Term::app(fv, Term::bound(0)));
  auto e2 = dest_equals(beta_eta_conversion(thy, eta).prop());
  REQUIRE(e2.has_value());
  CHECK(aconv(e2->second, fv));
}

TEST_CASE("axiom and varify") {
  auto thy = IPL();
  Theorem imp = axiom(thy, "impI");
  CHECK(aconv(imp.prop(), prop(thy, "(Tr(?A) ==> Tr(?B)) ==> Tr(?A --> ?B)")));
  CHECK(kind_of([&] { axiom(thy, "nope"); }) == ErrorKind::UnknownAxiom);

  // A closed theorem: A & B --> (C --> A & C) by primitives.
  Term ab = prop(thy, "Tr(A & B)");
  Term c = prop(thy, "Tr(C)");
  Theorem a = implies_elim(where(axiom(thy, "conjE1"), {{"A", "A"}, {"B", "B"}}), assume(thy, ab));
  Theorem ac = implies_elim(implies_elim(where(axiom(thy, "conjI"), {{"A", "A"}, {"B", "C"}}), a), assume(thy, c));
  Theorem inner = implies_elim(where(axiom(thy, "impI"), {{"A", "C"}, {"B", "A & C"}}), implies_intr(c, ac));
  Theorem outer = implies_elim(where(axiom(thy, "impI"), {{"A", "A & B"}, {"B", "C --> A & C"}}), implies_intr(ab, inner));
  REQUIRE(outer.hyps().empty());
  CHECK(aconv(varify(outer).prop(), prop(thy, "Tr(?A & ?B --> (?C --> ?A & ?C))")));
  CHECK(kind_of([&] { varify(a); }) == ErrorKind::HasHypotheses);
}

TEST_CASE("theorems from unrelated theories do not mix") {
  TheoryDecls d;
  d.name = "Other";
  d.types = {"form"};
  d.consts = {{"Tr", Type::fun(form_t, prop_type()), Fixity::prefix()}};
  auto other = Theory::extend({Theory::pure()}, d);
  Theorem mine = axiom(IPL(), "conjE1");
  Term o = prop(other, "Tr(A)");
  CHECK(kind_of([&] { implies_elim(mine, assume(other, o)); }) == ErrorKind::TheoryMismatch);
}

TEST_CASE("derivability round trip") {
  auto thy = IFOL();
  TermGen gen(5);
  std::vector<std::string> none;
  for (int i = 0; i < 100; ++i) {
    Term phi = gen.meta_formula(thy, 2, false);
    Term psi = gen.meta_formula(thy, 2, false);
    Theorem th = assume(thy, psi);
    Theorem back = implies_elim(implies_intr(phi, th), assume(thy, phi));
    CHECK(aconv(back.prop(), th.prop()));
    for (const auto& h : th.hyps()) {
      CHECK(std::any_of(back.hyps().begin(), back.hyps().end(), [&](const Term& k) { return aconv(k, h); }));
    }
  }
}

TEST_CASE("flex-flex constraints propagate and print as antecedents") {
  auto thy = IFOL();
  // A flex-flex pair arises from resolving a rule whose conclusion is ?P(a)
  // against a goal headed by another schematic.
  TheoryDecls d;
  d.name = "FF";
  d.consts = {{"a", term_t, Fixity::prefix()}};
  d.axioms = {{"ax", std::string("Tr(?P(a))"), 0}};
  auto ff = Theory::extend({thy}, d);
  ProofState st2 = initial_state(ff, prop(ff, "Tr(?Q(b::term))"));
  auto next = resolve_tac({axiom(ff, "ax")}, 1)(st2).first();
  REQUIRE(next.has_value());
  CHECK(next->nsubgoals == 0);
  CHECK_FALSE(next->thm.flexflex().empty());
  std::string text = print_theorem(SyntaxTable::of(*ff), next->thm);
  CHECK(text.find(" == ") != std::string::npos);
  CHECK(text.find(" ==> ") != std::string::npos);
  Theorem done = finalize(*next);
  CHECK(done.flexflex().empty());
}
