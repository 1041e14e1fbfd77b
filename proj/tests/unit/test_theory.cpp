#include <doctest.h>

#include <fstream>
#include <sstream>

#include "metaproof/error.hpp"
#include "support.hpp"

using namespace testing_support;

namespace {

const Type form_t = Type::basic("form");

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(METAPROOF_THEORY_DIR) + "/" + name);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TheoryRef with_neg() {
  return parse_theory(R"(theory Neg extends IPL;
consts neg :: form => form;
defs neg_def: "neg == %A. A --> False";
)");
}

bool same_theory(const TheoryRef& a, const TheoryRef& b) {
  if (a->types() != b->types() || a->axioms().size() != b->axioms().size()) return false;
  if (a->consts().size() != b->consts().size()) return false;
  for (const auto& [n, info] : a->consts()) {
    const ConstInfo* other = b->find_const(n);
    if (!other || !(other->type == info.type) || !(other->fixity == info.fixity)) return false;
  }
  for (std::size_t i = 0; i < a->axioms().size(); ++i) {
    if (a->axioms()[i].name != b->axioms()[i].name) return false;
    if (!aconv(a->axioms()[i].prop, b->axioms()[i].prop)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("builtin theories") {
  CHECK(builtin("Pure")->axioms().empty());
  CHECK(builtin("Pure")->consts().size() == 3);
  CHECK(builtin("IPL")->axioms().size() == 9);
  CHECK(builtin("IFOL")->axioms().size() == 14);
  CHECK(builtin("IFOL")->descends_from("IPL"));
  CHECK(builtin("IFOL")->descends_from("Pure"));
  CHECK_FALSE(builtin("IPL")->descends_from("IFOL"));
  CHECK(kind_of([] { builtin("ZF"); }) == ErrorKind::UnknownTheory);
  const ConstInfo* eq = builtin("IFOL")->find_const("=");
  REQUIRE(eq);
  CHECK(eq->fixity == Fixity::infixl(50));
}

TEST_CASE("axiom table matches the golden transcription") {
  auto golden = read_golden(golden_path("axioms.txt"));
  REQUIRE(golden.size() == 14);
  for (const auto& g : golden) {
    auto dot = g.key.find('.');
    auto thy = builtin(g.key.substr(0, dot));
    Theorem ax = axiom(thy, g.key.substr(dot + 1));
    CHECK_MESSAGE(show(thy, ax.prop()) == g.text, g.key);
    CHECK(aconv(prop(thy, g.text), ax.prop()));
  }
}

TEST_CASE("shipped theory files agree with the builtin theories") {
  TheoryRef pure = parse_theory(slurp("Pure.thy"));
  CHECK(pure.get() == Theory::pure().get());
  TheoryRef ipl = parse_theory(slurp("IPL.thy"));
  CHECK(same_theory(ipl, builtin("IPL")));
  TheoryRef ifol = parse_theory(slurp("IFOL.thy"), [&](const std::string& n) {
    return n == "IPL" ? ipl : resolve_builtin(n);
  });
  CHECK(same_theory(ifol, builtin("IFOL")));
}

TEST_CASE("extend") {
  auto ipl = builtin("IPL");
  TheoryDecls d;
  d.name = "More";
  d.consts = {{"True", form_t, Fixity::prefix()}};
  d.axioms = {{"TrueI", std::string("Tr(True)")}};
  auto more = Theory::extend({ipl}, d);
  CHECK(more->axioms().size() == 10);
  CHECK(ipl->axioms().size() == 9);
  CHECK_FALSE(ipl->find_const("True"));
  CHECK(axiom(more, "TrueI").prop() == prop(more, "Tr(True)"));

  TheoryDecls dup = d;
  dup.consts = {{"&", form_t, Fixity::prefix()}};
  dup.axioms = {};
  CHECK(kind_of([&] { Theory::extend({ipl}, dup); }) == ErrorKind::DuplicateName);

  TheoryDecls dup_ax;
  dup_ax.name = "Dup";
  dup_ax.axioms = {{"conjI", std::string("Tr(False)")}};
  CHECK(kind_of([&] { Theory::extend({ipl}, dup_ax); }) == ErrorKind::DuplicateName);

  TheoryDecls dup_ty;
  dup_ty.name = "DupTy";
  dup_ty.types = {"form"};
  CHECK(kind_of([&] { Theory::extend({ipl}, dup_ty); }) == ErrorKind::DuplicateName);

  TheoryDecls not_prop;
  not_prop.name = "NotProp";
  not_prop.axioms = {{"bad", std::string("False")}};
  CHECK(kind_of([&] { Theory::extend({ipl}, not_prop); }) == ErrorKind::IllTypedAxiom);

  TheoryDecls free_var;
  free_var.name = "FreeVar";
  free_var.axioms = {{"bad", std::string("Tr(X::form)")}};
  CHECK(kind_of([&] { Theory::extend({ipl}, free_var); }) == ErrorKind::IllTypedAxiom);

  // Diamond inheritance through a shared ancestor is fine.
  TheoryDecls left;
  left.name = "Left";
  left.consts = {{"l", form_t, Fixity::prefix()}};
  TheoryDecls right;
  right.name = "Right";
  right.consts = {{"r", form_t, Fixity::prefix()}};
  TheoryDecls join;
  join.name = "Join";
  auto j = Theory::extend({Theory::extend({ipl}, left), Theory::extend({ipl}, right)}, join);
  CHECK(j->axioms().size() == 9);
  CHECK(j->find_const("l"));
  CHECK(j->find_const("r"));
}

TEST_CASE("definitions are checked") {
  auto def = [&](const std::string& consts_src, const std::string& eq) {
    return parse_theory("theory D extends IPL;\nconsts " + consts_src + ";\ndefs d: \"" + eq + "\";\n");
  };
  CHECK(with_neg()->defs().size() == 1);
  CHECK(kind_of([&] { def("k :: form", "k == k --> False"); }) == ErrorKind::BadDefinition);
  CHECK(kind_of([&] { def("k :: form", "k == ?A"); }) == ErrorKind::BadDefinition);
  CHECK(kind_of([&] { def("k :: form", "k == A::form"); }) == ErrorKind::BadDefinition);
  CHECK(kind_of([&] { def("k :: form", "Tr(k) ==> Tr(False)"); }) == ErrorKind::BadDefinition);
  CHECK(kind_of([&] { def("k :: form", "False == k"); }) == ErrorKind::BadDefinition);
}

TEST_CASE("unfold and fold definitions") {
  auto thy = with_neg();
  Theorem th = assume(thy, prop(thy, "Tr(neg(B))"));
  Theorem un = unfold_def(*thy, "neg", th);
  CHECK(aconv(un.prop(), prop(thy, "Tr(B --> False)")));
  CHECK(un.hyps() == th.hyps());

  Theorem back = fold_def(*thy, "neg", un);
  CHECK(aconv(back.prop(), th.prop()));

  Theorem nested = assume(thy, prop(thy, "Tr((B --> False) --> False) ==> Tr(C)"));
  Theorem f = fold_def(*thy, "neg", nested);
  CHECK(aconv(f.prop(), prop(thy, "Tr(neg(neg(B))) ==> Tr(C)")));
  CHECK(aconv(unfold_def(*thy, "neg", f).prop(), nested.prop()));

  // By definition name as well as constant name.
  CHECK(aconv(unfold_def(*thy, "neg_def", th).prop(), un.prop()));
  CHECK(kind_of([&] { unfold_def(*thy, "conj", th); }) == ErrorKind::NoSuchDef);
  CHECK(kind_of([&] { fold_def(*builtin("IPL"), "neg", th); }) == ErrorKind::NoSuchDef);
}

TEST_CASE("theory files") {
  auto t = parse_theory("theory Empty extends IPL;\n");
  CHECK(t->name() == "Empty");
  CHECK(t->axioms().size() == 9);
  auto e = parse_theory("theory E extends IPL;\nend\n");
  CHECK(e->axioms().size() == 9);
  CHECK(kind_of([] { parse_theory("theory X extends Nowhere;"); }) == ErrorKind::UnknownTheory);
  CHECK(kind_of([] { parse_theory("theory X extends IPL; axioms a: \"Tr(\";"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_theory("theory X extends IPL; consts c :: nope;"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_theory("theory X extends IPL; lemmas"); }) == ErrorKind::ParseError);

  try {
    parse_theory("theory X extends IPL;\naxioms a: \"Tr(A &)\";\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    REQUIRE(e.has_offset());
    std::string src = "theory X extends IPL;\naxioms a: \"Tr(A &)\";\n";
    CHECK(src[e.offset()] == ')');
  }
}
