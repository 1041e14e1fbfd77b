#include "metaproof/theory.hpp"

#include <algorithm>
#include <mutex>

#include "metaproof/error.hpp"
#include "metaproof/syntax.hpp"

namespace metaproof {

namespace {

const Type& poly_var() {
  static const Type a = Type::basic("'a");
  return a;
}

/// Match a polymorphic template against a concrete type; `'a` binds once.
bool match_template(const Type& tmpl, const Type& ty, std::optional<Type>& binding) {
  if (tmpl.is_basic() && tmpl.name() == poly_var().name()) {
    if (binding) return *binding == ty;
    binding = ty;
    return true;
  }
  if (tmpl.is_fun() != ty.is_fun()) return false;
  if (tmpl.is_basic()) return tmpl.name() == ty.name();
  return match_template(tmpl.dom(), ty.dom(), binding) && match_template(tmpl.cod(), ty.cod(), binding);
}

Type subst_template(const Type& tmpl, const Type& inst) {
  if (tmpl.is_basic()) return tmpl.name() == poly_var().name() ? inst : tmpl;
  return Type::fun(subst_template(tmpl.dom(), inst), subst_template(tmpl.cod(), inst));
}

void check_type_declared(const Theory& thy, const Type& ty) {
  if (ty.is_fun()) {
    check_type_declared(thy, ty.dom());
    check_type_declared(thy, ty.cod());
    return;
  }
  if (!thy.has_type(ty.name())) fail(ErrorKind::IllTyped, "undeclared type " + ty.name());
}

Error shifted(const Error& e, std::size_t by, std::optional<ErrorKind> kind = std::nullopt) {
  std::size_t off = e.has_offset() ? e.offset() + by : Error::npos;
  return Error(kind.value_or(e.kind()), e.what(), off);
}

}  // namespace

const ConstInfo* Theory::find_const(const std::string& name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : &it->second;
}

const AxiomInfo* Theory::find_axiom(const std::string& name) const {
  auto it = axiom_index_.find(name);
  return it == axiom_index_.end() ? nullptr : &axioms_[it->second];
}

const DefInfo* Theory::find_def_for(const std::string& const_name) const {
  for (const auto& d : defs_) {
    if (d.const_name == const_name) return &d;
  }
  return nullptr;
}

const DefInfo* Theory::find_def_named(const std::string& name) const {
  for (const auto& d : defs_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

void Theory::check_term(const Term& t) const {
  switch (t.kind()) {
    case TermKind::Const: {
      const ConstInfo* info = find_const(t.name());
      if (!info) fail(ErrorKind::IllTyped, "unknown constant " + t.name() + " in theory " + name_);
      if (info->polymorphic) {
        std::optional<Type> binding;
        if (!match_template(info->type, t.type(), binding)) {
          fail(ErrorKind::IllTyped, "constant " + t.name() + " used at type " + t.type().to_string());
        }
        if (binding) check_type_declared(*this, *binding);
      } else if (!(info->type == t.type())) {
        fail(ErrorKind::IllTyped, "constant " + t.name() + " has type " + info->type.to_string() +
                                      ", not " + t.type().to_string());
      }
      return;
    }
    case TermKind::Free:
    case TermKind::Var:
      check_type_declared(*this, t.type());
      return;
    case TermKind::Bound:
      return;
    case TermKind::Abs:
      check_type_declared(*this, t.type());
      check_term(t.body());
      return;
    case TermKind::App:
      check_term(t.fun());
      check_term(t.arg());
      return;
  }
}

Term Theory::make_const(const std::string& name, const std::optional<Type>& instance) const {
  const ConstInfo* info = find_const(name);
  if (!info) fail(ErrorKind::IllTyped, "unknown constant " + name);
  if (!info->polymorphic) return Term::constant(name, info->type);
  if (!instance) fail(ErrorKind::IllTyped, "constant " + name + " needs a type instance");
  return Term::constant(name, subst_template(info->type, *instance));
}

TheoryRef Theory::pure() {
  static const TheoryRef thy = [] {
    auto t = std::shared_ptr<Theory>(new Theory());
    t->name_ = "Pure";
    t->ancestors_ = {"Pure"};
    t->types_ = {"prop"};
    Type p = prop_type();
    Type a = poly_var();
    t->consts_[kImplies] = ConstInfo{Type::fun(p, Type::fun(p, p)), Fixity::infixr(1), false, "Pure"};
    t->consts_[kEquals] = ConstInfo{Type::fun(a, Type::fun(a, p)), Fixity::infix(2), true, "Pure"};
    t->consts_[kAll] = ConstInfo{Type::fun(Type::fun(a, p), p), Fixity::binder(), true, "Pure"};
    return TheoryRef(std::move(t));
  }();
  return thy;
}

TheoryRef Theory::extend(const std::vector<TheoryRef>& parents_in, const TheoryDecls& decls) {
  std::vector<TheoryRef> parents = parents_in;
  if (parents.empty()) parents.push_back(pure());
  if (decls.name.empty()) fail(ErrorKind::BadCommand, "theory needs a name");

  auto thy = std::shared_ptr<Theory>(new Theory());
  thy->name_ = decls.name;
  for (const auto& p : parents) {
    thy->parents_.push_back(p->name());
    thy->ancestors_.insert(p->ancestors_.begin(), p->ancestors_.end());
    thy->types_.insert(p->types_.begin(), p->types_.end());
    for (const auto& [n, info] : p->consts_) {
      auto [it, fresh] = thy->consts_.emplace(n, info);
      if (!fresh && it->second.origin != info.origin) {
        fail(ErrorKind::DuplicateName, "constant " + n + " declared in both " + it->second.origin +
                                           " and " + info.origin);
      }
    }
    for (const auto& ax : p->axioms_) {
      auto it = thy->axiom_index_.find(ax.name);
      if (it != thy->axiom_index_.end()) {
        if (thy->axioms_[it->second].origin != ax.origin) {
          fail(ErrorKind::DuplicateName, "axiom " + ax.name + " inherited twice");
        }
        continue;
      }
      thy->axiom_index_[ax.name] = thy->axioms_.size();
      thy->axioms_.push_back(ax);
    }
    for (const auto& d : p->defs_) {
      if (!thy->find_def_named(d.name)) thy->defs_.push_back(d);
    }
  }
  if (thy->ancestors_.count(decls.name)) {
    fail(ErrorKind::DuplicateName, "theory name " + decls.name + " is already an ancestor");
  }
  thy->ancestors_.insert(decls.name);

  for (const auto& ty : decls.types) {
    if (!thy->types_.insert(ty).second) fail(ErrorKind::DuplicateName, "type " + ty + " already declared");
  }
  for (const auto& c : decls.consts) {
    if (thy->consts_.count(c.name)) fail(ErrorKind::DuplicateName, "constant " + c.name + " already declared");
    check_type_declared(*thy, c.type);
    if (c.fixity.is_binder()) {
      if (!(c.type.is_fun() && c.type.dom().is_fun())) {
        fail(ErrorKind::IllTyped, "binder " + c.name + " must take a function argument");
      }
    }
    if (c.fixity.is_infix() && c.type.arity() < 2) {
      fail(ErrorKind::IllTyped, "infix " + c.name + " must take two arguments");
    }
    thy->consts_[c.name] = ConstInfo{c.type, c.fixity, false, decls.name};
  }

  if (!decls.axioms.empty() || !decls.defs.empty()) {
    SyntaxTable table = SyntaxTable::of(*thy);
    for (const auto& ax : decls.axioms) {
      if (thy->axiom_index_.count(ax.name)) fail(ErrorKind::DuplicateName, "axiom " + ax.name + " already declared");
      Term prop = Term::bound(0);
      try {
        if (const auto* src = std::get_if<std::string>(&ax.prop)) {
          prop = parse_term(table, *src, ParseOptions{true, prop_type(), {}, {}});
        } else {
          prop = norm(std::get<Term>(ax.prop));
        }
        if (!(type_of(prop) == prop_type())) fail(ErrorKind::IllTyped, "axiom is not a proposition");
        thy->check_term(prop);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::IllTyped || e.kind() == ErrorKind::DanglingBound) {
          throw shifted(e, ax.source_offset, ErrorKind::IllTypedAxiom);
        }
        throw shifted(e, ax.source_offset);
      }
      if (!frees_of(prop).empty()) {
        fail(ErrorKind::IllTypedAxiom, "axiom " + ax.name + " mentions free variable " + frees_of(prop)[0].name());
      }
      thy->axiom_index_[ax.name] = thy->axioms_.size();
      thy->axioms_.push_back(AxiomInfo{ax.name, prop, decls.name});
    }
    for (const auto& d : decls.defs) {
      if (thy->find_def_named(d.name)) fail(ErrorKind::DuplicateName, "definition " + d.name + " already declared");
      Term eq = Term::bound(0);
      try {
        if (const auto* src = std::get_if<std::string>(&d.equation)) {
          eq = parse_term(table, *src, ParseOptions{true, prop_type(), {}, {}});
        } else {
          eq = norm(std::get<Term>(d.equation));
        }
        thy->check_term(eq);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::IllTyped) throw shifted(e, d.source_offset, ErrorKind::BadDefinition);
        throw shifted(e, d.source_offset);
      }
      auto sides = dest_equals(eq);
      if (!sides) fail(ErrorKind::BadDefinition, "definition " + d.name + " is not of the form K == a");
      const Term& lhs = sides->first;
      const Term& rhs = sides->second;
      if (!lhs.is_const()) fail(ErrorKind::BadDefinition, "definition " + d.name + " must define a constant");
      const ConstInfo* info = thy->find_const(lhs.name());
      if (!info || info->origin != decls.name) {
        fail(ErrorKind::BadDefinition, "cannot define " + lhs.name() + ": it is not declared in " + decls.name);
      }
      if (!frees_of(rhs).empty() || rhs.has_vars() || !rhs.is_closed()) {
        fail(ErrorKind::BadDefinition, "body of " + d.name + " must be closed");
      }
      if (symbol_names(rhs).count(lhs.name())) {
        fail(ErrorKind::BadDefinition, "definition " + d.name + " is recursive");
      }
      if (thy->find_def_for(lhs.name())) fail(ErrorKind::BadDefinition, lhs.name() + " is already defined");
      thy->defs_.push_back(DefInfo{d.name, lhs.name(), rhs, decls.name});
    }
  }
  return TheoryRef(std::move(thy));
}

TheoryRef join_theories(const TheoryRef& a, const TheoryRef& b) {
  if (a.get() == b.get() || a->descends_from(b->name())) return a;
  if (b->descends_from(a->name())) return b;
  fail(ErrorKind::TheoryMismatch, "theories " + a->name() + " and " + b->name() + " are unrelated");
}

namespace {

struct Builder {
  Type prop = prop_type();
  Type form = Type::basic("form");
  Type term = Type::basic("term");

  Term tr(const Term& a) const { return Term::app(Term::constant("Tr", Type::fun(form, prop)), a); }
  Term bin(const char* op, const Term& a, const Term& b) const {
    Term c = Term::constant(op, Type::fun(form, Type::fun(form, form)));
    return Term::app(Term::app(c, a), b);
  }
  Term fv(const char* n) const { return Term::var(n, 0, form); }
  Term imp(const Term& a, const Term& b) const { return mk_implies(a, b); }
  Term imp(std::initializer_list<Term> prems, const Term& c) const {
    std::vector<Term> ps(prems);
    return mk_implies(ps, c);
  }
};

TheoryRef build_ipl() {
  Builder b;
  TheoryDecls d;
  d.name = "IPL";
  d.types = {"form"};
  Type ff = Type::fun(b.form, Type::fun(b.form, b.form));
  d.consts = {
      {"Tr", Type::fun(b.form, b.prop), Fixity::prefix()},
      {"False", b.form, Fixity::prefix()},
      {"-->", ff, Fixity::infixr(25)},
      {"|", ff, Fixity::infixr(30)},
      {"&", ff, Fixity::infixr(35)},
  };
  Term A = b.fv("A"), B = b.fv("B"), C = b.fv("C");
  auto T = [&](const Term& x) { return b.tr(x); };
  d.axioms = {
      {"conjI", b.imp({T(A), T(B)}, T(b.bin("&", A, B)))},
      {"conjE1", b.imp(T(b.bin("&", A, B)), T(A))},
      {"conjE2", b.imp(T(b.bin("&", A, B)), T(B))},
      {"disjI1", b.imp(T(A), T(b.bin("|", A, B)))},
      {"disjI2", b.imp(T(B), T(b.bin("|", A, B)))},
      {"disjE", b.imp({T(b.bin("|", A, B)), b.imp(T(A), T(C)), b.imp(T(B), T(C))}, T(C))},
      {"impI", b.imp(b.imp(T(A), T(B)), T(b.bin("-->", A, B)))},
      {"mp", b.imp({T(b.bin("-->", A, B)), T(A)}, T(B))},
      {"FalseE", b.imp(T(Term::constant("False", b.form)), T(A))},
  };
  return Theory::extend({Theory::pure()}, d);
}

TheoryRef build_ifol(const TheoryRef& ipl) {
  Builder b;
  TheoryDecls d;
  d.name = "IFOL";
  d.types = {"term"};
  Type pred = Type::fun(b.term, b.form);
  Type quant = Type::fun(pred, b.form);
  d.consts = {
      {"ALL", quant, Fixity::binder()},
      {"EX", quant, Fixity::binder()},
      {"=", Type::fun(b.term, Type::fun(b.term, b.form)), Fixity::infixl(50)},
  };
  Term F = Term::var("F", 0, pred);
  Term y = Term::var("y", 0, b.term);
  Term B = b.fv("B");
  auto T = [&](const Term& x) { return b.tr(x); };
  auto Fx = Term::app(F, Term::bound(0));
  auto all_x = Term::app(Term::constant("ALL", quant), Term::abs("x", b.term, Fx));
  auto ex_x = Term::app(Term::constant("EX", quant), Term::abs("x", b.term, Fx));
  auto eq = Term::constant("=", Type::fun(b.term, Type::fun(b.term, b.form)));
  d.axioms = {
      {"allI", b.imp(mk_all("x", b.term, T(Fx)), T(all_x))},
      {"spec", b.imp(T(all_x), T(Term::app(F, y)))},
      {"exI", b.imp(T(Term::app(F, y)), T(ex_x))},
      {"exE", b.imp({T(ex_x), mk_all("x", b.term, b.imp(T(Fx), T(B)))}, T(B))},
      {"refl", T(Term::app(Term::app(eq, y), y))},
  };
  return Theory::extend({ipl}, d);
}

}  // namespace

TheoryRef builtin(std::string_view name) {
  static std::once_flag once;
  static TheoryRef ipl, ifol;
  std::call_once(once, [] {
    ipl = build_ipl();
    ifol = build_ifol(ipl);
  });
  if (name == "Pure") return Theory::pure();
  if (name == "IPL") return ipl;
  if (name == "IFOL") return ifol;
  fail(ErrorKind::UnknownTheory, "unknown theory " + std::string(name));
}

}  // namespace metaproof
