#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "metaproof/term.hpp"

namespace metaproof {

class Theorem;

struct Fixity {
  enum class Kind { Prefix, InfixL, InfixR, Infix, Binder };
  Kind kind = Kind::Prefix;
  int precedence = 0;

  static Fixity prefix() { return {}; }
  static Fixity infixl(int p) { return {Kind::InfixL, p}; }
  static Fixity infixr(int p) { return {Kind::InfixR, p}; }
  static Fixity infix(int p) { return {Kind::Infix, p}; }
  static Fixity binder() { return {Kind::Binder, 0}; }

  bool is_infix() const { return kind == Kind::InfixL || kind == Kind::InfixR || kind == Kind::Infix; }
  bool is_binder() const { return kind == Kind::Binder; }
  friend bool operator==(const Fixity&, const Fixity&) = default;
};

struct ConstInfo {
  Type type;
  Fixity fixity;
  /// Only the meta constants `==` and `!!` are polymorphic; their stored type
  /// is a template over the placeholder basic type `'a`.
  bool polymorphic = false;
  std::string origin;
};

struct AxiomInfo {
  std::string name;
  Term prop;
  std::string origin;
};

struct DefInfo {
  std::string name;
  std::string const_name;
  Term rhs;
  std::string origin;
};

struct ConstDecl {
  std::string name;
  Type type;
  Fixity fixity;
};

/// Axiom propositions and definitions may be given as terms or as source text
/// parsed against the theory under construction.
struct AxiomDecl {
  std::string name;
  std::variant<Term, std::string> prop;
  std::size_t source_offset = 0;  // added to ParseError offsets
};

struct DefDecl {
  std::string name;
  std::variant<Term, std::string> equation;  // `K == a`
  std::size_t source_offset = 0;
};

struct TheoryDecls {
  std::string name;
  std::vector<std::string> types;
  std::vector<ConstDecl> consts;
  std::vector<AxiomDecl> axioms;
  std::vector<DefDecl> defs;
};

class Theory;
using TheoryRef = std::shared_ptr<const Theory>;

/// An immutable object-logic: declared types, constants with fixity, named
/// axioms (stored with schematic variables) and definitional equalities.
class Theory {
 public:
  /// The meta-logic alone: `prop`, `==>`, `!!`, `==`.
  static TheoryRef pure();
  static TheoryRef extend(const std::vector<TheoryRef>& parents, const TheoryDecls& decls);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& parent_names() const { return parents_; }
  const std::set<std::string>& ancestors() const { return ancestors_; }
  bool descends_from(const std::string& name) const { return ancestors_.count(name) > 0; }

  bool has_type(const std::string& name) const { return types_.count(name) > 0; }
  const std::set<std::string>& types() const { return types_; }
  const ConstInfo* find_const(const std::string& name) const;
  const std::map<std::string, ConstInfo>& consts() const { return consts_; }

  /// Axioms in declaration order, ancestors first.
  const std::vector<AxiomInfo>& axioms() const { return axioms_; }
  const AxiomInfo* find_axiom(const std::string& name) const;

  const std::vector<DefInfo>& defs() const { return defs_; }
  const DefInfo* find_def_for(const std::string& const_name) const;
  const DefInfo* find_def_named(const std::string& name) const;

  /// Every Const must be declared here with a matching type and every basic
  /// type must be declared. Throws IllTyped.
  void check_term(const Term& t) const;
  /// A Const term for a declared constant (instantiating polymorphic ones at `type`).
  Term make_const(const std::string& name, const std::optional<Type>& instance = std::nullopt) const;

 private:
  Theory() = default;

  std::string name_;
  std::vector<std::string> parents_;
  std::set<std::string> ancestors_;
  std::set<std::string> types_;
  std::map<std::string, ConstInfo> consts_;
  std::vector<AxiomInfo> axioms_;
  std::map<std::string, std::size_t> axiom_index_;
  std::vector<DefInfo> defs_;
};

/// "Pure", "IPL" or "IFOL". Throws UnknownTheory otherwise.
TheoryRef builtin(std::string_view name);

/// The descendant of the two theories; TheoryMismatch when unrelated.
TheoryRef join_theories(const TheoryRef& a, const TheoryRef& b);

/// Rewrite every occurrence of the defined constant by its definition, using
/// kernel equality reasoning. Throws NoSuchDef.
Theorem unfold_def(const Theory& thy, const std::string& const_name, const Theorem& th);
/// Rewrite instances of the definition's body back to the constant.
Theorem fold_def(const Theory& thy, const std::string& const_name, const Theorem& th);

}  // namespace metaproof
