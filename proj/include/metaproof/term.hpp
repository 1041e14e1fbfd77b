#pragma once

// Simply typed lambda terms: types, terms with de Bruijn bound variables,
// substitution for schematic variables, and beta-eta normalization.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace metaproof {

class Type {
 public:
  /// `prop`.
  Type();
  static Type basic(std::string name);
  static Type fun(Type dom, Type cod);
  /// `args[0] => args[1] => ... => result`
  static Type fun(std::span<const Type> args, Type result);

  bool is_fun() const;
  bool is_basic() const { return !is_fun(); }
  const std::string& name() const;  // basic only
  const Type& dom() const;          // function only
  const Type& cod() const;          // function only

  /// Argument types and final (non-function) result.
  std::pair<std::vector<Type>, Type> strip() const;
  std::size_t arity() const;

  std::string to_string() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Type prop_type();

enum class TermKind { Const, Free, Var, Bound, Abs, App };

/// Identity of a schematic variable: name, index and type together.
struct VarKey {
  std::string name;
  int index = 0;
  Type type = prop_type();

  friend bool operator==(const VarKey&, const VarKey&) = default;
  friend std::strong_ordering operator<=>(const VarKey& a, const VarKey& b);
};

class Term {
 public:
  static Term constant(std::string name, Type type);
  static Term free(std::string name, Type type);
  static Term var(std::string name, int index, Type type);
  static Term var(const VarKey& key) { return var(key.name, key.index, key.type); }
  static Term bound(int offset);
  static Term abs(std::string hint, Type var_type, Term body);
  static Term app(Term fun, Term arg);
  static Term apply(Term head, std::span<const Term> args);

  TermKind kind() const;
  bool is_const() const { return kind() == TermKind::Const; }
  bool is_free() const { return kind() == TermKind::Free; }
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_bound() const { return kind() == TermKind::Bound; }
  bool is_abs() const { return kind() == TermKind::Abs; }
  bool is_app() const { return kind() == TermKind::App; }

  /// Const, Free, Var: the symbol name. Abs: the display hint.
  const std::string& name() const;
  /// Const, Free, Var: declared type. Abs: type of the bound variable.
  const Type& type() const;
  int index() const;   // Var
  int offset() const;  // Bound
  VarKey var_key() const;
  const Term& body() const;  // Abs
  const Term& fun() const;   // App
  const Term& arg() const;   // App

  /// Smallest k such that every loose Bound offset is below k (0 when closed).
  int loose_bound_limit() const;
  bool is_closed() const { return loose_bound_limit() == 0; }
  /// Maximum schematic index, -1 when there are no schematics.
  int max_index() const;
  bool has_vars() const { return max_index() >= 0; }
  std::size_t size() const;
  /// Cached: no beta redex and no eta redex anywhere in the term.
  bool is_normal_form() const;

  /// Structural identity of the underlying node (cheap pre-check).
  bool same_node(const Term& other) const { return node_ == other.node_; }

  /// Alpha-equivalence: structural equality ignoring binder hints.
  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  /// Debug rendering without any syntax table.
  std::string debug_string() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Binder context, innermost binder first: `Bound i` has type `context[i]`.
using BinderContext = std::vector<Type>;

BinderContext push_binder(const BinderContext& ctx, const Type& t);

/// Type of `t` in `ctx`. Throws IllTyped or DanglingBound.
Type type_of(const Term& t, const BinderContext& ctx = {});

bool aconv(const Term& a, const Term& b);

/// Add `k` to every loose bound offset that is >= `cutoff`.
Term incr_bound(const Term& t, int k, int cutoff = 0);
/// Beta step: replace Bound 0 in `body` (the body of an abstraction) by `arg`.
Term subst_bound(const Term& body, const Term& arg);
bool has_loose_bound(const Term& t, int offset);
std::set<int> loose_bounds(const Term& t);

/// Beta-normal, eta-contracted form.
Term norm(const Term& t);
bool is_normal(const Term& t);
/// Head normal form (weak head beta reduction, no eta).
Term head_norm(const Term& t);

/// Head symbol and argument list of a nested application.
std::pair<Term, std::vector<Term>> strip_comb(const Term& t);
Term head_of(const Term& t);

/// Abstract over every occurrence of `atom` (a Free, Const or Var).
Term abstract_over(const Term& atom, const Term& t, std::string hint = {});

int max_index(const Term& t);
Term incr_indexes(const Term& t, int k);

std::set<VarKey> vars_of(const Term& t);
bool occurs_var(const VarKey& v, const Term& t);
/// Frees in first-occurrence order, deduplicated by (name, type).
std::vector<Term> frees_of(const Term& t);
bool occurs_free(const Term& free, const Term& t);
/// Names of every Const and Free symbol occurring in `t`.
std::set<std::string> symbol_names(const Term& t);

/// Mapping from schematic variables to terms of the same type.
using Subst = std::map<VarKey, Term>;

/// Capture-free replacement of schematic variables followed by normalization.
/// Throws IllTyped if an image type differs from its key.
Term apply_subst(const Subst& s, const Term& t);
/// Replacement without normalization. Images must be closed terms.
Term instantiate_vars(const Subst& s, const Term& t);
/// Replacement of Frees (by name and type) without normalization.
Term instantiate_frees(const std::map<std::pair<std::string, Type>, Term>& s, const Term& t);

// Meta-level connectives.
inline constexpr const char* kImplies = "==>";
inline constexpr const char* kAll = "!!";
inline constexpr const char* kEquals = "==";

Term mk_implies(const Term& a, const Term& b);
Term mk_implies(std::span<const Term> prems, const Term& concl);
std::optional<std::pair<Term, Term>> dest_implies(const Term& t);
/// Premises and conclusion of the right-nested implication chain.
std::pair<std::vector<Term>, Term> strip_implies(const Term& t);
/// Split off exactly `n` premises (fewer if the chain is shorter).
std::pair<std::vector<Term>, Term> strip_implies(const Term& t, std::size_t n);

Term mk_all(const std::string& hint, const Type& type, const Term& body);
Term mk_all_const(const Type& bound_type);
/// For `!!x. body` yields (hint, type, body); eta-contracted quantifiers are expanded.
struct QuantView {
  std::string hint;
  Type type;
  Term body;
};
std::optional<QuantView> dest_all(const Term& t);

Term mk_equals(const Term& a, const Term& b);
std::optional<std::pair<Term, Term>> dest_equals(const Term& t);

}  // namespace metaproof
