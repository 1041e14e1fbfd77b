#pragma once

// Shared test helpers and independent oracles. Nothing here calls the
// library's normalizer or unifier; the oracles reimplement what they check.

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "metaproof/kernel.hpp"
#include "metaproof/rule.hpp"
#include "metaproof/syntax.hpp"
#include "metaproof/tactic.hpp"
#include "metaproof/term.hpp"

namespace testing_support {

using namespace metaproof;

// --- goldens ---------------------------------------------------------------

struct GoldenEntry {
  std::string key;
  std::string text;
};

/// `key: text` lines; blank lines and lines starting with # are skipped.
std::vector<GoldenEntry> read_golden(const std::string& path);
std::string golden_path(const std::string& name);

/// Rename schematic variables to ?v0, ?v1, ... in order of first occurrence.
Term canonical_vars(const Term& t);
/// Equal up to alpha-conversion and a bijective renaming of schematics.
bool same_up_to_vars(const Term& a, const Term& b);

Term prop(const TheoryRef& thy, const std::string& src);
std::string show(const TheoryRef& thy, const Term& t);

/// Instantiate schematics of `th` by name (index 0), e.g. {{"B", "B"}};
/// each replacement is parsed at the schematic's type.
Theorem where(const Theorem& th, const std::vector<std::pair<std::string, std::string>>& inst);

/// First state of a tactic's stream; throws if the stream is empty.
ProofState step(const Tactic& tac, const ProofState& st);

// --- reduction oracle ------------------------------------------------------

/// Beta-normal form by repeated leftmost-outermost contraction, then eta.
Term reduce_leftmost_outermost(const Term& t);
/// Beta-normal form by applicative order (arguments first), then eta.
Term reduce_innermost(const Term& t);

// --- random generation -----------------------------------------------------

class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  Type random_type(int depth);
  /// A well-typed term of `type` under `ctx` (innermost first), with redexes.
  Term term(const Type& type, const BinderContext& ctx, int budget);

  /// An IFOL formula (type form) over free A, B, C : form, P, Q : term => form,
  /// a, b : term, f : term => term; bound term variables are used.
  Term formula(const TheoryRef& ifol, int depth, std::vector<std::string>& bound);
  Term fo_term(const TheoryRef& ifol, std::vector<std::string>& bound, int depth);
  /// A meta-formula over IFOL formulas, optionally with ?A-style schematics.
  Term meta_formula(const TheoryRef& ifol, int depth, bool schematics);

  /// A ground IPL proposition Tr(...) over A, B, C, D.
  Term ipl_prop(const TheoryRef& ipl, int depth);

 private:
  Term atom_of(const Type& type, const BinderContext& ctx);
  std::mt19937 rng_;
};

// --- first-order unification oracle ----------------------------------------

struct Fo {
  std::string sym;  // variable name or function symbol
  bool var = false;
  std::vector<Fo> args;
};

using FoSubst = std::map<std::string, Fo>;

/// Robinson's algorithm with occurs check; the result is idempotent.
std::optional<FoSubst> robinson(const Fo& a, const Fo& b);
Fo fo_apply(const FoSubst& s, const Fo& t);
bool fo_equal(const Fo& a, const Fo& b);

/// Symbols f/2, g/1, a/0, b/0 over type `term`; variables ?X, ?Y, ?Z.
Fo random_fo(TermGen& gen, int depth);
Term fo_to_term(const Fo& t);

// --- lifting oracle ---------------------------------------------------------

/// The lifting construction carried out with kernel primitives only: assume
/// each `asms ==> premise`, derive every premise under the assumptions,
/// apply the rule, then discharge everything.
Theorem lift_by_primitives(const Theorem& rule, const std::vector<Term>& asms);

}  // namespace testing_support
