#pragma once

// Derived meta-rules: lifting over assumptions and parameters, resolution
// and proof by assumption. Implemented directly for speed; the test suite
// checks them against derivations from the kernel primitives.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metaproof/kernel.hpp"
#include "metaproof/seq.hpp"

namespace metaproof {

struct Param {
  std::string name;
  Type type;
};

/// One entry of a subgoal's outer structure: a `!!` parameter or a `==>`
/// assumption. Assumptions live under the parameters that precede them.
using SkeletonEntry = std::variant<Param, Term>;

struct SubgoalView {
  std::vector<Param> params;
  /// Assumptions shifted to live under all parameters.
  std::vector<Term> asms;
  /// Conclusion under all parameters.
  Term concl;
  /// The outer structure exactly as it occurs.
  std::vector<SkeletonEntry> skeleton;

  static SubgoalView of(const Term& subgoal);
  /// Rebuild the subgoal around a new conclusion (under all parameters).
  Term reassemble(const Term& inner) const;
  /// Binder context of the conclusion, innermost first.
  BinderContext context() const;
};

/// `[| phi1; ...; phim |] ==> phi` becomes `[| Theta ==> phi1; ... |] ==> (Theta ==> phi)`.
Theorem lift_over_assumptions(const Theorem& rule, const std::vector<Term>& asms);
/// Schematic variables become functions of the parameters and every premise
/// and the conclusion gains the `!!` prefix.
Theorem lift_over_params(const Theorem& rule, const std::vector<Param>& params);
/// Both liftings at once, following an arbitrary subgoal skeleton.
Theorem lift_over_skeleton(const Theorem& rule, const std::vector<SkeletonEntry>& skeleton);

/// Number of premises of a rule: the full `==>` chain.
std::size_t premise_count(const Theorem& rule);

/// Subgoals of a proof state with `nsubgoals` premises.
std::vector<Term> subgoals_of(const Theorem& state, std::size_t nsubgoals);

/// Resolve `rule` against subgoal `i` (1-based). Throws NoSubgoal when out of
/// range and TheoryMismatch for unrelated theories; an empty stream means
/// there is no unifier. The result has nsubgoals - 1 + premise_count(rule) subgoals.
Seq<Theorem> resolve(const Theorem& rule, std::size_t i, const Theorem& state, std::size_t nsubgoals);

/// Solve subgoal `i` by one of its own assumptions, one result per
/// unifiable assumption. The result has nsubgoals - 1 subgoals.
Seq<Theorem> assumption(std::size_t i, const Theorem& state, std::size_t nsubgoals);

}  // namespace metaproof
