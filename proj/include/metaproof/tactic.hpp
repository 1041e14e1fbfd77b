#pragma once

#include <functional>
#include <vector>

#include "metaproof/kernel.hpp"
#include "metaproof/rule.hpp"
#include "metaproof/seq.hpp"

namespace metaproof {

/// `[| subgoal1; ...; subgoaln |] ==> goal` as a theorem, with n recorded
/// because the goal may itself be an implication.
struct ProofState {
  Theorem thm;
  std::size_t nsubgoals = 0;

  std::vector<Term> subgoals() const { return subgoals_of(thm, nsubgoals); }
  Term goal() const { return strip_implies(thm.prop(), nsubgoals).second; }
  SubgoalView subgoal_view(std::size_t i) const;
};

using Tactic = std::function<Seq<ProofState>(const ProofState&)>;

/// The trivial theorem `goal ==> goal` with one subgoal.
ProofState initial_state(const TheoryRef& thy, const Term& goal);

/// Each rule in turn, all unifiers of each. Never throws on failure.
Tactic resolve_tac(std::vector<Theorem> rules, std::size_t i);
Tactic assume_tac(std::size_t i);

Tactic all_tac();
Tactic no_tac();
Tactic then_(Tactic t1, Tactic t2);
Tactic orelse(Tactic t1, Tactic t2);
/// Apply until failure; the deepest states come first. Throws RepeatLimit
/// beyond `kRepeatLimit` nested applications.
Tactic repeat(Tactic t);
inline constexpr int kRepeatLimit = 1000;

/// Close the proof: no subgoals may remain; trivial flex-flex constraints are
/// solved; the listed hypotheses are discharged (first one outermost); free
/// variables become schematic when no hypotheses remain.
Theorem finalize(const ProofState& state, const std::vector<Term>& discharge = {});

}  // namespace metaproof
