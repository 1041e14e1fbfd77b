#pragma once

// The trusted core. A Theorem can only be produced by the functions declared
// here, plus the derived rules in rule.cpp which are granted the same access.

#include <string>
#include <vector>

#include "metaproof/term.hpp"
#include "metaproof/theory.hpp"
#include "metaproof/unify.hpp"

namespace metaproof {

namespace detail {
struct TrustedAccess;
}

/// `hyps |- prop`, subject to the flex-flex constraints `flexflex`.
class Theorem {
 public:
  const TheoryRef& theory() const { return thy_; }
  const std::string& theory_name() const { return thy_->name(); }
  /// Sorted, without duplicates, free of schematic variables.
  const std::vector<Term>& hyps() const { return hyps_; }
  /// Closed pairs (empty binder context), each side flexible.
  const std::vector<DisagreementPair>& flexflex() const { return flexflex_; }
  const Term& prop() const { return prop_; }
  /// Name of the kernel rule that produced this theorem.
  const std::string& rule_name() const { return rule_; }

  int max_index() const;

 private:
  friend struct detail::TrustedAccess;
  Theorem(TheoryRef thy, std::vector<Term> hyps, std::vector<DisagreementPair> flexflex, Term prop,
          std::string rule)
      : thy_(std::move(thy)),
        hyps_(std::move(hyps)),
        flexflex_(std::move(flexflex)),
        prop_(std::move(prop)),
        rule_(std::move(rule)) {}

  TheoryRef thy_;
  std::vector<Term> hyps_;
  std::vector<DisagreementPair> flexflex_;
  Term prop_;
  std::string rule_;
};

Theorem assume(const TheoryRef& thy, const Term& phi);
Theorem implies_intr(const Term& phi, const Theorem& th);
Theorem implies_elim(const Theorem& th_ab, const Theorem& th_a);
/// Generalize over a free variable that is not free in the hypotheses.
Theorem forall_intr(const Term& x, const Theorem& th);
Theorem forall_elim(const Term& t, const Theorem& th);
/// Instantiate schematic variables in the proposition and the constraints.
Theorem instantiate(const Subst& s, const Theorem& th);

Theorem reflexive(const TheoryRef& thy, const Term& a);
Theorem symmetric(const Theorem& th);
Theorem transitive(const Theorem& th1, const Theorem& th2);
Theorem abstract_rule(const Term& x, const Theorem& th);
Theorem combination(const Theorem& th1, const Theorem& th2);
/// From `phi |- psi` and `psi |- phi` derive `|- phi == psi`.
Theorem equal_intr(const Theorem& th1, const Theorem& th2);
Theorem equal_elim(const Theorem& th_eq, const Theorem& th);
/// `|- t == norm(t)`; as every stored term is normal, both sides print alike.
Theorem beta_eta_conversion(const TheoryRef& thy, const Term& t);

/// Outer `!!` of the stored axiom become schematic variables of index 0.
Theorem axiom(const TheoryRef& thy, const std::string& name);
/// `|- K == a` for the definition named `name` (or defining constant `name`).
Theorem definition(const TheoryRef& thy, const std::string& name);
/// Free variables become schematic variables. Throws HasHypotheses.
Theorem varify(const Theorem& th);
/// `|- phi ==> phi` for any proposition, schematic or not.
Theorem trivial(const TheoryRef& thy, const Term& phi);

/// Add hypotheses union (aconv-deduplicated, sorted).
std::vector<Term> union_hyps(const std::vector<Term>& a, const std::vector<Term>& b);

}  // namespace metaproof
