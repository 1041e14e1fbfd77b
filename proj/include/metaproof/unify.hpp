#pragma once

// Higher-order unification after Huet: SIMPL decomposition, MATCH by
// imitation and projection, flex-flex pairs deferred as constraints.

#include <memory>
#include <vector>

#include "metaproof/seq.hpp"
#include "metaproof/term.hpp"

namespace metaproof {

struct Env {
  Subst subst;
  int next_index = 0;

  /// Fully instantiate `t` (assignments may refer to other assigned
  /// variables) and normalize. Loose bound variables are left alone.
  Term apply(const Term& t) const;
  Subst resolved() const;
  bool assigned(const VarKey& v) const { return subst.count(v) > 0; }
  Term fresh_var(const std::string& name, const Type& type);
};

struct DisagreementPair {
  BinderContext ctx;
  Term lhs;
  Term rhs;
};

struct UnifyResult {
  Env env;
  std::vector<DisagreementPair> flexflex;
};

struct SearchReport {
  bool depth_exceeded = false;
};

struct UnifyOptions {
  int depth = -1;  // negative: default_unify_depth()
  std::shared_ptr<SearchReport> report;
};

/// Match-step bound per search path; METAPROOF_DEPTH overrides the built-in 20.
int default_unify_depth();
void set_default_unify_depth(int depth);

struct SimplResult {
  bool failed = false;
  Env env;
  std::vector<DisagreementPair> flex_rigid;
  std::vector<DisagreementPair> flex_flex;
};

/// Split a pair along equal rigid heads down to pairs of atoms or flexible
/// terms. Returns nullopt when two rigid applications clash. No assignment
/// is made.
std::optional<std::vector<DisagreementPair>> decompose(const DisagreementPair& pair);

/// Decompose rigid-rigid pairs, make the assignments that are most general
/// (a variable against a term, a pattern against a term it covers) and sort
/// what is left into flex-rigid and flex-flex pairs.
SimplResult simpl(const std::vector<DisagreementPair>& pairs, Env env);

/// Imitation (if the rigid head is a constant or free variable) followed by
/// projections in argument order. `pair.lhs` is flexible, `pair.rhs` rigid.
Seq<Env> match_step(const DisagreementPair& pair, const Env& env);

/// True when `v` occurs in `t` on a path that no substitution can erase.
bool occurs_rigidly(const VarKey& v, const Term& t);

Seq<UnifyResult> unify(const std::vector<DisagreementPair>& pairs, const Env& env,
                       const UnifyOptions& opts = {});

/// Smallest index above every schematic in the pairs.
int fresh_index_above(const std::vector<DisagreementPair>& pairs);

/// Close a pair over its binder context: `%ctx. lhs` and `%ctx. rhs`.
std::pair<Term, Term> close_pair(const DisagreementPair& pair);

}  // namespace metaproof
