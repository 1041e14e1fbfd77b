#include "metaproof/tactic.hpp"

#include "metaproof/error.hpp"
#include "metaproof/unify.hpp"

namespace metaproof {

SubgoalView ProofState::subgoal_view(std::size_t i) const {
  auto subs = subgoals();
  if (i < 1 || i > subs.size()) fail(ErrorKind::NoSubgoal, "no subgoal " + std::to_string(i));
  return SubgoalView::of(subs[i - 1]);
}

ProofState initial_state(const TheoryRef& thy, const Term& goal) {
  Term g = norm(goal);
  if (g.has_vars()) return ProofState{trivial(thy, g), 1};
  return ProofState{implies_intr(g, assume(thy, g)), 1};
}

Tactic resolve_tac(std::vector<Theorem> rules, std::size_t i) {
  return [rules = std::move(rules), i](const ProofState& st) -> Seq<ProofState> {
    if (i < 1 || i > st.nsubgoals) return Seq<ProofState>::empty();
    std::size_t n = st.nsubgoals;
    Theorem state = st.thm;
    return Seq<Theorem>::from_vector(rules).flat_map([i, n, state](const Theorem& rule) {
      std::size_t m = premise_count(rule);
      return resolve(rule, i, state, n).map([n, m](const Theorem& th) { return ProofState{th, n - 1 + m}; });
    });
  };
}

Tactic assume_tac(std::size_t i) {
  return [i](const ProofState& st) -> Seq<ProofState> {
    if (i < 1 || i > st.nsubgoals) return Seq<ProofState>::empty();
    std::size_t n = st.nsubgoals;
    return assumption(i, st.thm, n).map([n](const Theorem& th) { return ProofState{th, n - 1}; });
  };
}

Tactic all_tac() {
  return [](const ProofState& st) { return Seq<ProofState>::single(st); };
}

Tactic no_tac() {
  return [](const ProofState&) { return Seq<ProofState>::empty(); };
}

Tactic then_(Tactic t1, Tactic t2) {
  return [t1 = std::move(t1), t2 = std::move(t2)](const ProofState& st) { return t1(st).flat_map(t2); };
}

Tactic orelse(Tactic t1, Tactic t2) {
  return [t1 = std::move(t1), t2 = std::move(t2)](const ProofState& st) {
    return Seq<ProofState>::delay([t1, t2, st]() -> Seq<ProofState>::Step {
      if (auto step = t1(st).pull()) return step;
      return t2(st).pull();
    });
  };
}

namespace {

Tactic repeat_from(const Tactic& t, int depth) {
  return [t, depth](const ProofState& st) -> Seq<ProofState> {
    if (depth > kRepeatLimit) fail(ErrorKind::RepeatLimit, "repeat exceeded " + std::to_string(kRepeatLimit) + " steps");
    Tactic deeper = [t, depth](const ProofState& s) { return repeat_from(t, depth + 1)(s); };
    return orelse(then_(t, deeper), all_tac())(st);
  };
}

Term constant_function(const Type& type, const Term& body) {
  auto [args, _] = type.strip();
  Term t = body;
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = Term::abs("x", *it, t);
  return t;
}

}  // namespace

Tactic repeat(Tactic t) { return repeat_from(t, 1); }

Theorem finalize(const ProofState& state, const std::vector<Term>& discharge) {
  if (state.nsubgoals > 0) {
    fail(ErrorKind::SubgoalsRemain, std::to_string(state.nsubgoals) + " subgoal(s) remain");
  }
  Theorem th = state.thm;
  for (int guard = 0; !th.flexflex().empty(); ++guard) {
    if (guard > 1000) fail(ErrorKind::UnresolvedFlexFlex, "flex-flex constraints do not converge");
    Env env;
    env.next_index = th.max_index() + 1;
    auto res = unify(th.flexflex(), env).first();
    if (!res) fail(ErrorKind::UnresolvedFlexFlex, "flex-flex constraints have no solution");
    Subst s = res->env.resolved();
    if (!s.empty()) {
      th = instantiate(s, th);
      continue;
    }
    const DisagreementPair& p = res->flexflex.front();
    Term hl = head_of(p.lhs);
    Term hr = head_of(p.rhs);
    if (!hl.is_var() || !hr.is_var()) fail(ErrorKind::UnresolvedFlexFlex, "constraint is not flexible");
    Type base = hl.type().strip().second;
    Term h = Term::var("H", th.max_index() + 1, base);
    Subst cs;
    cs.emplace(hl.var_key(), constant_function(hl.type(), h));
    cs.emplace(hr.var_key(), constant_function(hr.type(), h));
    th = instantiate(cs, th);
  }
  for (auto it = discharge.rbegin(); it != discharge.rend(); ++it) th = implies_intr(*it, th);
  if (th.hyps().empty()) th = varify(th);
  return th;
}

}  // namespace metaproof
