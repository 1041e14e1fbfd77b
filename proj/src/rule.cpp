#include "metaproof/rule.hpp"

#include <algorithm>

#include "metaproof/error.hpp"
#include "trusted.hpp"

namespace metaproof {

using detail::TrustedAccess;

SubgoalView SubgoalView::of(const Term& subgoal) {
  SubgoalView v{{}, {}, subgoal, {}};
  std::vector<std::pair<Term, int>> raw;
  Term cur = subgoal;
  int depth = 0;
  for (;;) {
    if (auto q = dest_all(cur)) {
      Param p{q->hint.empty() ? "x" : q->hint, q->type};
      v.params.push_back(p);
      v.skeleton.emplace_back(p);
      cur = q->body;
      ++depth;
    } else if (auto d = dest_implies(cur)) {
      v.skeleton.emplace_back(d->first);
      raw.emplace_back(d->first, depth);
      cur = d->second;
    } else {
      break;
    }
  }
  v.concl = cur;
  for (const auto& [a, d] : raw) v.asms.push_back(incr_bound(a, depth - d));
  return v;
}

Term SubgoalView::reassemble(const Term& inner) const {
  Term t = inner;
  for (auto it = skeleton.rbegin(); it != skeleton.rend(); ++it) {
    if (const auto* p = std::get_if<Param>(&*it)) {
      t = Term::app(mk_all_const(p->type), Term::abs(p->name, p->type, t));
    } else {
      t = mk_implies(std::get<Term>(*it), t);
    }
  }
  return t;
}

BinderContext SubgoalView::context() const {
  BinderContext ctx;
  for (auto it = params.rbegin(); it != params.rend(); ++it) ctx.push_back(it->type);
  return ctx;
}

namespace {

/// Replace each schematic `?v : T` by `?v : S1 => ... => Sk => T` applied to
/// the parameters, where `depth` binders separate us from the innermost one.
Term lift_vars(const Term& t, const std::vector<Type>& ptypes, int depth) {
  if (ptypes.empty() || !t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      auto k = static_cast<int>(ptypes.size());
      std::vector<Term> args;
      for (int j = 0; j < k; ++j) args.push_back(Term::bound(depth + k - 1 - j));
      return Term::apply(Term::var(t.name(), t.index(), Type::fun(ptypes, t.type())), args);
    }
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), lift_vars(t.body(), ptypes, depth + 1));
    case TermKind::App:
      return Term::app(lift_vars(t.fun(), ptypes, depth), lift_vars(t.arg(), ptypes, depth));
    default:
      return t;
  }
}

struct Lifted {
  std::vector<Term> prems;  // wrapped in the skeleton
  Term concl_inner;         // under all parameters, not wrapped
  Term concl;               // wrapped
  std::vector<DisagreementPair> flexflex;
};

Lifted lift_parts(const Term& prop, const std::vector<DisagreementPair>& ff, std::size_t nprems,
                  const SubgoalView& view) {
  std::vector<Type> ptypes;
  for (const auto& p : view.params) ptypes.push_back(p.type);
  auto [prems, concl] = strip_implies(prop, nprems);
  Lifted out{{}, lift_vars(concl, ptypes, 0), Term::bound(0), {}};
  for (const auto& p : prems) out.prems.push_back(norm(view.reassemble(lift_vars(p, ptypes, 0))));
  out.concl = norm(view.reassemble(out.concl_inner));
  BinderContext ctx = view.context();
  for (const auto& p : ff) {
    auto [l, r] = close_pair(DisagreementPair{ctx, lift_vars(p.lhs, ptypes, 0), lift_vars(p.rhs, ptypes, 0)});
    out.flexflex.push_back(DisagreementPair{{}, l, r});
  }
  return out;
}

SubgoalView view_of_skeleton(const std::vector<SkeletonEntry>& skeleton) {
  SubgoalView v{{}, {}, Term::bound(0), skeleton};
  for (const auto& e : skeleton) {
    if (const auto* p = std::get_if<Param>(&e)) v.params.push_back(*p);
  }
  return v;
}

std::vector<DisagreementPair> close_all(const std::vector<DisagreementPair>& pairs) {
  std::vector<DisagreementPair> out;
  for (const auto& p : pairs) {
    auto [l, r] = close_pair(p);
    if (l == r) continue;
    bool dup = std::any_of(out.begin(), out.end(), [&](const DisagreementPair& q) {
      return (q.lhs == l && q.rhs == r) || (q.lhs == r && q.rhs == l);
    });
    if (!dup) out.push_back(DisagreementPair{{}, l, r});
  }
  return out;
}

}  // namespace

Theorem lift_over_skeleton(const Theorem& rule, const std::vector<SkeletonEntry>& skeleton) {
  if (skeleton.empty()) return rule;
  SubgoalView view = view_of_skeleton(skeleton);
  std::size_t n = premise_count(rule);
  Lifted l = lift_parts(rule.prop(), rule.flexflex(), n, view);
  return TrustedAccess::make(rule.theory(), rule.hyps(), l.flexflex, norm(mk_implies(l.prems, l.concl)), "lift");
}

Theorem lift_over_assumptions(const Theorem& rule, const std::vector<Term>& asms) {
  std::vector<SkeletonEntry> sk;
  for (const auto& a : asms) {
    if (!a.is_closed()) fail(ErrorKind::DanglingBound, "assumption has loose bound variables");
    rule.theory()->check_term(a);
    if (!(type_of(a) == prop_type())) fail(ErrorKind::IllTyped, "assumption is not a proposition");
    sk.emplace_back(norm(a));
  }
  return lift_over_skeleton(rule, sk);
}

Theorem lift_over_params(const Theorem& rule, const std::vector<Param>& params) {
  std::vector<SkeletonEntry> sk;
  for (const auto& p : params) {
    rule.theory()->check_term(Term::free(p.name, p.type));
    sk.emplace_back(p);
  }
  return lift_over_skeleton(rule, sk);
}

std::size_t premise_count(const Theorem& rule) { return strip_implies(rule.prop()).first.size(); }

std::vector<Term> subgoals_of(const Theorem& state, std::size_t nsubgoals) {
  auto [subs, goal] = strip_implies(state.prop(), nsubgoals);
  if (subs.size() != nsubgoals) fail(ErrorKind::NoSubgoal, "proof state has fewer subgoals than expected");
  return subs;
}

namespace {

int max_index_of(const std::vector<DisagreementPair>& ps) {
  int m = -1;
  for (const auto& p : ps) m = std::max({m, p.lhs.max_index(), p.rhs.max_index()});
  return m;
}

}  // namespace

Seq<Theorem> resolve(const Theorem& rule, std::size_t i, const Theorem& state, std::size_t nsubgoals) {
  if (i < 1 || i > nsubgoals) fail(ErrorKind::NoSubgoal, "no subgoal " + std::to_string(i));
  TheoryRef thy = join_theories(rule.theory(), state.theory());
  auto [subs, goal] = strip_implies(state.prop(), nsubgoals);
  if (subs.size() != nsubgoals) fail(ErrorKind::NoSubgoal, "proof state has fewer subgoals than expected");

  SubgoalView view = SubgoalView::of(subs[i - 1]);
  int inc = state.max_index() + 1;
  Term rprop = incr_indexes(rule.prop(), inc);
  std::vector<DisagreementPair> rff;
  for (const auto& p : rule.flexflex()) {
    rff.push_back(DisagreementPair{{}, incr_indexes(p.lhs, inc), incr_indexes(p.rhs, inc)});
  }
  Lifted lifted = lift_parts(rprop, rff, premise_count(rule), view);

  std::vector<DisagreementPair> pairs{DisagreementPair{view.context(), lifted.concl_inner, view.concl}};
  pairs.insert(pairs.end(), state.flexflex().begin(), state.flexflex().end());
  pairs.insert(pairs.end(), lifted.flexflex.begin(), lifted.flexflex.end());

  std::vector<Term> new_subs(subs.begin(), subs.begin() + static_cast<long>(i - 1));
  new_subs.insert(new_subs.end(), lifted.prems.begin(), lifted.prems.end());
  new_subs.insert(new_subs.end(), subs.begin() + static_cast<long>(i), subs.end());
  Term skeleton_prop = mk_implies(new_subs, goal);
  std::vector<Term> hyps = union_hyps(state.hyps(), rule.hyps());

  Env env;
  env.next_index = std::max({fresh_index_above(pairs), skeleton_prop.max_index() + 1, max_index_of(pairs) + 1});
  return unify(pairs, env).map([thy, hyps, skeleton_prop](const UnifyResult& r) {
    return TrustedAccess::make(thy, hyps, close_all(r.flexflex), r.env.apply(skeleton_prop), "resolve");
  });
}

Seq<Theorem> assumption(std::size_t i, const Theorem& state, std::size_t nsubgoals) {
  if (i < 1 || i > nsubgoals) fail(ErrorKind::NoSubgoal, "no subgoal " + std::to_string(i));
  auto [subs, goal] = strip_implies(state.prop(), nsubgoals);
  if (subs.size() != nsubgoals) fail(ErrorKind::NoSubgoal, "proof state has fewer subgoals than expected");

  SubgoalView view = SubgoalView::of(subs[i - 1]);
  std::vector<Term> rest(subs.begin(), subs.begin() + static_cast<long>(i - 1));
  rest.insert(rest.end(), subs.begin() + static_cast<long>(i), subs.end());
  Term skeleton_prop = mk_implies(rest, goal);
  BinderContext ctx = view.context();
  std::vector<DisagreementPair> ff = state.flexflex();
  TheoryRef thy = state.theory();
  std::vector<Term> hyps = state.hyps();
  int next = state.max_index() + 1;

  std::vector<std::size_t> idx(view.asms.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  return Seq<std::size_t>::from_vector(idx).flat_map(
      [view, ctx, ff, thy, hyps, skeleton_prop, next](const std::size_t& k) {
        std::vector<DisagreementPair> pairs{DisagreementPair{ctx, view.asms[k], view.concl}};
        pairs.insert(pairs.end(), ff.begin(), ff.end());
        Env env;
        env.next_index = next;
        return unify(pairs, env).map([thy, hyps, skeleton_prop](const UnifyResult& r) {
          return TrustedAccess::make(thy, hyps, close_all(r.flexflex), r.env.apply(skeleton_prop), "assumption");
        });
      });
}

}  // namespace metaproof
