#include "metaproof/unify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>

#include "metaproof/error.hpp"

namespace metaproof {

namespace {

Term chase(const Subst& s, const Term& t) {
  if (!t.has_vars()) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = s.find(t.var_key());
      return it == s.end() ? t : chase(s, it->second);
    }
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), chase(s, t.body()));
    case TermKind::App:
      return Term::app(chase(s, t.fun()), chase(s, t.arg()));
    default:
      return t;
  }
}

std::atomic<int> g_default_depth{-1};

}  // namespace

Term Env::apply(const Term& t) const {
  if (subst.empty()) return norm(t);
  return norm(chase(subst, t));
}

Subst Env::resolved() const {
  Subst out;
  for (const auto& [k, v] : subst) out.emplace(k, apply(v));
  return out;
}

Term Env::fresh_var(const std::string& name, const Type& type) {
  return Term::var(name, next_index++, type);
}

int default_unify_depth() {
  int d = g_default_depth.load();
  if (d >= 0) return d;
  d = 20;
  if (const char* env = std::getenv("METAPROOF_DEPTH")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v < 100000) d = static_cast<int>(v);
  }
  g_default_depth.store(d);
  return d;
}

void set_default_unify_depth(int depth) { g_default_depth.store(depth); }

namespace {

Term eta_step(const Term& t) { return Term::app(incr_bound(t, 1), Term::bound(0)); }

/// Type of a non-abstraction normal term in `ctx`, read off its head.
Type type_in(const Term& t, const BinderContext& ctx) {
  auto [head, args] = strip_comb(t);
  Type ty = head.is_bound() ? ctx.at(static_cast<std::size_t>(head.offset())) : head.type();
  if (head.is_abs()) ty = type_of(head, ctx);
  for (std::size_t i = 0; i < args.size(); ++i) ty = Type(ty.cod());
  return ty;
}

bool same_rigid_head(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return false;
  if (a.is_bound()) return a.offset() == b.offset();
  return a.name() == b.name() && a.type() == b.type();
}

/// Bring both sides of a pair to the same binder depth with non-abstraction,
/// base-typed terms (eta-expanding as needed).
void strip_to_base(DisagreementPair& p) {
  while (p.lhs.is_abs() || p.rhs.is_abs()) {
    Type bt = p.lhs.is_abs() ? p.lhs.type() : p.rhs.type();
    p.lhs = p.lhs.is_abs() ? p.lhs.body() : eta_step(p.lhs);
    p.rhs = p.rhs.is_abs() ? p.rhs.body() : eta_step(p.rhs);
    p.ctx = push_binder(p.ctx, bt);
  }
  Type ty = type_in(p.lhs, p.ctx);
  while (ty.is_fun()) {
    p.lhs = eta_step(p.lhs);
    p.rhs = eta_step(p.rhs);
    p.ctx = push_binder(p.ctx, ty.dom());
    Type next = ty.cod();
    ty = next;
  }
}

Term rebind(const Term& t, const std::vector<int>& args, int depth) {
  if (t.loose_bound_limit() <= depth) return t;
  switch (t.kind()) {
    case TermKind::Bound: {
      int o = t.offset() - depth;
      auto k = static_cast<int>(args.size());
      for (int j = 0; j < k; ++j) {
        if (args[static_cast<std::size_t>(j)] == o) return Term::bound(depth + (k - 1 - j));
      }
      return t;  // unreachable: caller checked coverage
    }
    case TermKind::Abs:
      return Term::abs(t.name(), t.type(), rebind(t.body(), args, depth + 1));
    case TermKind::App:
      return Term::app(rebind(t.fun(), args, depth), rebind(t.arg(), args, depth));
    default:
      return t;
  }
}

/// `?F(b1,...,bk) =?= t` with distinct bound arguments covering t's loose
/// bound variables and ?F not in t: assign ?F := %y1...yk. t.
bool try_pattern(const Term& flex, const Term& t, const BinderContext& ctx, Env& env) {
  auto [head, args] = strip_comb(flex);
  std::vector<int> offs;
  for (const auto& a : args) {
    if (!a.is_bound()) return false;
    if (std::find(offs.begin(), offs.end(), a.offset()) != offs.end()) return false;
    offs.push_back(a.offset());
  }
  VarKey key = head.var_key();
  if (occurs_var(key, t)) return false;
  for (int b : loose_bounds(t)) {
    if (std::find(offs.begin(), offs.end(), b) == offs.end()) return false;
  }
  Term image = rebind(t, offs, 0);
  for (auto it = offs.rbegin(); it != offs.rend(); ++it) {
    image = Term::abs("x", ctx.at(static_cast<std::size_t>(*it)), image);
  }
  env.subst.emplace(std::move(key), norm(image));
  return true;
}

}  // namespace

bool occurs_rigidly(const VarKey& v, const Term& t) {
  if (!occurs_var(v, t)) return false;
  auto [head, args] = strip_comb(t);
  if (head.is_var()) return head.var_key() == v;
  if (head.is_abs() && occurs_rigidly(v, head.body())) return true;
  return std::any_of(args.begin(), args.end(), [&](const Term& a) { return occurs_rigidly(v, a); });
}

std::optional<std::vector<DisagreementPair>> decompose(const DisagreementPair& pair) {
  std::vector<DisagreementPair> out;
  std::deque<DisagreementPair> work{pair};
  while (!work.empty()) {
    DisagreementPair p = std::move(work.front());
    work.pop_front();
    p.lhs = norm(p.lhs);
    p.rhs = norm(p.rhs);
    if (p.lhs == p.rhs) continue;
    strip_to_base(p);
    auto [hs, sargs] = strip_comb(p.lhs);
    auto [ht, targs] = strip_comb(p.rhs);
    if (hs.is_var() || ht.is_var()) {
      out.push_back(std::move(p));
      continue;
    }
    if (sargs.empty() && targs.empty() && !same_rigid_head(hs, ht)) {
      out.push_back(std::move(p));
      continue;
    }
    if (!same_rigid_head(hs, ht) || sargs.size() != targs.size()) return std::nullopt;
    for (std::size_t i = sargs.size(); i-- > 0;) {
      work.push_front(DisagreementPair{p.ctx, sargs[i], targs[i]});
    }
  }
  return out;
}

SimplResult simpl(const std::vector<DisagreementPair>& pairs, Env env) {
  SimplResult r;
  std::deque<DisagreementPair> work(pairs.begin(), pairs.end());
  std::vector<DisagreementPair> deferred;
  auto requeue = [&]() {
    for (auto& d : deferred) work.push_back(std::move(d));
    deferred.clear();
  };

  while (!work.empty()) {
    DisagreementPair p = std::move(work.front());
    work.pop_front();
    p.lhs = env.apply(p.lhs);
    p.rhs = env.apply(p.rhs);
    if (p.lhs == p.rhs) continue;
    strip_to_base(p);
    if (p.lhs == p.rhs) continue;

    auto [hs, sargs] = strip_comb(p.lhs);
    auto [ht, targs] = strip_comb(p.rhs);
    bool sflex = hs.is_var();
    bool tflex = ht.is_var();

    if (!sflex && !tflex) {
      if (!same_rigid_head(hs, ht) || sargs.size() != targs.size()) {
        r.failed = true;
        return r;
      }
      for (std::size_t i = sargs.size(); i-- > 0;) {
        work.push_front(DisagreementPair{p.ctx, sargs[i], targs[i]});
      }
      continue;
    }

    if (sflex && tflex) {
      if (try_pattern(p.lhs, p.rhs, p.ctx, env) || try_pattern(p.rhs, p.lhs, p.ctx, env)) {
        requeue();
        continue;
      }
      deferred.push_back(std::move(p));
      continue;
    }

    if (!sflex) std::swap(p.lhs, p.rhs);
    if (try_pattern(p.lhs, p.rhs, p.ctx, env)) {
      requeue();
      continue;
    }
    if (occurs_rigidly(head_of(p.lhs).var_key(), p.rhs)) {
      r.failed = true;
      return r;
    }
    deferred.push_back(std::move(p));
  }

  for (auto& d : deferred) {
    if (head_of(d.rhs).is_var()) {
      r.flex_flex.push_back(std::move(d));
    } else {
      r.flex_rigid.push_back(std::move(d));
    }
  }
  r.env = std::move(env);
  return r;
}

Seq<Env> match_step(const DisagreementPair& pair, const Env& env) {
  auto [fhead, fargs] = strip_comb(pair.lhs);
  auto [rhead, rargs] = strip_comb(pair.rhs);
  const Type& ftype = fhead.type();
  auto [taus, beta] = ftype.strip();
  if (taus.size() != fargs.size()) return Seq<Env>::empty();

  auto m = static_cast<int>(taus.size());
  std::vector<Term> ys;
  for (int i = 0; i < m; ++i) ys.push_back(Term::bound(m - 1 - i));

  auto close = [&](Term body) {
    for (int i = m; i-- > 0;) body = Term::abs("x", taus[static_cast<std::size_t>(i)], std::move(body));
    return norm(body);
  };
  auto build = [&](const Term& head, const std::vector<Type>& arg_types, Env& e) {
    std::vector<Term> hargs;
    for (const auto& at : arg_types) {
      Term h = e.fresh_var(fhead.name(), Type::fun(taus, at));
      hargs.push_back(Term::apply(h, ys));
    }
    return close(Term::apply(head, hargs));
  };

  std::vector<Env> out;
  if (rhead.is_const() || rhead.is_free()) {
    Env e = env;
    auto [rhos, _] = rhead.type().strip();
    rhos.resize(rargs.size());
    Term image = build(rhead, rhos, e);
    e.subst.emplace(fhead.var_key(), image);
    out.push_back(std::move(e));
  }
  for (int i = 0; i < m; ++i) {
    auto [sigmas, res] = taus[static_cast<std::size_t>(i)].strip();
    if (!(res == beta)) continue;
    Env e = env;
    Term image = build(ys[static_cast<std::size_t>(i)], sigmas, e);
    e.subst.emplace(fhead.var_key(), image);
    out.push_back(std::move(e));
  }
  return Seq<Env>::from_vector(std::move(out));
}

namespace {

Seq<UnifyResult> search(std::vector<DisagreementPair> pairs, Env env, int depth,
                        std::shared_ptr<SearchReport> report) {
  return Seq<UnifyResult>::delay([pairs = std::move(pairs), env = std::move(env), depth,
                                  report]() -> Seq<UnifyResult>::Step {
    SimplResult r = simpl(pairs, env);
    if (r.failed) return std::nullopt;
    if (r.flex_rigid.empty()) {
      return Seq<UnifyResult>::single(UnifyResult{std::move(r.env), std::move(r.flex_flex)}).pull();
    }
    if (depth <= 0) {
      if (report) report->depth_exceeded = true;
      return std::nullopt;
    }
    std::vector<DisagreementPair> rest = r.flex_rigid;
    rest.insert(rest.end(), r.flex_flex.begin(), r.flex_flex.end());
    return match_step(r.flex_rigid.front(), r.env)
        .flat_map([rest, depth, report](const Env& e) { return search(rest, e, depth - 1, report); })
        .pull();
  });
}

}  // namespace

Seq<UnifyResult> unify(const std::vector<DisagreementPair>& pairs, const Env& env,
                       const UnifyOptions& opts) {
  Env start = env;
  start.next_index = std::max(start.next_index, fresh_index_above(pairs));
  int depth = opts.depth < 0 ? default_unify_depth() : opts.depth;
  return search(pairs, std::move(start), depth, opts.report);
}

int fresh_index_above(const std::vector<DisagreementPair>& pairs) {
  int m = -1;
  for (const auto& p : pairs) m = std::max({m, p.lhs.max_index(), p.rhs.max_index()});
  return m + 1;
}

std::pair<Term, Term> close_pair(const DisagreementPair& pair) {
  Term l = pair.lhs;
  Term r = pair.rhs;
  for (const auto& ty : pair.ctx) {
    l = Term::abs("x", ty, l);
    r = Term::abs("x", ty, r);
  }
  return {norm(l), norm(r)};
}

}  // namespace metaproof
