#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "metaproof/error.hpp"
#include "metaproof/kernel.hpp"
#include "metaproof/theory.hpp"

namespace metaproof {

namespace {

const DefInfo& find_def(const Theory& thy, const std::string& const_name) {
  const DefInfo* d = thy.find_def_for(const_name);
  if (!d) d = thy.find_def_named(const_name);
  if (!d) fail(ErrorKind::NoSuchDef, "no definition for " + const_name + " in " + thy.name());
  return *d;
}

// Match `pat` (the body under n lambdas) against `t`. Bound offsets of `pat`
// in [depth, depth + n) are the holes.
bool match_body(const Term& pat, const Term& t, int depth, int n, std::vector<std::optional<Term>>& holes) {
  if (pat.is_bound() && pat.index() >= depth && pat.index() < depth + n) {
    int hole = pat.index() - depth;
    // The instance may not mention binders local to the match.
    for (int b : loose_bounds(t)) {
      if (b < depth) return false;
    }
    Term img = incr_bound(t, -depth);
    if (holes[hole]) return aconv(*holes[hole], img);
    holes[hole] = img;
    return true;
  }
  if (pat.kind() != t.kind()) return false;
  switch (pat.kind()) {
    case TermKind::App:
      return match_body(pat.fun(), t.fun(), depth, n, holes) && match_body(pat.arg(), t.arg(), depth, n, holes);
    case TermKind::Abs:
      return pat.type() == t.type() && match_body(pat.body(), t.body(), depth + 1, n, holes);
    case TermKind::Bound:
      return pat.index() == t.index();
    default:
      return aconv(pat, t);
  }
}

// Replace instances of the (beta-reduced) definition body by the constant.
Term fold_instances(const Term& k, const Term& rhs, const Term& t) {
  Term body = rhs;
  std::vector<Type> binders;  // outermost first
  while (body.is_abs()) {
    binders.push_back(body.type());
    body = body.body();
  }
  int n = static_cast<int>(binders.size());
  if (body.is_bound()) return t;  // %x. x would match everything
  std::function<Term(const Term&, const BinderContext&)> go = [&](const Term& u, const BinderContext& ctx) -> Term {
    std::vector<std::optional<Term>> holes(n);
    if (match_body(body, u, 0, n, holes)) {
      bool fits = true;
      for (int h = 0; h < n && fits; ++h) {
        fits = holes[h] && type_of(*holes[h], ctx) == binders[n - 1 - h];
      }
      if (fits) {
        Term out = k;
        for (int h = n - 1; h >= 0; --h) out = Term::app(out, go(*holes[h], ctx));
        return out;
      }
    }
    switch (u.kind()) {
      case TermKind::App: {
        Term f = go(u.fun(), ctx);
        return Term::app(f, go(u.arg(), ctx));
      }
      case TermKind::Abs:
        return Term::abs(u.name(), u.type(), go(u.body(), push_binder(ctx, u.type())));
      default:
        return u;
    }
  };
  return go(t, {});
}

}  // namespace

// Both directions rewrite with `(%k. P(k))(K) == (%k. P(k))(a)`, obtained by
// combination from reflexivity and the definition.

Theorem unfold_def(const Theory& thy, const std::string& const_name, const Theorem& th) {
  const DefInfo& d = find_def(thy, const_name);
  Theorem def = definition(th.theory(), d.name);
  Term k = dest_equals(def.prop())->first;
  Term ctx = abstract_over(k, th.prop(), "k");
  Theorem eq = combination(reflexive(th.theory(), ctx), def);
  return equal_elim(eq, th);
}

Theorem fold_def(const Theory& thy, const std::string& const_name, const Theorem& th) {
  const DefInfo& d = find_def(thy, const_name);
  Theorem def = definition(th.theory(), d.name);
  Term k = dest_equals(def.prop())->first;
  Term folded = fold_instances(k, d.rhs, th.prop());
  // Unfolding the folded proposition gives back th.prop; run that equation backwards.
  Term ctx = abstract_over(k, folded, "k");
  Theorem eq = symmetric(combination(reflexive(th.theory(), ctx), def));
  return equal_elim(eq, th);
}

}  // namespace metaproof
