#pragma once

// Private to the library: the single way to construct a Theorem directly.
// Only kernel.cpp and rule.cpp include this header.

#include "metaproof/kernel.hpp"

namespace metaproof::detail {

struct TrustedAccess {
  static Theorem make(TheoryRef thy, std::vector<Term> hyps, std::vector<DisagreementPair> flexflex,
                      Term prop, std::string rule) {
    return Theorem(std::move(thy), std::move(hyps), std::move(flexflex), std::move(prop), std::move(rule));
  }
};

}  // namespace metaproof::detail
