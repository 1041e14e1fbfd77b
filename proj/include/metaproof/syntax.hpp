#pragma once

// Concrete syntax: lexer, precedence parser with type inference, printer,
// and the theory file format. The grammar is documented in docs/syntax.md.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metaproof/term.hpp"
#include "metaproof/theory.hpp"

namespace metaproof {

class Theorem;

/// Everything the parser and printer need to know about a theory.
struct SyntaxTable {
  std::map<std::string, ConstInfo> consts;
  std::set<std::string> types;

  static SyntaxTable of(const Theory& thy);
  const ConstInfo* find(const std::string& name) const;
};

struct ParseOptions {
  /// Normalize the result (beta-eta). Off gives the term exactly as written.
  bool normalize = true;
  /// Required type of the whole term, if any.
  std::optional<Type> expected;
  /// Types of free variables fixed by the caller (e.g. goal parameters).
  std::map<std::string, Type> free_types;
  /// Names that denote loose bound variables, innermost first, with types.
  std::vector<std::pair<std::string, Type>> bound_context;
};

Term parse_term(const SyntaxTable& table, std::string_view src, const ParseOptions& opts = {});
/// Shorthand for a term of type prop.
Term parse_prop(const SyntaxTable& table, std::string_view src);
Type parse_type(const SyntaxTable& table, std::string_view src);

struct PrintOptions {
  /// Annotate free variables, schematics and bound variables with their types.
  bool annotate = false;
  /// Display names for loose bound variables, innermost first.
  std::vector<std::string> bound_names;
};

std::string print_term(const SyntaxTable& table, const Term& t, const PrintOptions& opts = {});
std::string print_type(const Type& t);
/// Flex-flex constraints are shown as leading `a == b ==>` antecedents.
std::string print_theorem(const SyntaxTable& table, const Theorem& th);

using TheoryResolver = std::function<TheoryRef(const std::string&)>;

/// Resolver for the built-in theories only.
TheoryRef resolve_builtin(const std::string& name);

TheoryRef parse_theory(std::string_view src, const TheoryResolver& resolve = resolve_builtin);

}  // namespace metaproof
