#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace metaproof {

enum class ErrorKind {
  IllTyped,
  DanglingBound,
  ParseError,
  SchematicInHyp,
  NotImplication,
  PremiseMismatch,
  EigenvariableViolation,
  NotQuantified,
  NotEquality,
  MiddleMismatch,
  Mismatch,
  UnknownAxiom,
  HasHypotheses,
  TheoryMismatch,
  NoSubgoal,
  DuplicateName,
  IllTypedAxiom,
  BadDefinition,
  NoSuchDef,
  SubgoalsRemain,
  UnresolvedFlexFlex,
  RepeatLimit,
  UnknownTheory,
  UnknownId,
  TacticFailed,
  BadCommand,
  Io,
};

std::string_view error_kind_name(ErrorKind kind);

/// Every failure raised by the library. `kind` is stable and machine-readable;
/// `offset` is only meaningful for ParseError and IllTyped raised by the parser.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t offset = npos)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  bool has_offset() const noexcept { return offset_ != npos; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  ErrorKind kind_;
  std::size_t offset_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace metaproof
