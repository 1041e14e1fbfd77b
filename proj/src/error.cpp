#include "metaproof/error.hpp"

namespace metaproof {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IllTyped: return "IllTyped";
    case ErrorKind::DanglingBound: return "DanglingBound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchematicInHyp: return "SchematicInHyp";
    case ErrorKind::NotImplication: return "NotImplication";
    case ErrorKind::PremiseMismatch: return "PremiseMismatch";
    case ErrorKind::EigenvariableViolation: return "EigenvariableViolation";
    case ErrorKind::NotQuantified: return "NotQuantified";
    case ErrorKind::NotEquality: return "NotEquality";
    case ErrorKind::MiddleMismatch: return "MiddleMismatch";
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::UnknownAxiom: return "UnknownAxiom";
    case ErrorKind::HasHypotheses: return "HasHypotheses";
    case ErrorKind::TheoryMismatch: return "TheoryMismatch";
    case ErrorKind::NoSubgoal: return "NoSubgoal";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::IllTypedAxiom: return "IllTypedAxiom";
    case ErrorKind::BadDefinition: return "BadDefinition";
    case ErrorKind::NoSuchDef: return "NoSuchDef";
    case ErrorKind::SubgoalsRemain: return "SubgoalsRemain";
    case ErrorKind::UnresolvedFlexFlex: return "UnresolvedFlexFlex";
    case ErrorKind::RepeatLimit: return "RepeatLimit";
    case ErrorKind::UnknownTheory: return "UnknownTheory";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::TacticFailed: return "TacticFailed";
    case ErrorKind::BadCommand: return "BadCommand";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace metaproof
