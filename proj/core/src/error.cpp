#include "finsler4/error.hpp"

namespace finsler4 {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CapTooSmall: return "CapTooSmall";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::CapMismatch: return "CapMismatch";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::OrderExceedsCaps: return "OrderExceedsCaps";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::NonConstantExponent: return "NonConstantExponent";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::SpecParseError: return "SpecParseError";
    case ErrorKind::MissingSigma: return "MissingSigma";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::InsufficientJetDepth: return "InsufficientJetDepth";
    case ErrorKind::VanishingTorsion: return "VanishingTorsion";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DegenerateSeed: return "DegenerateSeed";
    case ErrorKind::VarianceMismatch: return "VarianceMismatch";
    case ErrorKind::SigmaUsesY: return "SigmaUsesY";
    case ErrorKind::ExtractionUnreliable: return "ExtractionUnreliable";
    case ErrorKind::NoFrameValidPoints: return "NoFrameValidPoints";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::StencilLeavesDomain: return "StencilLeavesDomain";
  }
  return "Unknown";
}

}  // namespace finsler4
