#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler4 {

enum class ErrorKind {
  // jets
  CapTooSmall,
  IndexOutOfRange,
  CapMismatch,
  DomainViolation,
  OrderExceedsCaps,
  // expression DSL
  SyntaxError,
  UnknownIdentifier,
  NonConstantExponent,
  UnboundVariable,
  // metrics
  InvalidParameters,
  EmptyDomain,
  SpecParseError,
  MissingSigma,
  // geometry / frame
  SingularMetric,
  InsufficientJetDepth,
  VanishingTorsion,
  NotPositiveDefinite,
  DegenerateSeed,
  VarianceMismatch,
  // conformal / classify
  SigmaUsesY,
  ExtractionUnreliable,
  NoFrameValidPoints,
  // oracle
  UnsupportedOrder,
  StencilLeavesDomain,
};

/// Stable identifier used in diagnostics and JSON reports.
std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Error(ErrorKind kind, const std::string& message, std::size_t offset = npos)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

  /// Byte offset into the source text for parse errors, npos otherwise.
  std::size_t offset() const noexcept { return offset_; }
  bool has_offset() const noexcept { return offset_ != npos; }

 private:
  ErrorKind kind_;
  std::size_t offset_;
};

}  // namespace finsler4
