#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tpms {

enum class ErrorKind {
  InvalidArgument,
  DomainTooThin,
  PoleProximity,
  OverlappingPoints,
  OutOfRange,
  QuadratureNonConvergence,
  ConstraintInfeasible,
  NoSignChange,
  NonConvergence,
  InvalidTriple,
  DegenerateEdge,
  AngleMismatch,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` carries the failure class
/// so callers (and the CLI exit-code mapping) can branch without RTTI.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace tpms
