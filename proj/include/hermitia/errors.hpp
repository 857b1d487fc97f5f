#pragma once

#include <stdexcept>
#include <string>

namespace hermitia {

enum class ErrorKind {
  NoAdjoint,
  NotSurjective,
  NotPositive,
  NotPositiveAtPoint,
  ZeroVector,
  OutOfDomain,
  RankJump,
  SolverResidual,
  NotHolomorphic,
  InvalidModel,
  ConfigError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoAdjoint: return "NoAdjoint";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotPositiveAtPoint: return "NotPositiveAtPoint";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::RankJump: return "RankJump";
    case ErrorKind::SolverResidual: return "SolverResidual";
    case ErrorKind::NotHolomorphic: return "NotHolomorphic";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI) can dispatch on it without parsing messages.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hermitia
