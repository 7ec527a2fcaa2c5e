#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vicinal {

enum class ErrorKind {
  InvalidArgument,
  InvalidInitialData,
  SingularMatrix,
  NewtonDiverged,
  DtUnderflow,
  MonotonicityLost,
  SimulationFailed,
  InsufficientData,
  NonPositiveEnergy,
  ParseError,
  UnknownKey,
  TypeMismatch,
  IoError,
  MalformedCsv,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidInitialData: return "invalid-initial-data";
    case ErrorKind::SingularMatrix: return "singular-matrix";
    case ErrorKind::NewtonDiverged: return "newton-diverged";
    case ErrorKind::DtUnderflow: return "dt-underflow";
    case ErrorKind::MonotonicityLost: return "monotonicity-lost";
    case ErrorKind::SimulationFailed: return "simulation-failed";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::NonPositiveEnergy: return "non-positive-energy";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::UnknownKey: return "unknown-key";
    case ErrorKind::TypeMismatch: return "type-mismatch";
    case ErrorKind::IoError: return "io-error";
    case ErrorKind::MalformedCsv: return "malformed-csv";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace vicinal
