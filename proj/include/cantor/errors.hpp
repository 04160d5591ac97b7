#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cantor {

enum class ErrorKind {
  DimensionMismatch,
  BadLength,
  DepthCapExceeded,
  ParseError,
  BadWitness,
  MissingLabels,
  DensityExhausted,
  InfeasibleParams,
  PreconditionFailed,
  InsufficientFiltration,
  EmptyPick,
  NoOffDiagonalCell,
  MalformedPresentation,
  InsufficientResolution,
  DigestMismatch,
  MalformedCertificate,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadLength: return "BadLength";
    case ErrorKind::DepthCapExceeded: return "DepthCapExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::BadWitness: return "BadWitness";
    case ErrorKind::MissingLabels: return "MissingLabels";
    case ErrorKind::DensityExhausted: return "DensityExhausted";
    case ErrorKind::InfeasibleParams: return "InfeasibleParams";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::InsufficientFiltration: return "InsufficientFiltration";
    case ErrorKind::EmptyPick: return "EmptyPick";
    case ErrorKind::NoOffDiagonalCell: return "NoOffDiagonalCell";
    case ErrorKind::MalformedPresentation: return "MalformedPresentation";
    case ErrorKind::InsufficientResolution: return "InsufficientResolution";
    case ErrorKind::DigestMismatch: return "DigestMismatch";
    case ErrorKind::MalformedCertificate: return "MalformedCertificate";
  }
  return "Unknown";
}

/// Every module reports failures through this one exception type; `kind()`
/// names the module-level error and `what()` carries `<Kind>: <detail>`.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace cantor
