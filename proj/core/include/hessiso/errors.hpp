#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hessiso {

enum class ErrorCode {
  ZeroPoint,
  OutOfCone,
  NonSmoothPoint,
  NotPositiveDefinite,
  DegeneratePlane,
  InversionFailure,
  DomainError,
  NotConvex,
  DegenerateDenominator,
  RootNotBracketed,
  IntegrationFailure,
  NonPositiveH,
  InsufficientSamples,
  FitFailure,
  NotOrbitPreserving,
  OverlappingSupports,
  ConvexityLost,
  QuadratureFailure,
  LengthMismatch,
  InvalidSpec,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so callers
/// (and the CLI exit-code mapping) can branch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroPoint: return "ZeroPoint";
    case ErrorCode::OutOfCone: return "OutOfCone";
    case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::InversionFailure: return "InversionFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::NonPositiveH: return "NonPositiveH";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::FitFailure: return "FitFailure";
    case ErrorCode::NotOrbitPreserving: return "NotOrbitPreserving";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::ConvexityLost: return "ConvexityLost";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace hessiso
