#ifndef SPECTRAL_ERRORS_HPP_
#define SPECTRAL_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace spectral {

enum class ErrorCode {
  InvalidSpec,
  ParityMismatch,
  OnEssentialSpectrum,
  WindowTooSmall,
  StepLimitExceeded,
  BlowUpAtEndpoint,
  PhaseResolutionFailure,
  NoConvergence,
  SuspectedPole,
  NotAnEigenvalue,
  DenominatorUnderflow,
  WindowExceeded,
  PrecisionInsufficient,
  DegenerateEigenvalue,
  OrthogonalPair,
  ComponentNotIsolated,
  DegenerateReal,
  ContinuationLost,
  RowMatchingAmbiguous,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::OnEssentialSpectrum: return "OnEssentialSpectrum";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::BlowUpAtEndpoint: return "BlowUpAtEndpoint";
    case ErrorCode::PhaseResolutionFailure: return "PhaseResolutionFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SuspectedPole: return "SuspectedPole";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::DenominatorUnderflow: return "DenominatorUnderflow";
    case ErrorCode::WindowExceeded: return "WindowExceeded";
    case ErrorCode::PrecisionInsufficient: return "PrecisionInsufficient";
    case ErrorCode::DegenerateEigenvalue: return "DegenerateEigenvalue";
    case ErrorCode::OrthogonalPair: return "OrthogonalPair";
    case ErrorCode::ComponentNotIsolated: return "ComponentNotIsolated";
    case ErrorCode::DegenerateReal: return "DegenerateReal";
    case ErrorCode::ContinuationLost: return "ContinuationLost";
    case ErrorCode::RowMatchingAmbiguous: return "RowMatchingAmbiguous";
  }
  return "Unknown";
}

// Every numerical or validation failure in the library surfaces as this
// exception; code() lets callers (and the CLI) branch without string parsing.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spectral

#endif  // SPECTRAL_ERRORS_HPP_
