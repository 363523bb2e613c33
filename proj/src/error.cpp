#include "torsionlab/error.hpp"

namespace torsionlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidDimensions: return "InvalidDimensions";
    case ErrorKind::IntegrabilityViolation: return "IntegrabilityViolation";
    case ErrorKind::MismatchedGrids: return "MismatchedGrids";
    case ErrorKind::MissingDegree: return "MissingDegree";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::TooFewModes: return "TooFewModes";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::NegativeBlockEigenvalue: return "NegativeBlockEigenvalue";
    case ErrorKind::TailNotCertified: return "TailNotCertified";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::FitResidualTooLarge: return "FitResidualTooLarge";
    case ErrorKind::DecayRateUnknown: return "DecayRateUnknown";
    case ErrorKind::ZeroSearchFailed: return "ZeroSearchFailed";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

ExitCode exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io:
      return ExitCode::Io;
    case ErrorKind::NegativeBlockEigenvalue:
    case ErrorKind::TailNotCertified:
    case ErrorKind::IllConditioned:
    case ErrorKind::FitResidualTooLarge:
    case ErrorKind::DecayRateUnknown:
    case ErrorKind::ZeroSearchFailed:
      return ExitCode::Certification;
    default:
      return ExitCode::InvalidInput;
  }
}

}  // namespace torsionlab
