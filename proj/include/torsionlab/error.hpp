#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace torsionlab {

enum class ErrorKind {
  InvalidArgument,
  InvalidDimensions,
  IntegrabilityViolation,
  MismatchedGrids,
  MissingDegree,
  UnknownModel,
  TooFewModes,
  InsufficientSamples,
  NegativeBlockEigenvalue,
  TailNotCertified,
  IllConditioned,
  FitResidualTooLarge,
  DecayRateUnknown,
  ZeroSearchFailed,
  Io,
};

// Process exit codes used by the command-line tool.
enum class ExitCode : int { Ok = 0, InvalidInput = 2, Io = 3, Certification = 4 };

std::string_view to_string(ErrorKind kind) noexcept;
ExitCode exit_code_for(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

// Doubles in messages: "%g", so 1e-10 does not print as 0.000000.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace torsionlab
