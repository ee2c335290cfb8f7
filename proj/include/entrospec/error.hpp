#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entrospec {

enum class ErrorCode {
  NotSquare,
  NonFinite,
  NotHermitian,
  NotPositiveSemidefinite,
  TraceNotOne,
  NoConvergence,
  LambdaOutOfRange,
  SingularSample,
  SingularEndpoint,
  DimensionMismatch,
  SpectraMismatch,
  WitnessInconsistency,
  BadNodeCount,
  BadConfig,
  OracleDomain,
  IllConditioned,
  ComplexRoots,
  DegreeDeficit,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as an Error carrying a stable code;
// the message names the violated condition and the measured residual.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace entrospec
