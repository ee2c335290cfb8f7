#include "entrospec/error.hpp"

namespace entrospec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::SingularSample: return "SingularSample";
    case ErrorCode::SingularEndpoint: return "SingularEndpoint";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SpectraMismatch: return "SpectraMismatch";
    case ErrorCode::WitnessInconsistency: return "WitnessInconsistency";
    case ErrorCode::BadNodeCount: return "BadNodeCount";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::OracleDomain: return "OracleDomain";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ComplexRoots: return "ComplexRoots";
    case ErrorCode::DegreeDeficit: return "DegreeDeficit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace entrospec
