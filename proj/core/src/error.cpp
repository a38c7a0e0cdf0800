#include "metric_cooks/error.hpp"

namespace mcooks {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NoSignal: return "NoSignal";
    case ErrorKind::PerfectFit: return "PerfectFit";
    case ErrorKind::TooFewAfterTrim: return "TooFewAfterTrim";
    case ErrorKind::ExperimentFailed: return "ExperimentFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

}  // namespace mcooks
