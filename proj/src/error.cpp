#include "mfsda/error.hpp"

namespace mfsda {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InsufficientDistinctResponses: return "InsufficientDistinctResponses";
    case ErrorCode::DegenerateSlicing: return "DegenerateSlicing";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::InternalContractViolation: return "InternalContractViolation";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::NonNumeric: return "NonNumeric";
    case ErrorCode::ColumnNotFound: return "ColumnNotFound";
    case ErrorCode::DuplicateHeader: return "DuplicateHeader";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(format(code, message, stage)),
      code_(code),
      stage_(std::move(stage)),
      detail_(message) {}

Error Error::with_stage(std::string stage) const {
  if (!stage_.empty()) return *this;
  return Error(code_, detail_, std::move(stage));
}

std::string Error::format(ErrorCode code, const std::string& message,
                          const std::string& stage) {
  std::string out(to_string(code));
  if (!stage.empty()) out += " [" + stage + "]";
  out += ": " + message;
  return out;
}

}  // namespace mfsda
