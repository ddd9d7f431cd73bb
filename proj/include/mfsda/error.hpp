#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfsda {

enum class ErrorCode {
  DegenerateInput,
  SingularGram,
  InsufficientSamples,
  InsufficientDistinctResponses,
  DegenerateSlicing,
  InvalidLevel,
  InvalidConfig,
  InvalidScenario,
  InternalContractViolation,
  FileNotFound,
  IoError,
  MissingValue,
  NonNumeric,
  ColumnNotFound,
  DuplicateHeader,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a typed code and, once it has
// crossed a pipeline boundary, the name of the stage that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  // Returns a copy tagged with `stage` unless a stage is already recorded.
  Error with_stage(std::string stage) const;

 private:
  static std::string format(ErrorCode code, const std::string& message,
                            const std::string& stage);

  ErrorCode code_;
  std::string stage_;
  std::string detail_;
};

}  // namespace mfsda
