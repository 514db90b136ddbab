#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lspsel {

enum class ErrorCode {
  OutOfBounds,
  DimensionMismatch,
  InvalidSource,
  InvalidFrontier,
  GenerationFailure,
  UnreachableGoal,
  NoActions,
  Unreachable,
  CorruptRecord,
  ReplayNonTermination,
  InvalidProbability,
  NoData,
  MissingReplay,
  IncompleteMatrix,
  IncompleteCache,
  EmptyLogs,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lspsel
