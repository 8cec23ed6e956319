#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdv {

enum class ErrorCode {
  InvalidTerrain,
  NotOnBoundary,
  DegenerateRay,
  TooManyPaths,
  AmbiguousTie,
  Unreachable,
  NumericFailure,
  SameStart,
  SameLabel,
  HasObstacles,
  InvalidStrategyParams,
  ScheduleMismatch,
  WalkOffCycle,
  GeometryOverlap,
  GenerationExhausted,
  PreconditionViolation,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdv
