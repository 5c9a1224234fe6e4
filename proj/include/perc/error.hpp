#pragma once

#include <stdexcept>
#include <string>

namespace perc {

enum class Errc {
  CycleDetected,
  DisconnectedVertex,
  EmptyTree,
  BudgetExceeded,
  NotALeaf,
  EmptySpec,
  ReversedInterval,
  EmptyDigitSet,
  ResolutionTooCoarse,
  DegenerateScales,
  ZeroTimeGap,
  SingularDiagonal,
  MissingGenerator,
  NotASimplex,
  DimensionMismatch,
  OrderViolation,
  MismatchedRun,
  HorizonExceeded,
  NoHits,
  ConfigInvalid,
  GenerationFailed,
};

const char* to_string(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace perc
