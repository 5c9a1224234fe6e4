#include "perc/error.hpp"

namespace perc {

const char* to_string(Errc c) {
  switch (c) {
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::DisconnectedVertex: return "DisconnectedVertex";
    case Errc::EmptyTree: return "EmptyTree";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotALeaf: return "NotALeaf";
    case Errc::EmptySpec: return "EmptySpec";
    case Errc::ReversedInterval: return "ReversedInterval";
    case Errc::EmptyDigitSet: return "EmptyDigitSet";
    case Errc::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case Errc::DegenerateScales: return "DegenerateScales";
    case Errc::ZeroTimeGap: return "ZeroTimeGap";
    case Errc::SingularDiagonal: return "SingularDiagonal";
    case Errc::MissingGenerator: return "MissingGenerator";
    case Errc::NotASimplex: return "NotASimplex";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::OrderViolation: return "OrderViolation";
    case Errc::MismatchedRun: return "MismatchedRun";
    case Errc::HorizonExceeded: return "HorizonExceeded";
    case Errc::NoHits: return "NoHits";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::GenerationFailed: return "GenerationFailed";
  }
  return "UnknownError";
}

}  // namespace perc
