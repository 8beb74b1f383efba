#include "semigap/verdicts.hpp"

namespace semigap {

std::string_view to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable: return "stable";
    case StabilityVerdict::unstable: return "unstable";
    case StabilityVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(ConsistencyVerdict v) {
  switch (v) {
    case ConsistencyVerdict::consistent: return "consistent";
    case ConsistencyVerdict::inconsistent: return "inconsistent";
    case ConsistencyVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(ConvergenceVerdict v) {
  switch (v) {
    case ConvergenceVerdict::convergent: return "convergent";
    case ConvergenceVerdict::divergent: return "divergent";
    case ConvergenceVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::string_view to_string(GapVerdict v) {
  switch (v) {
    case GapVerdict::bounded: return "bounded";
    case GapVerdict::unbounded: return "unbounded";
    case GapVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace semigap
