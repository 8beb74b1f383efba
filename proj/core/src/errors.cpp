#include "semigap/errors.hpp"

#include <sstream>

namespace semigap {

namespace {

std::string describe_exit(const std::string& stage, double t, const std::vector<double>& state,
                          int step_index) {
  std::ostringstream out;
  out << "domain exit at " << stage << " (t = " << t;
  if (state.size() == 1) out << ", u = " << state.front();
  if (step_index >= 0) out << ", step " << step_index;
  out << ")";
  return out.str();
}

std::string describe_blowup(double dt, int step_index) {
  std::ostringstream out;
  out << "non-finite state after a step of size " << dt;
  if (step_index >= 0) out << " at step " << step_index;
  return out.str();
}

}  // namespace

DomainExit::DomainExit(std::string stage, double t, std::vector<double> state, int step_index)
    : Error(describe_exit(stage, t, state, step_index)),
      stage_(std::move(stage)),
      time_(t),
      state_(std::move(state)),
      step_index_(step_index) {}

BlowupDetected::BlowupDetected(double dt, int step_index)
    : Error(describe_blowup(dt, step_index)), dt_(dt), step_index_(step_index) {}

ConfigValidationError::ConfigValidationError(std::string key, const std::string& message)
    : ConfigError("invalid value for '" + key + "': " + message), key_(std::move(key)) {}

}  // namespace semigap
