#pragma once

#include <cstddef>
#include <string_view>

namespace semigap {

enum class StabilityVerdict { stable, unstable, inconclusive };
enum class ConsistencyVerdict { consistent, inconsistent, inconclusive };
enum class ConvergenceVerdict { convergent, divergent, inconclusive };
enum class GapVerdict { bounded, unbounded, inconclusive };

std::string_view to_string(StabilityVerdict v);
std::string_view to_string(ConsistencyVerdict v);
std::string_view to_string(ConvergenceVerdict v);
std::string_view to_string(GapVerdict v);

/// Detection thresholds for the finite-ladder verdicts.
struct Tolerances {
  double consistency_tol = 1e-2;   // final defect for "consistent"
  double convergence_tol = 1e-2;   // final sup-error for "convergent"
  double growth_tol = 0.05;        // unstable if fitted per-step growth >= 1 + growth_tol
  double gap_tau = 0.1;            // bounded if L''(rho/2)/L''(rho) <= 1 + tau on the last 3 rungs
  double q_min = 0.2;              // unbounded if fitted exponent >= q_min ...
  double fit_residual_max = 0.1;   // ... and RMS log-residual <= this
  double slack = 2.0;              // error-bound slack factor
  double zero_tol = 1e-9;          // absolute floor treated as zero
  double divergence_factor = 10.0; // sup-error above this times the cloud scale is divergence
  std::size_t min_pairs = 10;      // fewer admissible pairs flags an estimate inconclusive

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

}  // namespace semigap
