#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "semigap/cloud.hpp"
#include "semigap/model.hpp"
#include "semigap/verdicts.hpp"

namespace semigap {

/// Everything the empirical estimators sample over: one (problem, method)
/// pair, a regular family used as the guard, the horizon T, the cloud K,
/// the dt ladder and the t-grid.
struct EstimatorSetup {
  Problem problem;
  Method method;
  RegularFamily guard;
  double horizon = 1.0;
  CompactCloud cloud;
  std::vector<double> dt_ladder;
  std::vector<double> t_grid;
  int workers = 1;

  const NormSpec& norm() const noexcept { return problem.norm; }
};

/// dt_k = top * 2^-k for k = 0..depth.
std::vector<double> geometric_ladder(double top, std::size_t depth);

/// t_j = j * horizon / count for j = 0..count.
std::vector<double> uniform_grid(double horizon, std::size_t count);

/// Largest n with n * dt <= horizon (up to a relative 1e-12 slack).
std::size_t step_count(double horizon, double dt);

/// C_dt^n u, checking after step p that the iterate lies in X'_{(n-p) dt}.
/// Throws ContractViolation if n dt > horizon, DomainExit(p) on leaving the
/// guard (p = 0 for the initial state) and BlowupDetected(p) on overflow.
State iterate(const Method& m, double dt, std::size_t n, const State& u,
              const RegularFamily& guard, double horizon);

struct TrajectoryCloud {
  CompactCloud cloud;
  std::size_t skipped = 0;
};

/// { E(t) u : t in t_grid, u in K ∩ X'_t }, skipping inadmissible pairs.
TrajectoryCloud trajectory_cloud(const Problem& p, const RegularFamily& guard,
                                 const CompactCloud& cloud, std::span<const double> t_grid);

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

enum class StabilityKind { local, distant, full };
std::string_view to_string(StabilityKind k);

struct StabilityWitness {
  State u;
  State v;
  std::size_t u_index = 0;
  std::size_t v_index = 0;
  std::size_t n = 0;
  double dt = 0.0;
  std::size_t dt_index = 0;

  friend bool operator==(const StabilityWitness&, const StabilityWitness&) = default;
};

struct StabilityEstimate {
  StabilityKind kind = StabilityKind::full;
  /// max over admissible (dt, n, u, v) of norm(C^n v - C^n u) / norm(v - u).
  double constant = 0.0;
  /// rho' for local, rho for distant.
  std::optional<double> threshold;
  StabilityWitness witness;
  double horizon = 0.0;
  std::vector<double> dt_ladder;
  /// Distinct pairs contributing at least one admissible (dt, n).
  std::size_t pairs_evaluated = 0;
  /// Pairs inside the distance gate excluded by domain membership.
  std::size_t skipped_pairs = 0;
  /// Pairs at distance zero, never divided by.
  std::size_t duplicate_pairs = 0;
  std::size_t evaluations = 0;
  std::size_t skipped_evaluations = 0;
  /// Per-step growth fitted to the max ratio profile on the witness rung.
  double growth_factor = 0.0;
  /// Max over pairs of the ratio at each n on the witness rung (index n - 1).
  std::vector<double> growth_profile;

  friend bool operator==(const StabilityEstimate&, const StabilityEstimate&) = default;
};

/// Pairs with 0 < norm(v - u) <= rho_local. Throws EmptySample.
StabilityEstimate estimate_local_stability(const EstimatorSetup& setup, double rho_local);
/// Pairs with norm(v - u) >= rho. Throws EmptySample.
StabilityEstimate estimate_distant_stability(const EstimatorSetup& setup, double rho);
/// All pairs with norm(v - u) > 0. Throws EmptySample.
StabilityEstimate estimate_stability(const EstimatorSetup& setup);

/// Recomputes norm(C^n v - C^n u) / norm(v - u) for the witness.
double reevaluate_witness(const EstimatorSetup& setup, const StabilityWitness& w);

/// unstable iff growth_factor >= 1 + growth_tol; inconclusive with fewer
/// than min_pairs admissible pairs.
StabilityVerdict classify_stability(const StabilityEstimate& e, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Consistency
// ---------------------------------------------------------------------------

struct DefectSample {
  double dt = 0.0;
  double defect = 0.0;
  double t = 0.0;
  State u;
  std::size_t skipped = 0;

  friend bool operator==(const DefectSample&, const DefectSample&) = default;
};

/// max over t in the t-grid and u in K ∩ X'_{t+dt} of
/// norm(C_dt E(t)u - E(dt)E(t)u) / dt. Throws EmptySample.
DefectSample consistency_defect(const EstimatorSetup& setup, double dt);

struct ConsistencyReport {
  std::vector<DefectSample> defects;
  ConsistencyVerdict verdict = ConsistencyVerdict::inconclusive;
  /// Least-squares slope of log defect against log dt.
  double fit_order = 0.0;

  friend bool operator==(const ConsistencyReport&, const ConsistencyReport&) = default;
};

ConsistencyReport consistency_report(const EstimatorSetup& setup, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

struct ErrorSample {
  double dt = 0.0;
  double sup_error = 0.0;
  double t = 0.0;
  std::size_t n = 0;
  State u;
  /// Largest |t - n dt| among the matched (t, n) that were evaluated.
  double max_mismatch = 0.0;
  std::size_t skipped = 0;

  friend bool operator==(const ErrorSample&, const ErrorSample&) = default;
};

/// sup over t in the t-grid, n with |t - n dt| <= theta and n dt <= T, and
/// u in K ∩ X'_t ∩ X'_{n dt} of norm(E(t)u - C^n u). Throws EmptySample.
ErrorSample convergence_error(const EstimatorSetup& setup, double dt, double theta);

struct ConvergenceReport {
  std::vector<ErrorSample> errors;
  /// theta = theta_factor * dt on each rung.
  double theta_factor = 0.5;
  ConvergenceVerdict verdict = ConvergenceVerdict::inconclusive;
  /// Errors stopped improving (last ratio above 0.8) without reaching tolerance.
  bool plateau = false;
  double floor = 0.0;

  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

ConvergenceReport convergence_report(const EstimatorSetup& setup, double theta_factor,
                                     const Tolerances& tol);

// ---------------------------------------------------------------------------
// Continuity modulus and linear power norm
// ---------------------------------------------------------------------------

struct ContinuityModulus {
  std::vector<double> deltas;
  std::vector<double> omegas;

  friend bool operator==(const ContinuityModulus&, const ContinuityModulus&) = default;
};

/// omega(delta) = max over t in the t-grid, s in [t - delta, t + delta] ∩ [0, T]
/// (sampled at 17 offsets) and u in K ∩ X_max(t,s) of norm(E(t)u - E(s)u),
/// made nondecreasing along the ascending ladder.
ContinuityModulus continuity_modulus(const EstimatorSetup& setup, std::span<const double> deltas);

/// Operator norm of C_dt^n for a method declared linear. sup and l1 norms
/// are exact from the `dim` basis images; euclidean and weighted-l2 use
/// power iteration on A^T A to a 1e-10 relative tolerance, started from a
/// seeded random probe. Throws ContractViolation if m is not linear or
/// probe_count < dim.
double linear_power_norm(const Method& m, double dt, std::size_t n, const NormSpec& norm,
                         std::size_t probe_count, std::uint64_t seed = 42);

}  // namespace semigap
