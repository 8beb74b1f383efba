#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semigap/estimators.hpp"
#include "semigap/fit.hpp"
#include "semigap/verdicts.hpp"

namespace semigap {

// ---------------------------------------------------------------------------
// Gap curve rho -> L''(rho)
// ---------------------------------------------------------------------------

struct GapRung {
  double rho = 0.0;
  /// Empty when the rung had no admissible pair (void rung).
  std::optional<StabilityEstimate> estimate;

  friend bool operator==(const GapRung&, const GapRung&) = default;
};

struct GapCurve {
  std::vector<GapRung> rungs;
  PowerLawFit fit;
  /// max of L''(rho_{k+1}) / L''(rho_k) over the last three rung pairs.
  double ratio_test = 0.0;
  GapVerdict verdict = GapVerdict::inconclusive;
  std::string regular_description;
  double horizon = 0.0;
  std::uint64_t cloud_fingerprint = 0;
  /// Smallest nonzero pair distance in the cloud.
  double min_pair_distance = 0.0;
  /// Some rung lies below min_pair_distance, so the tail cannot change.
  bool resolution_limited = false;

  friend bool operator==(const GapCurve&, const GapCurve&) = default;
};

/// One estimate_distant_stability per rung of a descending rho ladder, a
/// power-law fit and the bounded / unbounded verdict. Fewer than four valid
/// rungs yields an inconclusive verdict.
GapCurve gap_curve(const EstimatorSetup& setup, std::span<const double> rho_ladder,
                   const Tolerances& tol);

/// Verdict rule on given rung values (descending rho). Exposed for testing.
GapVerdict classify_gap(std::span<const double> rho, std::span<const double> values,
                        const Tolerances& tol, PowerLawFit* fit_out = nullptr,
                        double* ratio_out = nullptr);

// ---------------------------------------------------------------------------
// Implication checks
// ---------------------------------------------------------------------------

enum class ImplicationStatus { holds, vacuous, hypothesis_not_met, violated, inconclusive };
std::string_view to_string(ImplicationStatus s);

struct PartitionReport {
  double r = 0.0;
  std::optional<double> local;
  std::optional<double> distant;
  std::optional<double> full;
  bool pass = false;
  /// All three estimates were empty.
  bool vacuous = false;

  friend bool operator==(const PartitionReport&, const PartitionReport&) = default;
};

/// Asserts full == max(local at rho' = r, distant at rho = r) exactly.
PartitionReport check_partition_identity(const EstimatorSetup& setup, double r);

struct BoundRung {
  double dt = 0.0;
  double error = 0.0;
  double defect = 0.0;
  double modulus_term = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool holds = false;

  friend bool operator==(const BoundRung&, const BoundRung&) = default;
};

struct BoundCheckReport {
  ImplicationStatus status = ImplicationStatus::inconclusive;
  double local_constant = 0.0;
  double slack = 0.0;
  std::vector<BoundRung> rungs;
  std::string note;

  friend bool operator==(const BoundCheckReport&, const BoundCheckReport&) = default;
};

/// Checks error <= slack * L' * T * defect (+ omega(|t - n dt|) when the
/// matched times differ, + zero_tol) on every rung of the convergence
/// report. Reports hypothesis_not_met unless the method is locally stable
/// and consistent. Throws ContractViolation if the reports do not share
/// the setup's ladder.
BoundCheckReport check_convergence_bound(const EstimatorSetup& setup,
                                         const StabilityEstimate& local,
                                         StabilityVerdict local_verdict,
                                         const ConsistencyReport& consistency,
                                         const ConvergenceReport& convergence,
                                         const Tolerances& tol);

struct DivergenceCheck {
  ImplicationStatus status = ImplicationStatus::inconclusive;
  StabilityVerdict distant = StabilityVerdict::inconclusive;
  ConvergenceVerdict convergence = ConvergenceVerdict::inconclusive;
  std::string note;

  friend bool operator==(const DivergenceCheck&, const DivergenceCheck&) = default;
};

/// "convergent implies distantly stable": a distantly unstable method must
/// not be reported convergent.
DivergenceCheck check_convergence_implies_distant(StabilityVerdict distant,
                                                  ConvergenceVerdict convergence);

/// Runs the distant estimate at rho and the convergence report, then applies
/// the rule above.
DivergenceCheck check_convergence_implies_distant(const EstimatorSetup& setup, double rho,
                                                  double theta_factor, const Tolerances& tol);

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

struct Implication {
  std::string name;
  /// The mathematical result the entry instantiates.
  std::string basis;
  ImplicationStatus status = ImplicationStatus::inconclusive;
  std::string evidence;

  friend bool operator==(const Implication&, const Implication&) = default;
};

struct AnalysisOptions {
  double rho_local = 0.1;
  double rho0 = 0.25;
  std::size_t rho_depth = 7;
  double theta_factor = 0.5;
  Tolerances tol;
};

struct EquivalenceVerdict {
  std::optional<ConsistencyReport> consistency;
  ConsistencyVerdict consistency_verdict = ConsistencyVerdict::inconclusive;
  std::optional<StabilityEstimate> local;
  StabilityVerdict local_verdict = StabilityVerdict::inconclusive;
  std::optional<StabilityEstimate> distant;
  StabilityVerdict distant_verdict = StabilityVerdict::inconclusive;
  std::optional<StabilityEstimate> full;
  StabilityVerdict full_verdict = StabilityVerdict::inconclusive;
  GapCurve gap;
  std::optional<ConvergenceReport> convergence;
  ConvergenceVerdict convergence_verdict = ConvergenceVerdict::inconclusive;
  ContinuityModulus modulus;
  BoundCheckReport bound;
  DivergenceCheck divergence;
  PartitionReport partition;
  std::vector<Implication> implications;
  std::vector<std::string> warnings;

  bool any_violation() const;

  friend bool operator==(const EquivalenceVerdict&, const EquivalenceVerdict&) = default;
};

/// Consistency, local / distant / full stability, gap curve, convergence,
/// continuity modulus, the partition identity and the four implications:
/// "local => convergence", "convergence => distant",
/// "distant + (C) => local" and "stable <=> convergent".
EquivalenceVerdict equivalence_report(const EstimatorSetup& setup, const AnalysisOptions& options);

}  // namespace semigap
