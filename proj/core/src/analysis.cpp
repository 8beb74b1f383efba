#include "semigap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pair_engine.hpp"
#include "semigap/errors.hpp"

namespace semigap {

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Gap curve
// ---------------------------------------------------------------------------

GapVerdict classify_gap(std::span<const double> rho, std::span<const double> values,
                        const Tolerances& tol, PowerLawFit* fit_out, double* ratio_out) {
  if (rho.size() != values.size()) throw ContractViolation("classify_gap: length mismatch");
  const PowerLawFit fit = fit_power_law(rho, values);
  if (fit_out != nullptr) *fit_out = fit;
  const std::size_t n = values.size();
  double ratio = 0.0;
  if (n >= 2) {
    for (std::size_t k = n >= 4 ? n - 4 : 0; k + 1 < n; ++k) {
      const double r = values[k] > 0.0   ? values[k + 1] / values[k]
                       : values[k + 1] > 0 ? std::numeric_limits<double>::infinity()
                                           : 1.0;
      ratio = std::max(ratio, r);
    }
  }
  if (ratio_out != nullptr) *ratio_out = ratio;
  if (n < 4) return GapVerdict::inconclusive;
  if (ratio <= 1.0 + tol.gap_tau) return GapVerdict::bounded;
  if (fit.valid && fit.exponent >= tol.q_min && fit.rms_residual <= tol.fit_residual_max) {
    return GapVerdict::unbounded;
  }
  return GapVerdict::inconclusive;
}

GapCurve gap_curve(const EstimatorSetup& setup, std::span<const double> rho_ladder,
                   const Tolerances& tol) {
  GapCurve curve;
  curve.regular_description = setup.guard.description;
  curve.horizon = setup.horizon;
  curve.cloud_fingerprint = setup.cloud.fingerprint();
  curve.min_pair_distance = detail::min_pair_distance(setup);
  const auto estimates = detail::distant_ladder(setup, rho_ladder);
  std::vector<double> rho;
  std::vector<double> values;
  for (std::size_t r = 0; r < rho_ladder.size(); ++r) {
    curve.rungs.push_back(GapRung{rho_ladder[r], estimates[r]});
    if (estimates[r]) {
      rho.push_back(rho_ladder[r]);
      values.push_back(estimates[r]->constant);
    }
  }
  curve.resolution_limited = !rho_ladder.empty() && curve.min_pair_distance > 0.0 &&
                             rho_ladder.back() < curve.min_pair_distance;
  if (values.empty()) {
    curve.verdict = GapVerdict::inconclusive;
    return curve;
  }
  curve.verdict = classify_gap(rho, values, tol, &curve.fit, &curve.ratio_test);
  if (rho_ladder.size() < 4) curve.verdict = GapVerdict::inconclusive;
  return curve;
}

// ---------------------------------------------------------------------------
// Implication checks
// ---------------------------------------------------------------------------

std::string_view to_string(ImplicationStatus s) {
  switch (s) {
    case ImplicationStatus::holds: return "holds";
    case ImplicationStatus::vacuous: return "vacuous";
    case ImplicationStatus::hypothesis_not_met: return "hypothesis_not_met";
    case ImplicationStatus::violated: return "violated";
    case ImplicationStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

template <class F>
auto optional_estimate(F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const EmptySample&) {
    return std::nullopt;
  }
}

PartitionReport assemble_partition(double r, const std::optional<StabilityEstimate>& local,
                                   const std::optional<StabilityEstimate>& distant,
                                   const std::optional<StabilityEstimate>& full) {
  PartitionReport out;
  out.r = r;
  if (local) out.local = local->constant;
  if (distant) out.distant = distant->constant;
  if (full) out.full = full->constant;
  if (!local && !distant && !full) {
    out.vacuous = true;
    out.pass = true;
    return out;
  }
  if (!full) return out;
  double parts = -1.0;
  if (local) parts = std::max(parts, local->constant);
  if (distant) parts = std::max(parts, distant->constant);
  out.pass = parts == full->constant;
  return out;
}

}  // namespace

PartitionReport check_partition_identity(const EstimatorSetup& setup, double r) {
  if (!(r > 0.0)) throw ContractViolation("partition radius must be > 0");
  return assemble_partition(
      r, optional_estimate([&] { return estimate_local_stability(setup, r); }),
      optional_estimate([&] { return estimate_distant_stability(setup, r); }),
      optional_estimate([&] { return estimate_stability(setup); }));
}

BoundCheckReport check_convergence_bound(const EstimatorSetup& setup,
                                         const StabilityEstimate& local,
                                         StabilityVerdict local_verdict,
                                         const ConsistencyReport& consistency,
                                         const ConvergenceReport& convergence,
                                         const Tolerances& tol) {
  const std::size_t rungs = setup.dt_ladder.size();
  if (consistency.defects.size() != rungs || convergence.errors.size() != rungs) {
    throw ContractViolation("bound check needs consistency and convergence on the setup's ladder");
  }
  for (std::size_t k = 0; k < rungs; ++k) {
    if (consistency.defects[k].dt != setup.dt_ladder[k] ||
        convergence.errors[k].dt != setup.dt_ladder[k]) {
      throw ContractViolation("bound check needs consistency and convergence on the setup's ladder");
    }
  }
  BoundCheckReport out;
  out.local_constant = local.constant;
  out.slack = tol.slack;
  if (local_verdict != StabilityVerdict::stable) {
    out.status = ImplicationStatus::hypothesis_not_met;
    out.note = std::string("local stability verdict is ") + std::string(to_string(local_verdict));
    return out;
  }
  if (consistency.verdict != ConsistencyVerdict::consistent) {
    out.status = ImplicationStatus::hypothesis_not_met;
    out.note = std::string("consistency verdict is ") + std::string(to_string(consistency.verdict));
    return out;
  }

  std::vector<double> mismatches;
  for (const ErrorSample& e : convergence.errors) {
    if (e.max_mismatch > 0.0) mismatches.push_back(e.max_mismatch);
  }
  std::sort(mismatches.begin(), mismatches.end());
  mismatches.erase(std::unique(mismatches.begin(), mismatches.end()), mismatches.end());
  const ContinuityModulus modulus = continuity_modulus(setup, mismatches);
  auto omega = [&](double delta) {
    if (delta <= 0.0) return 0.0;
    const auto it = std::lower_bound(modulus.deltas.begin(), modulus.deltas.end(), delta);
    return modulus.omegas[static_cast<std::size_t>(it - modulus.deltas.begin())];
  };

  bool all = true;
  for (std::size_t k = 0; k < rungs; ++k) {
    BoundRung r;
    r.dt = setup.dt_ladder[k];
    r.error = convergence.errors[k].sup_error;
    r.defect = consistency.defects[k].defect;
    r.modulus_term = omega(convergence.errors[k].max_mismatch);
    r.bound = tol.slack * local.constant * setup.horizon * r.defect + r.modulus_term + tol.zero_tol;
    r.margin = r.bound - r.error;
    r.holds = r.error <= r.bound;
    all = all && r.holds;
    out.rungs.push_back(r);
  }
  out.status = all ? ImplicationStatus::holds : ImplicationStatus::violated;
  out.note = all ? "error within the bound on every rung" : "error exceeds the bound on some rung";
  return out;
}

DivergenceCheck check_convergence_implies_distant(StabilityVerdict distant,
                                                  ConvergenceVerdict convergence) {
  DivergenceCheck out;
  out.distant = distant;
  out.convergence = convergence;
  switch (distant) {
    case StabilityVerdict::stable:
      out.status = ImplicationStatus::vacuous;
      out.note = "distantly stable";
      break;
    case StabilityVerdict::unstable:
      if (convergence == ConvergenceVerdict::convergent) {
        out.status = ImplicationStatus::violated;
        out.note = "convergent while distantly unstable";
      } else {
        out.status = ImplicationStatus::holds;
        out.note = std::string("distantly unstable and ") + std::string(to_string(convergence));
      }
      break;
    case StabilityVerdict::inconclusive:
      out.status = ImplicationStatus::inconclusive;
      out.note = "distant stability inconclusive";
      break;
  }
  return out;
}

DivergenceCheck check_convergence_implies_distant(const EstimatorSetup& setup, double rho,
                                                  double theta_factor, const Tolerances& tol) {
  StabilityVerdict distant = StabilityVerdict::inconclusive;
  if (auto e = optional_estimate([&] { return estimate_distant_stability(setup, rho); })) {
    distant = classify_stability(*e, tol);
  }
  ConvergenceVerdict convergence = ConvergenceVerdict::inconclusive;
  if (auto c = optional_estimate([&] { return convergence_report(setup, theta_factor, tol); })) {
    convergence = c->verdict;
  }
  return check_convergence_implies_distant(distant, convergence);
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

bool EquivalenceVerdict::any_violation() const {
  const bool implication = std::any_of(implications.begin(), implications.end(), [](const Implication& i) {
    return i.status == ImplicationStatus::violated;
  });
  return implication || !partition.pass;
}

namespace {

std::string describe(const std::optional<StabilityEstimate>& e, StabilityVerdict v) {
  if (!e) return "no admissible pair";
  return std::string(to_string(v)) + " (constant " + format_number(e->constant) + ", growth " +
         format_number(e->growth_factor) + ")";
}

}  // namespace

EquivalenceVerdict equivalence_report(const EstimatorSetup& setup, const AnalysisOptions& options) {
  const Tolerances& tol = options.tol;
  EquivalenceVerdict out;
  auto warn_empty = [&](const char* what) {
    out.warnings.push_back(std::string(what) + ": no admissible sample");
  };

  out.consistency = optional_estimate([&] { return consistency_report(setup, tol); });
  if (out.consistency) {
    out.consistency_verdict = out.consistency->verdict;
  } else {
    warn_empty("consistency");
  }

  out.local = optional_estimate([&] { return estimate_local_stability(setup, options.rho_local); });
  if (out.local) {
    out.local_verdict = classify_stability(*out.local, tol);
  } else {
    warn_empty("local stability");
  }
  out.distant = optional_estimate([&] { return estimate_distant_stability(setup, options.rho0); });
  if (out.distant) {
    out.distant_verdict = classify_stability(*out.distant, tol);
  } else {
    warn_empty("distant stability");
  }
  out.full = optional_estimate([&] { return estimate_stability(setup); });
  StabilityVerdict full_growth = StabilityVerdict::inconclusive;
  if (out.full) {
    full_growth = classify_stability(*out.full, tol);
  } else {
    warn_empty("stability");
  }
  for (const auto* e : {&out.local, &out.distant, &out.full}) {
    if (*e && (*e)->pairs_evaluated < tol.min_pairs) {
      out.warnings.push_back(std::string(to_string((*e)->kind)) + " stability rests on " +
                             std::to_string((*e)->pairs_evaluated) + " pairs; verdict inconclusive");
    }
  }

  const std::vector<double> rho = geometric_ladder(options.rho0, options.rho_depth);
  out.gap = gap_curve(setup, rho, tol);
  if (out.gap.resolution_limited) {
    out.warnings.push_back("gap curve reaches below the smallest pair distance " +
                           format_number(out.gap.min_pair_distance));
  }

  // Distant stability with an unbounded gap cannot be locally stable.
  if (out.distant_verdict == StabilityVerdict::stable && out.gap.verdict == GapVerdict::unbounded &&
      out.local_verdict != StabilityVerdict::unstable) {
    out.local_verdict = StabilityVerdict::unstable;
    out.warnings.push_back("local verdict set to unstable by the unbounded gap curve");
  }
  const StabilityVerdict parts[] = {full_growth, out.local_verdict, out.distant_verdict};
  if (std::find(std::begin(parts), std::end(parts), StabilityVerdict::unstable) != std::end(parts)) {
    out.full_verdict = StabilityVerdict::unstable;
  } else if (std::all_of(std::begin(parts), std::end(parts),
                         [](StabilityVerdict v) { return v == StabilityVerdict::stable; })) {
    out.full_verdict = StabilityVerdict::stable;
  }

  out.convergence = optional_estimate([&] { return convergence_report(setup, options.theta_factor, tol); });
  if (out.convergence) {
    out.convergence_verdict = out.convergence->verdict;
    if (out.convergence->plateau) {
      out.warnings.push_back("convergence error plateaus at " + format_number(out.convergence->floor));
    }
  } else {
    warn_empty("convergence");
  }

  std::vector<double> deltas{0.0};
  for (auto it = setup.dt_ladder.rbegin(); it != setup.dt_ladder.rend(); ++it) {
    deltas.push_back(*it);
  }
  std::sort(deltas.begin(), deltas.end());
  out.modulus = continuity_modulus(setup, deltas);

  if (out.local && out.consistency && out.convergence) {
    out.bound = check_convergence_bound(setup, *out.local, out.local_verdict, *out.consistency,
                                        *out.convergence, tol);
  } else {
    out.bound.status = ImplicationStatus::hypothesis_not_met;
    out.bound.note = "prerequisite estimates are missing";
  }
  out.divergence = check_convergence_implies_distant(out.distant_verdict, out.convergence_verdict);
  out.partition = assemble_partition(
      options.rho_local, out.local,
      optional_estimate([&] { return estimate_distant_stability(setup, options.rho_local); }),
      out.full);
  if (!out.partition.pass) out.warnings.push_back("partition identity failed");

  // local => convergence
  {
    Implication imp{"local => convergence",
                    "consistent and locally stable methods converge, with error at most "
                    "(1 + L' T) eps",
                    ImplicationStatus::inconclusive, ""};
    if (out.bound.status == ImplicationStatus::hypothesis_not_met) {
      imp.status = ImplicationStatus::hypothesis_not_met;
    } else if (out.bound.status == ImplicationStatus::violated ||
               out.convergence_verdict == ConvergenceVerdict::divergent) {
      imp.status = ImplicationStatus::violated;
    } else if (out.convergence_verdict == ConvergenceVerdict::convergent) {
      imp.status = ImplicationStatus::holds;
    }
    imp.evidence = out.bound.note + "; convergence " + std::string(to_string(out.convergence_verdict));
    out.implications.push_back(std::move(imp));
  }
  // convergence => distant
  {
    out.implications.push_back(Implication{
        "convergence => distant", "a convergent method is distantly stable",
        out.divergence.status, out.divergence.note});
  }
  // distant + (C) => local
  {
    Implication imp{"distant + (C) => local",
                    "distant stability with a bounded limit of L''(rho) as rho -> 0 gives local "
                    "stability",
                    ImplicationStatus::inconclusive, ""};
    const bool hypothesis = out.distant_verdict == StabilityVerdict::stable &&
                            out.gap.verdict == GapVerdict::bounded;
    imp.evidence = "distant " + describe(out.distant, out.distant_verdict) + "; gap " +
                   std::string(to_string(out.gap.verdict)) + "; local " +
                   describe(out.local, out.local_verdict);
    if (!hypothesis) {
      imp.status = ImplicationStatus::hypothesis_not_met;
    } else if (out.local_verdict == StabilityVerdict::stable) {
      imp.status = ImplicationStatus::holds;
    } else if (out.local_verdict == StabilityVerdict::unstable) {
      imp.status = ImplicationStatus::violated;
    }
    out.implications.push_back(std::move(imp));
  }
  // stable <=> convergent
  {
    Implication imp{"stable <=> convergent",
                    "under consistency and a bounded gap, convergence is equivalent to stability",
                    ImplicationStatus::inconclusive, ""};
    const bool hypothesis = out.consistency_verdict == ConsistencyVerdict::consistent &&
                            out.gap.verdict == GapVerdict::bounded;
    imp.evidence = "stability " + std::string(to_string(out.full_verdict)) + "; convergence " +
                   std::string(to_string(out.convergence_verdict)) + "; consistency " +
                   std::string(to_string(out.consistency_verdict)) + "; gap " +
                   std::string(to_string(out.gap.verdict));
    if (!hypothesis) {
      imp.status = ImplicationStatus::hypothesis_not_met;
    } else {
      const bool stable = out.full_verdict == StabilityVerdict::stable;
      const bool unstable = out.full_verdict == StabilityVerdict::unstable;
      const bool convergent = out.convergence_verdict == ConvergenceVerdict::convergent;
      const bool divergent = out.convergence_verdict == ConvergenceVerdict::divergent;
      if ((stable && convergent) || (unstable && divergent)) {
        imp.status = ImplicationStatus::holds;
      } else if ((stable && divergent) || (unstable && convergent)) {
        imp.status = ImplicationStatus::violated;
      }
    }
    out.implications.push_back(std::move(imp));
  }
  return out;
}

}  // namespace semigap
