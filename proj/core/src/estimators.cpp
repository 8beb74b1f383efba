#include "semigap/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <tuple>

#include "norm_kernel.hpp"
#include "pair_engine.hpp"
#include "semigap/errors.hpp"
#include "semigap/fit.hpp"

namespace semigap {

// ---------------------------------------------------------------------------
// Ladders and iteration
// ---------------------------------------------------------------------------

std::vector<double> geometric_ladder(double top, std::size_t depth) {
  if (!(top > 0.0)) throw ContractViolation("ladder top must be > 0");
  std::vector<double> out;
  out.reserve(depth + 1);
  for (std::size_t k = 0; k <= depth; ++k) out.push_back(std::ldexp(top, -static_cast<int>(k)));
  return out;
}

std::vector<double> uniform_grid(double horizon, std::size_t count) {
  if (horizon < 0.0) throw ContractViolation("grid horizon must be >= 0");
  if (count == 0 || horizon == 0.0) return {0.0};
  std::vector<double> out;
  out.reserve(count + 1);
  for (std::size_t j = 0; j <= count; ++j) {
    out.push_back(j == count ? horizon
                             : horizon * static_cast<double>(j) / static_cast<double>(count));
  }
  return out;
}

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("step size must be > 0");
  if (horizon <= 0.0) return 0;
  const double q = horizon / dt;
  return static_cast<std::size_t>(std::floor(q * (1.0 + 1e-12)));
}

namespace {

bool within_horizon(double time, double horizon) { return time <= horizon * (1.0 + 1e-12); }

double step_time(std::size_t steps, double dt) { return static_cast<double>(steps) * dt; }

}  // namespace

State iterate(const Method& m, double dt, std::size_t n, const State& u,
              const RegularFamily& guard, double horizon) {
  if (!within_horizon(step_time(n, dt), horizon)) {
    throw ContractViolation("iterate: n dt = " + std::to_string(step_time(n, dt)) +
                            " exceeds the horizon " + std::to_string(horizon));
  }
  if (!guard.contains(step_time(n, dt), u)) {
    throw DomainExit("iterate", step_time(n, dt), u.vector(), 0);
  }
  State x = u;
  for (std::size_t p = 1; p <= n; ++p) {
    try {
      x = step(m, dt, x);
    } catch (const BlowupDetected&) {
      throw BlowupDetected(dt, static_cast<int>(p));
    }
    const double t = step_time(n - p, dt);
    if (!guard.contains(t, x)) throw DomainExit("iterate", t, x.vector(), static_cast<int>(p));
  }
  return x;
}

TrajectoryCloud trajectory_cloud(const Problem& p, const RegularFamily& guard,
                                 const CompactCloud& cloud, std::span<const double> t_grid) {
  TrajectoryCloud out;
  std::vector<State> points;
  for (double t : t_grid) {
    if (t < 0.0) throw ContractViolation("trajectory times must be >= 0");
    for (const State& u : cloud.points()) {
      if (!guard.contains(t, u)) {
        ++out.skipped;
        continue;
      }
      try {
        State image = p.exact(t, u);
        if (!image.all_finite()) {
          ++out.skipped;
          continue;
        }
        points.push_back(std::move(image));
      } catch (const DomainExit&) {
        ++out.skipped;
      }
    }
  }
  if (!points.empty()) out.cloud = CompactCloud::from_points(std::move(points));
  return out;
}

// ---------------------------------------------------------------------------
// Pair engine
// ---------------------------------------------------------------------------

namespace detail {

bool better(const Best& a, const Best& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  return std::tie(a.k, a.n, a.i, a.j) < std::tie(b.k, b.n, b.i, b.j);
}

namespace {

constexpr std::size_t kBlock = 256;

void check_setup(const EstimatorSetup& setup) {
  if (setup.dt_ladder.empty()) throw ContractViolation("dt ladder is empty");
  for (double dt : setup.dt_ladder) {
    if (!(dt > 0.0)) throw ContractViolation("dt ladder entries must be > 0");
  }
  if (setup.horizon < 0.0) throw ContractViolation("horizon must be >= 0");
  if (setup.method.dim != setup.problem.dim || setup.norm().dim != setup.problem.dim) {
    throw ContractViolation("problem, method and norm dimensions differ");
  }
  if (!setup.cloud.points().empty() && setup.cloud.points().front().dim() != setup.problem.dim) {
    throw ContractViolation("cloud dimension differs from the problem dimension");
  }
}

/// Validity of iterate(m, dt, n, u) for n = 0..n_max when the guard depends
/// on time: every earlier iterate has to sit in the slice (n - p) dt.
std::vector<char> time_dependent_validity(const EstimatorSetup& setup, double dt,
                                          std::size_t n_max, const State& u) {
  std::vector<State> history{u};
  for (std::size_t p = 1; p <= n_max; ++p) {
    try {
      history.push_back(step(setup.method, dt, history.back()));
    } catch (const BlowupDetected&) {
      break;
    }
  }
  std::vector<char> valid(n_max + 1, 0);
  for (std::size_t n = 0; n < history.size(); ++n) {
    bool ok = true;
    for (std::size_t p = 0; p <= n && ok; ++p) {
      ok = setup.guard.contains(step_time(n - p, dt), history[p]);
    }
    valid[n] = ok ? 1 : 0;
  }
  return valid;
}

}  // namespace

std::vector<BandStats> run_pair_engine(const EstimatorSetup& setup,
                                       std::span<const CloudPair> pairs, std::size_t bands) {
  check_setup(setup);
  const auto& points = setup.cloud.points();
  const std::size_t dim = setup.problem.dim;
  const std::size_t rungs = setup.dt_ladder.size();
  const std::size_t workers = static_cast<std::size_t>(std::max(1, setup.workers));
  const NormSpec& norm_spec = setup.norm();
  const bool invariant = setup.guard.time_invariant;

  std::vector<char> involved(points.size(), 0);
  for (const CloudPair& pr : pairs) involved[pr.i] = involved[pr.j] = 1;

  std::vector<std::vector<BandStats>> per_worker(workers, std::vector<BandStats>(bands));
  for (auto& stats : per_worker) {
    for (BandStats& b : stats) b.profile.resize(rungs);
  }
  std::vector<char> evaluated_any(pairs.size(), 0);
  std::vector<std::size_t> rung_evals(pairs.size(), 0);

  for (std::size_t k = 0; k < rungs; ++k) {
    const double dt = setup.dt_ladder[k];
    const std::size_t n_max = step_count(setup.horizon, dt);
    for (auto& stats : per_worker) {
      for (BandStats& b : stats) b.profile[k].assign(n_max, -1.0);
    }
    if (n_max == 0) continue;

    // reach[i]: largest admissible n (-1 for none); bits only for time-dependent guards.
    std::vector<long long> reach(points.size(), -1);
    std::vector<std::vector<char>> bits(points.size());
    std::vector<State> current(points.size());
    std::vector<char> alive(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!involved[i]) continue;
      if (invariant) {
        if (setup.guard.contains(0.0, points[i])) {
          reach[i] = 0;
          alive[i] = 1;
        }
      } else {
        bits[i] = time_dependent_validity(setup, dt, n_max, points[i]);
        for (std::size_t n = 0; n <= n_max; ++n) {
          if (bits[i][n]) reach[i] = static_cast<long long>(n);
        }
        alive[i] = reach[i] >= 1 ? 1 : 0;
      }
      current[i] = points[i];
    }
    std::fill(rung_evals.begin(), rung_evals.end(), 0);

    std::vector<double> block(points.size() * kBlock * dim, 0.0);
    for (std::size_t p0 = 1; p0 <= n_max; p0 += kBlock) {
      const std::size_t p1 = std::min(n_max, p0 + kBlock - 1);
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (!alive[i]) continue;
        for (std::size_t p = p0; p <= p1; ++p) {
          if (!invariant && static_cast<long long>(p) > reach[i]) {
            alive[i] = 0;
            break;
          }
          try {
            current[i] = step(setup.method, dt, current[i]);
          } catch (const BlowupDetected&) {
            alive[i] = 0;
            break;
          }
          if (invariant) {
            if (!setup.guard.contains(0.0, current[i])) {
              alive[i] = 0;
              break;
            }
            reach[i] = static_cast<long long>(p);
          }
          std::copy(current[i].vector().begin(), current[i].vector().end(),
                    block.begin() + static_cast<std::ptrdiff_t>((i * kBlock + (p - p0)) * dim));
        }
      }

      parallel_for(static_cast<int>(workers), pairs.size(),
                   [&](std::size_t w, std::size_t begin, std::size_t end) {
                     std::vector<BandStats>& stats = per_worker[w];
                     for (std::size_t q = begin; q < end; ++q) {
                       const CloudPair& pr = pairs[q];
                       const long long top = std::min(
                           {reach[pr.i], reach[pr.j], static_cast<long long>(p1)});
                       if (top < static_cast<long long>(p0)) continue;
                       BandStats& band = stats[pr.band];
                       std::vector<double>& profile = band.profile[k];
                       const double inv = 1.0 / pr.distance;
                       const double* base_i = block.data() + pr.i * kBlock * dim;
                       const double* base_j = block.data() + pr.j * kBlock * dim;
                       std::size_t count = 0;
                       for (std::size_t p = p0; p <= static_cast<std::size_t>(top); ++p) {
                         if (!invariant && !(bits[pr.i][p] && bits[pr.j][p])) continue;
                         const std::size_t off = (p - p0) * dim;
                         const double ratio =
                             raw_distance(norm_spec, base_i + off, base_j + off, dim) * inv;
                         ++count;
                         if (ratio > profile[p - 1]) profile[p - 1] = ratio;
                         if (ratio >= band.best.ratio) {
                           const Best cand{ratio, k, p, pr.i, pr.j};
                           if (better(cand, band.best)) band.best = cand;
                         }
                       }
                       rung_evals[q] += count;
                       band.evaluations += count;
                     }
                   });
    }

    for (std::size_t q = 0; q < pairs.size(); ++q) {
      per_worker[0][pairs[q].band].skipped_evaluations += n_max - rung_evals[q];
      if (rung_evals[q] > 0) evaluated_any[q] = 1;
    }
  }

  std::vector<BandStats> out = std::move(per_worker[0]);
  for (std::size_t w = 1; w < workers; ++w) {
    for (std::size_t b = 0; b < bands; ++b) {
      BandStats& into = out[b];
      const BandStats& from = per_worker[w][b];
      if (better(from.best, into.best)) into.best = from.best;
      for (std::size_t k = 0; k < rungs; ++k) {
        for (std::size_t n = 0; n < into.profile[k].size(); ++n) {
          into.profile[k][n] = std::max(into.profile[k][n], from.profile[k][n]);
        }
      }
      into.evaluations += from.evaluations;
      into.skipped_evaluations += from.skipped_evaluations;
    }
  }
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    BandStats& band = out[pairs[q].band];
    if (evaluated_any[q]) {
      ++band.pairs_evaluated;
    } else {
      ++band.skipped_pairs;
    }
  }
  return out;
}

namespace {

double fit_growth(std::span<const double> profile) {
  std::vector<double> n;
  std::vector<double> log_ratio;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] > 0.0) {
      n.push_back(static_cast<double>(i + 1));
      log_ratio.push_back(std::log(profile[i]));
    }
  }
  if (n.empty()) return 0.0;
  if (n.size() == 1) return std::exp(log_ratio[0] / n[0]);
  return std::exp(fit_line(n, log_ratio).slope);
}

}  // namespace

StabilityEstimate assemble_estimate(const EstimatorSetup& setup, StabilityKind kind,
                                    std::optional<double> threshold,
                                    std::span<const BandStats> bands, std::size_t duplicates) {
  StabilityEstimate e;
  e.kind = kind;
  e.threshold = threshold;
  e.horizon = setup.horizon;
  e.dt_ladder = setup.dt_ladder;
  e.duplicate_pairs = duplicates;
  Best best;
  for (const BandStats& b : bands) {
    if (better(b.best, best)) best = b.best;
    e.pairs_evaluated += b.pairs_evaluated;
    e.skipped_pairs += b.skipped_pairs;
    e.evaluations += b.evaluations;
    e.skipped_evaluations += b.skipped_evaluations;
  }
  if (e.pairs_evaluated == 0 || best.ratio < 0.0) {
    throw EmptySample(std::string("no admissible pair for the ") + std::string(to_string(kind)) +
                      " stability estimate (" + std::to_string(e.skipped_pairs) +
                      " pairs excluded by the guard, " + std::to_string(duplicates) +
                      " duplicates)");
  }
  e.constant = best.ratio;
  const auto& points = setup.cloud.points();
  e.witness = StabilityWitness{points[best.i], points[best.j], best.i, best.j,
                               best.n,        setup.dt_ladder[best.k], best.k};
  std::vector<double> profile(bands.front().profile[best.k].size(), -1.0);
  for (const BandStats& b : bands) {
    for (std::size_t n = 0; n < profile.size(); ++n) profile[n] = std::max(profile[n], b.profile[best.k][n]);
  }
  e.growth_factor = fit_growth(profile);
  for (double& x : profile) x = std::max(x, 0.0);
  e.growth_profile = std::move(profile);
  return e;
}

namespace {

enum class Gate { none, at_most, at_least };

std::vector<CloudPair> gated_pairs(const EstimatorSetup& setup, Gate gate, double r,
                                   std::size_t* duplicates) {
  const auto& points = setup.cloud.points();
  const NormSpec& norm_spec = setup.norm();
  std::vector<CloudPair> out;
  *duplicates = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(norm_spec, points[i], points[j]);
      if (d == 0.0) {
        ++*duplicates;
        continue;
      }
      if (gate == Gate::at_most && !(d <= r)) continue;
      if (gate == Gate::at_least && !(d >= r)) continue;
      out.push_back({i, j, d, 0});
    }
  }
  return out;
}

StabilityEstimate single_gate(const EstimatorSetup& setup, StabilityKind kind, Gate gate,
                              std::optional<double> threshold) {
  check_setup(setup);
  std::size_t duplicates = 0;
  const std::vector<CloudPair> pairs = gated_pairs(setup, gate, threshold.value_or(0.0), &duplicates);
  const std::vector<BandStats> stats = run_pair_engine(setup, pairs, 1);
  return assemble_estimate(setup, kind, threshold, stats, duplicates);
}

}  // namespace

std::vector<std::optional<StabilityEstimate>> distant_ladder(const EstimatorSetup& setup,
                                                             std::span<const double> rho) {
  check_setup(setup);
  for (std::size_t r = 0; r < rho.size(); ++r) {
    if (!(rho[r] > 0.0)) throw ContractViolation("rho ladder entries must be > 0");
    if (r > 0 && !(rho[r] < rho[r - 1])) throw ContractViolation("rho ladder must descend");
  }
  std::vector<std::optional<StabilityEstimate>> out(rho.size());
  if (rho.empty()) return out;
  std::size_t duplicates = 0;
  std::vector<CloudPair> pairs = gated_pairs(setup, Gate::at_least, rho.back(), &duplicates);
  // band b holds the pairs first admitted at rho[b].
  for (CloudPair& pr : pairs) {
    std::size_t b = 0;
    while (!(pr.distance >= rho[b])) ++b;
    pr.band = b;
  }
  const std::vector<BandStats> stats = run_pair_engine(setup, pairs, rho.size());
  for (std::size_t r = 0; r < rho.size(); ++r) {
    try {
      out[r] = assemble_estimate(setup, StabilityKind::distant, rho[r],
                                 std::span<const BandStats>(stats.data(), r + 1), duplicates);
    } catch (const EmptySample&) {
      out[r].reset();
    }
  }
  return out;
}

double min_pair_distance(const EstimatorSetup& setup) {
  const auto& points = setup.cloud.points();
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(setup.norm(), points[i], points[j]);
      if (d > 0.0 && (best == 0.0 || d < best)) best = d;
    }
  }
  return best;
}

}  // namespace detail

std::string_view to_string(StabilityKind k) {
  switch (k) {
    case StabilityKind::local: return "local";
    case StabilityKind::distant: return "distant";
    case StabilityKind::full: return "full";
  }
  return "unknown";
}

StabilityEstimate estimate_local_stability(const EstimatorSetup& setup, double rho_local) {
  if (!(rho_local > 0.0)) throw ContractViolation("rho' must be > 0");
  return detail::single_gate(setup, StabilityKind::local, detail::Gate::at_most, rho_local);
}

StabilityEstimate estimate_distant_stability(const EstimatorSetup& setup, double rho) {
  if (!(rho > 0.0)) throw ContractViolation("rho must be > 0");
  return detail::single_gate(setup, StabilityKind::distant, detail::Gate::at_least, rho);
}

StabilityEstimate estimate_stability(const EstimatorSetup& setup) {
  return detail::single_gate(setup, StabilityKind::full, detail::Gate::none, std::nullopt);
}

double reevaluate_witness(const EstimatorSetup& setup, const StabilityWitness& w) {
  const double d = distance(setup.norm(), w.u, w.v);
  if (d == 0.0) throw ContractViolation("witness pair has distance zero");
  const State cu = iterate(setup.method, w.dt, w.n, w.u, setup.guard, setup.horizon);
  const State cv = iterate(setup.method, w.dt, w.n, w.v, setup.guard, setup.horizon);
  return distance(setup.norm(), cu, cv) * (1.0 / d);
}

StabilityVerdict classify_stability(const StabilityEstimate& e, const Tolerances& tol) {
  if (e.pairs_evaluated < tol.min_pairs) return StabilityVerdict::inconclusive;
  return e.growth_factor >= 1.0 + tol.growth_tol ? StabilityVerdict::unstable
                                                 : StabilityVerdict::stable;
}

// ---------------------------------------------------------------------------
// Consistency
// ---------------------------------------------------------------------------

DefectSample consistency_defect(const EstimatorSetup& setup, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("consistency step must be > 0");
  DefectSample out;
  out.dt = dt;
  bool any = false;
  for (double t : setup.t_grid) {
    for (const State& u : setup.cloud.points()) {
      if (!setup.guard.contains(t + dt, u)) {
        ++out.skipped;
        continue;
      }
      try {
        const State w = setup.problem.exact(t, u);
        const State scheme = step(setup.method, dt, w);
        const State truth = setup.problem.exact(dt, w);
        const double defect = distance(setup.norm(), scheme, truth) / dt;
        if (!any || defect > out.defect) {
          out.defect = defect;
          out.t = t;
          out.u = u;
          any = true;
        }
      } catch (const DomainExit&) {
        ++out.skipped;
      } catch (const BlowupDetected&) {
        ++out.skipped;
      }
    }
  }
  if (!any) throw EmptySample("no admissible (t, u) for the consistency defect at dt = " + std::to_string(dt));
  return out;
}

namespace {

/// Each rung improves on the previous one or both sit below the zero floor.
bool decreasing(std::span<const double> values, double zero_tol) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1] || values[i] <= zero_tol)) return false;
  }
  return true;
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return 0.0;
  return fit_line(lx, ly).slope;
}

}  // namespace

ConsistencyReport consistency_report(const EstimatorSetup& setup, const Tolerances& tol) {
  ConsistencyReport out;
  std::vector<double> dts;
  std::vector<double> values;
  for (double dt : setup.dt_ladder) {
    out.defects.push_back(consistency_defect(setup, dt));
    dts.push_back(dt);
    values.push_back(out.defects.back().defect);
  }
  out.fit_order = log_log_slope(dts, values);
  const double last = values.empty() ? 0.0 : values.back();
  if (!values.empty() && decreasing(values, tol.zero_tol) && last <= tol.consistency_tol) {
    out.verdict = ConsistencyVerdict::consistent;
  } else if (out.fit_order <= 0.1 && last > tol.consistency_tol) {
    out.verdict = ConsistencyVerdict::inconsistent;
  } else {
    out.verdict = ConsistencyVerdict::inconclusive;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

ErrorSample convergence_error(const EstimatorSetup& setup, double dt, double theta) {
  if (!(dt > 0.0)) throw ContractViolation("convergence step must be > 0");
  if (!(theta >= 0.0)) throw ContractViolation("theta window must be >= 0");
  const double T = setup.horizon;
  const double slack = 1e-12 * std::max(1.0, T);

  // (t index, n) candidates, and the largest n any of them needs.
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::size_t n_need = 0;
  for (std::size_t ti = 0; ti < setup.t_grid.size(); ++ti) {
    const double t = setup.t_grid[ti];
    const double lo = std::max(0.0, std::ceil((t - theta) / dt) - 1.0);
    const double hi = std::floor((t + theta) / dt) + 1.0;
    for (double nd = lo; nd <= hi; nd += 1.0) {
      const std::size_t n = static_cast<std::size_t>(nd);
      const double nt = step_time(n, dt);
      if (std::abs(t - nt) <= theta + slack && within_horizon(nt, T)) {
        matches.emplace_back(ti, n);
        n_need = std::max(n_need, n);
      }
    }
  }

  ErrorSample out;
  out.dt = dt;
  bool any = false;
  const auto& points = setup.cloud.points();
  for (const State& u : points) {
    // Trajectory once per point, with per-n admissibility as in iterate().
    std::vector<State> history{u};
    for (std::size_t p = 1; p <= n_need; ++p) {
      try {
        history.push_back(step(setup.method, dt, history.back()));
      } catch (const BlowupDetected&) {
        break;
      }
    }
    auto admissible = [&](std::size_t n) {
      if (n >= history.size()) return false;
      for (std::size_t p = 0; p <= n; ++p) {
        if (!setup.guard.contains(step_time(n - p, dt), history[p])) return false;
      }
      return true;
    };
    for (const auto& [ti, n] : matches) {
      const double t = setup.t_grid[ti];
      if (!setup.guard.contains(t, u) || !admissible(n)) {
        ++out.skipped;
        continue;
      }
      try {
        const State truth = setup.problem.exact(t, u);
        const double err = distance(setup.norm(), truth, history[n]);
        out.max_mismatch = std::max(out.max_mismatch, std::abs(t - step_time(n, dt)));
        if (!any || err > out.sup_error || std::isnan(err)) {
          out.sup_error = err;
          out.t = t;
          out.n = n;
          out.u = u;
          any = true;
        }
      } catch (const DomainExit&) {
        ++out.skipped;
      }
    }
  }
  if (!any) throw EmptySample("no admissible (t, n, u) for the convergence error at dt = " + std::to_string(dt));
  return out;
}

ConvergenceReport convergence_report(const EstimatorSetup& setup, double theta_factor,
                                     const Tolerances& tol) {
  ConvergenceReport out;
  out.theta_factor = theta_factor;
  std::vector<double> values;
  for (double dt : setup.dt_ladder) {
    out.errors.push_back(convergence_error(setup, dt, theta_factor * dt));
    values.push_back(out.errors.back().sup_error);
  }
  double scale = 0.0;
  for (const State& u : setup.cloud.points()) scale = std::max(scale, norm(setup.norm(), u));
  if (scale == 0.0) scale = 1.0;

  const double first = values.front();
  const double last = values.back();
  const bool blows_up = std::any_of(values.begin(), values.end(), [&](double e) {
    return !std::isfinite(e) || e > tol.divergence_factor * scale;
  });
  if (blows_up || (last > 2.0 * first && last > tol.zero_tol)) {
    out.verdict = ConvergenceVerdict::divergent;
  } else if (decreasing(values, tol.zero_tol) && last <= tol.convergence_tol) {
    out.verdict = ConvergenceVerdict::convergent;
  } else {
    out.verdict = ConvergenceVerdict::inconclusive;
  }
  if (out.verdict != ConvergenceVerdict::convergent && values.size() >= 2) {
    const double prev = values[values.size() - 2];
    out.plateau = prev > 0.0 && last / prev > 0.8;
  }
  out.floor = last;
  return out;
}

// ---------------------------------------------------------------------------
// Continuity modulus and linear power norm
// ---------------------------------------------------------------------------

ContinuityModulus continuity_modulus(const EstimatorSetup& setup, std::span<const double> deltas) {
  ContinuityModulus out;
  const double T = setup.horizon;
  double running = 0.0;
  for (std::size_t r = 0; r < deltas.size(); ++r) {
    const double delta = deltas[r];
    if (!(delta >= 0.0)) throw ContractViolation("modulus deltas must be >= 0");
    if (r > 0 && delta < deltas[r - 1]) throw ContractViolation("modulus deltas must ascend");
    double omega = 0.0;
    for (double t : setup.t_grid) {
      for (const State& u : setup.cloud.points()) {
        std::optional<State> at_t;
        for (int k = 0; k <= 16; ++k) {
          const double s = std::clamp(t + delta * (static_cast<double>(k) / 8.0 - 1.0), 0.0, T);
          if (s == t) continue;
          if (!setup.problem.domain.contains(std::max(t, s), u)) continue;
          try {
            if (!at_t) at_t = setup.problem.exact(t, u);
            omega = std::max(omega, distance(setup.norm(), *at_t, setup.problem.exact(s, u)));
          } catch (const DomainExit&) {
          }
        }
      }
    }
    running = std::max(running, omega);
    out.deltas.push_back(delta);
    out.omegas.push_back(running);
  }
  return out;
}

namespace {

/// Columns of C^n in the canonical basis, column-major.
std::vector<double> power_matrix(const Method& m, double dt, std::size_t n, std::size_t dim) {
  std::vector<double> a(dim * dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    State x = State::zeros(dim);
    x[j] = 1.0;
    for (std::size_t p = 0; p < n; ++p) x = step(m, dt, x);
    for (std::size_t i = 0; i < dim; ++i) a[j * dim + i] = x[i];
  }
  return a;
}

}  // namespace

double linear_power_norm(const Method& m, double dt, std::size_t n, const NormSpec& norm_spec,
                         std::size_t probe_count, std::uint64_t seed) {
  if (!m.linear) throw ContractViolation("linear_power_norm: method " + m.name + " is not declared linear");
  const std::size_t dim = m.dim;
  if (norm_spec.dim != dim) throw ContractViolation("linear_power_norm: norm dimension differs from the method");
  if (probe_count < dim) throw ContractViolation("linear_power_norm: probe count must be >= dim");
  const std::vector<double> a = power_matrix(m, dt, n, dim);
  auto at = [&](std::size_t i, std::size_t j) { return a[j * dim + i]; };

  switch (norm_spec.kind) {
    case NormKind::sup: {
      double best = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) row += std::abs(at(i, j));
        best = std::max(best, row);
      }
      return best;
    }
    case NormKind::l1: {
      double best = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < dim; ++i) col += std::abs(at(i, j));
        best = std::max(best, col);
      }
      return best;
    }
    case NormKind::euclidean:
    case NormKind::weighted_l2:
      break;
  }

  if (dim == 1) return std::abs(a[0]);
  // Power iteration on A^T A from seeded random starts.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t starts = std::min<std::size_t>(probe_count, 4);
  double best = 0.0;
  std::vector<double> x(dim);
  std::vector<double> y(dim);
  for (std::size_t s = 0; s < starts; ++s) {
    for (double& xi : x) xi = gauss(rng);
    double lambda = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
      double nx = 0.0;
      for (double xi : x) nx += xi * xi;
      nx = std::sqrt(nx);
      if (nx == 0.0) break;
      for (double& xi : x) xi /= nx;
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += at(i, j) * x[j];
        y[i] = acc;
      }
      double ny = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) acc += at(i, j) * y[i];
        x[j] = acc;
        ny += acc * acc;
      }
      const double next = std::sqrt(ny);
      const bool done = std::abs(next - lambda) <= 1e-10 * next;
      lambda = next;
      if (done || next == 0.0) break;
    }
    best = std::max(best, std::sqrt(lambda));
  }
  return best;
}

}  // namespace semigap
