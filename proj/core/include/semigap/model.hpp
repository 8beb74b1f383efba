#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semigap/cloud.hpp"
#include "semigap/families.hpp"
#include "semigap/state.hpp"

namespace semigap {

using Evolution = std::function<State(double t, const State& u)>;

/// An exact semigroup E(t) on its domain family, with a default regular
/// family and the norm the problem is measured in.
struct Problem {
  std::string name;
  std::size_t dim = 1;
  /// Throws DomainExit when u is outside X_t.
  Evolution exact;
  DomainFamily domain;
  RegularFamily regular;
  NormSpec norm;
  /// E(t) is linear; exact_step inherits this.
  bool linear = false;
};

/// A one-step map C_dt with C_0 = id.
struct Method {
  std::string name;
  std::size_t dim = 1;
  Evolution step;
  /// Linear in u; enables linear_power_norm.
  bool linear = false;
};

/// One step of `m`. Throws ContractViolation for dt < 0 or a dimension
/// mismatch and BlowupDetected if the result is not finite.
State step(const Method& m, double dt, const State& u);

/// norm(E(t+s)u - E(t)E(s)u). Throws DomainExit naming the evaluation that
/// left its domain ("E(t+s)u", "E(s)u" or "E(t)E(s)u") or "u" itself.
double semigroup_law_residual(const Problem& p, double t, double s, const State& u);

struct RegularityViolation {
  enum class Kind { exact, method };
  Kind kind;
  double t;
  double s;  // s for the exact flow, dt for the method
  std::size_t point_index;
  State image;
};

/// Samples E(t) X'_{t+s} ⊆ X'_s and C_dt X'_{t+dt} ⊆ X'_t over a t-grid of
/// `t_count + 1` points in [0, horizon], the dt ladder (plus dt = 0) and the
/// sample points. Only tuples with t + s <= horizon are tested.
std::vector<RegularityViolation> regularity_probe(const Problem& p, const Method& m,
                                                  const RegularFamily& regular, double horizon,
                                                  const CompactCloud& sample,
                                                  std::span<const double> dt_ladder,
                                                  std::size_t t_count = 10);

/// Largest observed norm(C_{dt'} u' - C_dt u) over perturbations
/// |dt' - dt| <= eps, norm(u' - u) <= eps along coordinate directions.
double continuity_probe(const Method& m, const NormSpec& norm, double dt, const State& u,
                        double eps);

}  // namespace semigap
