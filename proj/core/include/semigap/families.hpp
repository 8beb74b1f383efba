#pragma once

#include <functional>
#include <limits>
#include <string>

#include "semigap/state.hpp"

namespace semigap {

using Membership = std::function<bool(double t, const State& u)>;

/// The nested blow-up domains X_t. Must satisfy X_{t+s} ⊆ X_t.
struct DomainFamily {
  Membership contains;
  /// True when membership does not depend on t.
  bool time_invariant = false;

  static DomainFamily everything();
};

/// Time slices X'_t of a regular set. Always a pointwise subset of its
/// domain family; forward invariance is probed, not assumed.
struct RegularFamily {
  Membership contains;
  std::string description;
  bool time_invariant = false;
};

/// Cap M(t) = base + slope * t of a sublevel regular family.
struct CapSpec {
  double base = std::numeric_limits<double>::infinity();
  double slope = 0.0;

  double at(double t) const noexcept { return base + slope * t; }
  bool unbounded() const noexcept { return base == std::numeric_limits<double>::infinity(); }

  friend bool operator==(const CapSpec&, const CapSpec&) = default;
};

/// X'_t = { u in X_t : norm(u) <= M(t) }.
RegularFamily sublevel_family(DomainFamily domain, NormSpec norm, CapSpec cap);

/// X'_t = X_t.
RegularFamily whole_domain(DomainFamily domain);

}  // namespace semigap
