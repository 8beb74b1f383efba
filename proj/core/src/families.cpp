#include "semigap/families.hpp"

#include <sstream>

namespace semigap {

DomainFamily DomainFamily::everything() {
  return DomainFamily{[](double, const State&) { return true; }, true};
}

RegularFamily sublevel_family(DomainFamily domain, NormSpec norm_spec, CapSpec cap) {
  if (cap.unbounded()) return whole_domain(std::move(domain));
  std::ostringstream text;
  text << "{u in X_t : " << to_string(norm_spec.kind) << "-norm(u) <= " << cap.base;
  if (cap.slope != 0.0) text << " + " << cap.slope << " t";
  text << "}";
  const bool invariant = domain.time_invariant && cap.slope == 0.0;
  auto inside = domain.contains;
  return RegularFamily{
      [inside = std::move(inside), norm_spec, cap](double t, const State& u) {
        return inside(t, u) && norm(norm_spec, u) <= cap.at(t);
      },
      text.str(), invariant};
}

RegularFamily whole_domain(DomainFamily domain) {
  return RegularFamily{std::move(domain.contains), "X'_t = X_t", domain.time_invariant};
}

}  // namespace semigap
