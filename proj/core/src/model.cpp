#include "semigap/model.hpp"

#include <algorithm>
#include <string>

#include "semigap/errors.hpp"

namespace semigap {

State step(const Method& m, double dt, const State& u) {
  if (!(dt >= 0.0)) throw ContractViolation("step size must be >= 0, got " + std::to_string(dt));
  if (u.dim() != m.dim) {
    throw ContractViolation("method " + m.name + " expects dimension " + std::to_string(m.dim));
  }
  State next = m.step(dt, u);
  if (!next.all_finite()) throw BlowupDetected(dt);
  return next;
}

double semigroup_law_residual(const Problem& p, double t, double s, const State& u) {
  if (t < 0.0 || s < 0.0) throw ContractViolation("semigroup times must be >= 0");
  if (!p.domain.contains(t + s, u)) throw DomainExit("u", t + s, u.vector());
  auto evaluate = [&](const char* stage, double time, const State& x) {
    try {
      return p.exact(time, x);
    } catch (const DomainExit&) {
      throw DomainExit(stage, time, x.vector());
    }
  };
  const State direct = evaluate("E(t+s)u", t + s, u);
  const State inner = evaluate("E(s)u", s, u);
  if (!p.domain.contains(t, inner)) throw DomainExit("E(t)E(s)u", t, inner.vector());
  const State composed = evaluate("E(t)E(s)u", t, inner);
  return distance(p.norm, composed, direct);
}

std::vector<RegularityViolation> regularity_probe(const Problem& p, const Method& m,
                                                  const RegularFamily& regular, double horizon,
                                                  const CompactCloud& sample,
                                                  std::span<const double> dt_ladder,
                                                  std::size_t t_count) {
  if (horizon < 0.0) throw ContractViolation("probe horizon must be >= 0");
  std::vector<double> times{0.0};
  if (horizon > 0.0 && t_count > 0) {
    for (std::size_t j = 1; j <= t_count; ++j) {
      times.push_back(horizon * static_cast<double>(j) / static_cast<double>(t_count));
    }
  }
  std::vector<double> steps{0.0};
  steps.insert(steps.end(), dt_ladder.begin(), dt_ladder.end());
  const double slack = 1e-12 * std::max(1.0, horizon);

  std::vector<RegularityViolation> out;
  const auto& points = sample.points();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const State& u = points[i];
    for (double t : times) {
      for (double s : times) {
        if (t + s > horizon + slack || !regular.contains(t + s, u)) continue;
        try {
          State image = p.exact(t, u);
          if (!regular.contains(s, image)) {
            out.push_back({RegularityViolation::Kind::exact, t, s, i, std::move(image)});
          }
        } catch (const DomainExit&) {
          out.push_back({RegularityViolation::Kind::exact, t, s, i, u});
        }
      }
      for (double dt : steps) {
        if (t + dt > horizon + slack || !regular.contains(t + dt, u)) continue;
        try {
          State image = step(m, dt, u);
          if (!regular.contains(t, image)) {
            out.push_back({RegularityViolation::Kind::method, t, dt, i, std::move(image)});
          }
        } catch (const BlowupDetected&) {
          out.push_back({RegularityViolation::Kind::method, t, dt, i, u});
        }
      }
    }
  }
  return out;
}

double continuity_probe(const Method& m, const NormSpec& norm_spec, double dt, const State& u,
                        double eps) {
  const State base = step(m, dt, u);
  double worst = 0.0;
  const double steps[] = {dt, dt + eps, std::max(0.0, dt - eps)};
  for (double h : steps) {
    worst = std::max(worst, distance(norm_spec, base, step(m, h, u)));
    for (std::size_t i = 0; i < u.dim(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        State moved = u;
        moved[i] += sign * eps;
        worst = std::max(worst, distance(norm_spec, base, step(m, h, moved)));
      }
    }
  }
  return worst;
}

}  // namespace semigap
