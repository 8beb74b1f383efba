#include "semigap/problems.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "semigap/errors.hpp"

namespace semigap {

namespace {

void require_dim(const State& u, std::size_t dim, const char* who) {
  if (u.dim() != dim) {
    throw ContractViolation(std::string(who) + " expects dimension " + std::to_string(dim) +
                            ", got " + std::to_string(u.dim()));
  }
}

double sqrt_flow_scalar(double t, double u) {
  if (t == 0.0) return u;
  if (u >= 0.0) {
    const double r = std::sqrt(u) + 0.5 * t;
    return r * r;
  }
  const double w = std::sqrt(-u);
  if (t < 2.0 * w) {
    const double r = w - 0.5 * t;
    return -r * r;
  }
  const double r = 0.5 * (t - 2.0 * w);
  return r * r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact semigroups
// ---------------------------------------------------------------------------

double riccati_margin(double t) { return 1e-6 * (1.0 + std::abs(1.0 / t)); }

DomainFamily riccati_domain() {
  return DomainFamily{[](double t, const State& u) {
                        return t <= 0.0 || u[0] < 1.0 / t - riccati_margin(t);
                      },
                      false};
}

State riccati_exact(double t, const State& u) {
  require_dim(u, 1, "riccati");
  if (t < 0.0) throw ContractViolation("riccati: time must be >= 0");
  if (t == 0.0) return u;
  if (!(u[0] < 1.0 / t - riccati_margin(t))) throw DomainExit("E(t)u", t, u.vector());
  return State{u[0] / (1.0 - u[0] * t)};
}

State sqrt_flow(double t, const State& u) {
  if (t < 0.0) throw ContractViolation("sqrt flow: time must be >= 0");
  std::vector<double> out(u.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sqrt_flow_scalar(t, u[i]);
  return State(std::move(out));
}

HeatSemigroup::HeatSemigroup(std::size_t interior_points)
    : n_(interior_points), sines_(interior_points * interior_points) {
  if (n_ == 0) throw ContractViolation("heat grid needs at least one interior point");
  const double h = std::numbers::pi / static_cast<double>(n_ + 1);
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t j = 0; j < n_; ++j) {
      sines_[k * n_ + j] = std::sin(h * static_cast<double>((k + 1) * (j + 1)));
    }
  }
}

State HeatSemigroup::operator()(double t, const State& u) const {
  require_dim(u, n_, "heat");
  if (t < 0.0) throw ContractViolation("heat: time must be >= 0");
  if (t == 0.0) return u;
  const double scale = 2.0 / static_cast<double>(n_ + 1);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<double> coeff(n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    double c = 0.0;
    for (std::size_t j = 0; j < n_; ++j) c += sines_[k * n_ + j] * u[j];
    const double wave = static_cast<double>(k + 1);
    coeff[k] = scale * c * std::exp(-pi2 * wave * wave * t);
  }
  std::vector<double> out(n_, 0.0);
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t j = 0; j < n_; ++j) out[j] += coeff[k] * sines_[k * n_ + j];
  }
  return State(std::move(out));
}

State heat_exact(double t, const State& u) { return HeatSemigroup(u.dim())(t, u); }

AdvectionSemigroup::AdvectionSemigroup(std::size_t nodes, double speed)
    : n_(nodes), speed_(speed) {
  if (n_ == 0 || n_ % 2 == 0) throw ContractViolation("advection grid needs an odd node count");
  const std::size_t modes = (n_ - 1) / 2 + 1;
  cos_.resize(modes * n_);
  sin_.resize(modes * n_);
  for (std::size_t m = 0; m < modes; ++m) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((m * j) % n_) /
                           static_cast<double>(n_);
      cos_[m * n_ + j] = std::cos(phase);
      sin_[m * n_ + j] = std::sin(phase);
    }
  }
}

State AdvectionSemigroup::operator()(double t, const State& u) const {
  require_dim(u, n_, "advection");
  if (t < 0.0) throw ContractViolation("advection: time must be >= 0");
  if (t == 0.0) return u;
  const std::size_t modes = (n_ - 1) / 2 + 1;
  const double shift = speed_ * t;
  const double inv_n = 1.0 / static_cast<double>(n_);
  std::vector<double> out(n_, 0.0);
  double mean = 0.0;
  for (std::size_t j = 0; j < n_; ++j) mean += u[j];
  mean *= inv_n;
  for (std::size_t j = 0; j < n_; ++j) out[j] = mean;
  for (std::size_t m = 1; m < modes; ++m) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      a += u[j] * cos_[m * n_ + j];
      b += u[j] * sin_[m * n_ + j];
    }
    a *= 2.0 * inv_n;
    b *= 2.0 * inv_n;
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(m) * shift;
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double a_shift = a * c - b * s;
    const double b_shift = a * s + b * c;
    for (std::size_t j = 0; j < n_; ++j) {
      out[j] += a_shift * cos_[m * n_ + j] + b_shift * sin_[m * n_ + j];
    }
  }
  return State(std::move(out));
}

// ---------------------------------------------------------------------------
// Methods
// ---------------------------------------------------------------------------

Method explicit_euler_riccati() {
  return Method{"explicit-euler-riccati", 1,
                [](double dt, const State& u) { return State{u[0] + dt * u[0] * u[0]}; }, false};
}

Method linear_euler(double lambda, std::size_t dim) {
  if (dim == 0) throw ContractViolation("linear-euler needs dimension >= 1");
  return Method{"linear-euler", dim,
                [lambda](double dt, const State& u) { return (1.0 + lambda * dt) * u; }, true};
}

Method ftcs_heat(std::size_t interior_points) {
  if (interior_points == 0) throw ContractViolation("ftcs-heat needs at least one interior point");
  const double dx = 1.0 / static_cast<double>(interior_points + 1);
  const double inv_dx2 = 1.0 / (dx * dx);
  return Method{"ftcs-heat", interior_points,
                [inv_dx2](double dt, const State& u) {
                  const std::size_t n = u.dim();
                  const double mu = dt * inv_dx2;
                  std::vector<double> out(n);
                  for (std::size_t i = 0; i < n; ++i) {
                    const double left = i > 0 ? u[i - 1] : 0.0;
                    const double right = i + 1 < n ? u[i + 1] : 0.0;
                    out[i] = u[i] + mu * (right - 2.0 * u[i] + left);
                  }
                  return State(std::move(out));
                },
                true};
}

Method lax_friedrichs_advection(std::size_t nodes, double speed) {
  if (nodes < 3) throw ContractViolation("lax-friedrichs needs at least three nodes");
  const double dx = 1.0 / static_cast<double>(nodes);
  return Method{"lax-friedrichs-advection", nodes,
                [dx, speed](double dt, const State& u) {
                  if (dt == 0.0) return u;
                  const std::size_t n = u.dim();
                  const double nu = speed * dt / (2.0 * dx);
                  std::vector<double> out(n);
                  for (std::size_t i = 0; i < n; ++i) {
                    const double left = u[(i + n - 1) % n];
                    const double right = u[(i + 1) % n];
                    out[i] = 0.5 * (right + left) - nu * (right - left);
                  }
                  return State(std::move(out));
                },
                true};
}

Method sqrt_drift() {
  return Method{"sqrt-drift", 1,
                [](double dt, const State& u) { return State{u[0] + dt * std::sqrt(std::abs(u[0]))}; },
                false};
}

Method exact_step(const Problem& p) {
  return Method{"exact-step", p.dim, p.exact, p.linear};
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

const CatalogEntry* ProblemCatalog::find(std::string_view name) const {
  for (const CatalogEntry& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<std::string> ProblemCatalog::names() const {
  std::vector<std::string> out;
  for (const CatalogEntry& e : entries) out.push_back(e.name);
  return out;
}

namespace {

CloudSpec grid_cloud(double lower, double upper, std::size_t count) {
  CloudSpec spec;
  spec.generator = CloudGenerator::grid_in_box;
  spec.dim = 1;
  spec.lower = lower;
  spec.upper = upper;
  spec.count = count;
  return spec;
}

CloudSpec ball_cloud(const NormSpec& norm_spec, double radius, std::size_t count) {
  CloudSpec spec;
  spec.generator = CloudGenerator::ball;
  spec.dim = norm_spec.dim;
  spec.radius = radius;
  spec.count = count;
  spec.ball_norm = norm_spec;
  return spec;
}

CatalogEntry riccati_entry() {
  CatalogEntry e;
  e.name = "riccati";
  e.summary = "u' = u^2, finite-time blow-up at t = 1/u";
  const NormSpec sup{NormKind::sup, 1.0, 1};
  e.cap = CapSpec{2.0, 0.0};
  e.problem = Problem{"riccati", 1, riccati_exact, riccati_domain(),
                      sublevel_family(riccati_domain(), sup, e.cap), sup, false};
  e.methods = {"explicit-euler-riccati", "exact-step"};
  e.default_cloud = grid_cloud(-1.0, 0.5, 40);
  e.horizon = 1.0;
  e.dt0 = 0.1;
  e.rho_local = 0.1;
  e.rho0 = 0.25;
  return e;
}

CatalogEntry linear_entry(double lambda) {
  CatalogEntry e;
  e.name = "linear";
  e.summary = "u' = lambda u";
  const NormSpec sup{NormKind::sup, 1.0, 1};
  e.problem = Problem{"linear",
                      1,
                      [lambda](double t, const State& u) {
                        return t == 0.0 ? u : std::exp(lambda * t) * u;
                      },
                      DomainFamily::everything(),
                      whole_domain(DomainFamily::everything()),
                      sup,
                      true};
  e.methods = {"linear-euler", "exact-step"};
  e.default_cloud = grid_cloud(-1.0, 1.0, 41);
  e.horizon = 1.0;
  e.dt0 = 0.1;
  e.rho_local = 0.1;
  e.rho0 = 0.5;
  return e;
}

CatalogEntry heat_entry(std::size_t n, double mu) {
  CatalogEntry e;
  e.name = "heat";
  e.summary = "u_t = u_xx on [0, 1], Dirichlet, N interior points";
  const double dx = 1.0 / static_cast<double>(n + 1);
  const NormSpec l2{NormKind::weighted_l2, dx, n};
  auto semigroup = std::make_shared<HeatSemigroup>(n);
  e.problem = Problem{"heat",
                      n,
                      [semigroup](double t, const State& u) { return (*semigroup)(t, u); },
                      DomainFamily::everything(),
                      whole_domain(DomainFamily::everything()),
                      l2,
                      true};
  e.methods = {"ftcs-heat", "exact-step"};
  e.default_cloud = ball_cloud(l2, 1.0, 32);
  e.horizon = 0.1;
  e.dt0 = mu * dx * dx;
  e.rho_local = 0.5;
  e.rho0 = 1.0;
  return e;
}

CatalogEntry advection_entry(std::size_t nodes, double speed, double courant) {
  CatalogEntry e;
  e.name = "advection";
  e.summary = "u_t + a u_x = 0 on [0, 1), periodic, N nodes";
  const double dx = 1.0 / static_cast<double>(nodes);
  const NormSpec l2{NormKind::weighted_l2, dx, nodes};
  auto semigroup = std::make_shared<AdvectionSemigroup>(nodes, speed);
  e.problem = Problem{"advection",
                      nodes,
                      [semigroup](double t, const State& u) { return (*semigroup)(t, u); },
                      DomainFamily::everything(),
                      whole_domain(DomainFamily::everything()),
                      l2,
                      true};
  e.methods = {"lax-friedrichs-advection", "exact-step"};
  e.default_cloud = ball_cloud(l2, 1.0, 32);
  e.horizon = 0.5;
  e.dt0 = courant * dx / std::abs(speed);
  e.rho_local = 0.5;
  e.rho0 = 1.0;
  return e;
}

CatalogEntry sqrt_entry() {
  CatalogEntry e;
  e.name = "sqrt-drift";
  e.summary = "u' = sqrt(|u|), Hoelder-1/2 at 0, growing branch selected";
  const NormSpec sup{NormKind::sup, 1.0, 1};
  e.problem = Problem{"sqrt-drift", 1, sqrt_flow, DomainFamily::everything(),
                      whole_domain(DomainFamily::everything()), sup, false};
  e.methods = {"sqrt-drift", "exact-step"};
  e.default_cloud = grid_cloud(0.0, 1.0, 513);
  e.horizon = 1.0;
  e.dt0 = 0.1;
  e.rho_local = 0.1;
  e.rho0 = 0.25;
  return e;
}

}  // namespace

ProblemCatalog list_catalog(const ProblemParams& params) {
  ProblemCatalog catalog;
  catalog.entries.push_back(riccati_entry());
  catalog.entries.push_back(linear_entry(params.lambda));
  catalog.entries.push_back(heat_entry(params.grid_n, params.mu));
  catalog.entries.push_back(advection_entry(params.advection_nodes, params.speed, params.courant));
  catalog.entries.push_back(sqrt_entry());
  return catalog;
}

Method make_method(const CatalogEntry& entry, std::string_view method_name,
                   const ProblemParams& params) {
  bool listed = false;
  for (const std::string& m : entry.methods) listed = listed || m == method_name;
  if (!listed) {
    std::string known;
    for (const std::string& m : entry.methods) known += (known.empty() ? "" : ", ") + m;
    throw ContractViolation("method '" + std::string(method_name) + "' is not available for " +
                            entry.name + " (known: " + known + ")");
  }
  if (method_name == "exact-step") return exact_step(entry.problem);
  if (method_name == "explicit-euler-riccati") return explicit_euler_riccati();
  if (method_name == "linear-euler") return linear_euler(params.lambda, entry.problem.dim);
  if (method_name == "ftcs-heat") return ftcs_heat(entry.problem.dim);
  if (method_name == "lax-friedrichs-advection") {
    return lax_friedrichs_advection(entry.problem.dim, params.speed);
  }
  return sqrt_drift();
}

}  // namespace semigap
