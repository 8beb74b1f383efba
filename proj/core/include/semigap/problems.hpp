#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "semigap/cloud.hpp"
#include "semigap/model.hpp"

namespace semigap {

// ---------------------------------------------------------------------------
// Exact semigroups
// ---------------------------------------------------------------------------

/// Flow of u' = u^2: u / (1 - u t). Throws DomainExit outside X_t.
State riccati_exact(double t, const State& u);

/// Boundary safety margin 1e-6 * (1 + |1/t|) used by the Riccati domain.
double riccati_margin(double t);

/// X_0 = R, X_t = { u < 1/t - margin(t) } for t > 0.
DomainFamily riccati_domain();

/// Flow of u' = sqrt(|u|). Negative states rise to 0 along
/// -(sqrt|u| - t/2)^2 and leave 0 on the growing branch (t - t0)^2 / 4.
State sqrt_flow(double t, const State& u);

/// Heat equation u_t = u_xx on [0, 1] with homogeneous Dirichlet ends,
/// sampled at N interior points. Sine mode k decays by exp(-pi^2 k^2 t).
class HeatSemigroup {
 public:
  explicit HeatSemigroup(std::size_t interior_points);
  State operator()(double t, const State& u) const;
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(n_ + 1); }

 private:
  std::size_t n_;
  std::vector<double> sines_;  // n x n, sin(k pi j dx)
};

State heat_exact(double t, const State& u);

/// Periodic advection u_t + a u_x = 0 on [0, 1) with N nodes, evolved by an
/// exact shift of the trigonometric interpolant. N must be odd so every
/// Fourier mode has a partner and the shift is an exact semigroup.
class AdvectionSemigroup {
 public:
  AdvectionSemigroup(std::size_t nodes, double speed);
  State operator()(double t, const State& u) const;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  double speed_;
  std::vector<double> cos_;  // (n + 1) / 2 modes x n nodes, cos(2 pi k j / n)
  std::vector<double> sin_;
};

// ---------------------------------------------------------------------------
// Methods
// ---------------------------------------------------------------------------

/// u + dt u^2.
Method explicit_euler_riccati();
/// (1 + lambda dt) u componentwise.
Method linear_euler(double lambda, std::size_t dim = 1);
/// Forward-time centred-space heat step on N interior points, dx = 1/(N+1).
Method ftcs_heat(std::size_t interior_points);
/// Lax-Friedrichs on N periodic nodes, dx = 1/N. Returns u exactly at dt = 0.
Method lax_friedrichs_advection(std::size_t nodes, double speed);
/// u + dt sqrt(|u|).
Method sqrt_drift();
/// C_dt = E(dt) of the given problem.
Method exact_step(const Problem& p);

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

struct ProblemParams {
  double lambda = 1.0;
  std::size_t grid_n = 32;
  std::size_t advection_nodes = 33;
  double speed = 1.0;
  double mu = 0.4;       // ftcs top rung: dt0 = mu dx^2
  double courant = 0.8;  // lax-friedrichs top rung: dt0 = courant dx / speed

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  Problem problem;
  std::vector<std::string> methods;
  CloudSpec default_cloud;
  double horizon = 1.0;
  double dt0 = 0.1;
  CapSpec cap;
  double rho_local = 0.1;
  double rho0 = 0.25;
};

struct ProblemCatalog {
  std::vector<CatalogEntry> entries;

  /// nullptr when absent.
  const CatalogEntry* find(std::string_view name) const;
  std::vector<std::string> names() const;
};

/// Built-in problems in a stable order: riccati, linear, heat, advection,
/// sqrt-drift.
ProblemCatalog list_catalog(const ProblemParams& params = {});

/// Builds a method listed for `entry`; throws ContractViolation otherwise.
Method make_method(const CatalogEntry& entry, std::string_view method_name,
                   const ProblemParams& params = {});

}  // namespace semigap
