#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "semigap/semigap.hpp"

using namespace semigap;

namespace {

NormSpec spec(NormKind kind, std::size_t dim, double weight = 1.0) { return NormSpec{kind, weight, dim}; }

State random_state(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> unit(-10.0, 10.0);
  std::vector<double> x(dim);
  for (double& v : x) v = unit(rng);
  return State(std::move(x));
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("norms of small vectors") {
  const State u{3.0, -4.0};
  CHECK(norm(spec(NormKind::sup, 2), u) == 4.0);
  CHECK(norm(spec(NormKind::euclidean, 2), u) == 5.0);
  CHECK(norm(spec(NormKind::l1, 2), u) == 7.0);
  // sqrt(0.25 * 25)
  CHECK(norm(spec(NormKind::weighted_l2, 2, 0.25), u) == 2.5);
  for (NormKind k : {NormKind::sup, NormKind::euclidean, NormKind::l1, NormKind::weighted_l2}) {
    CHECK(norm(spec(k, 2, 0.5), State::zeros(2)) == 0.0);
  }
}

TEST_CASE("norm rejects a dimension mismatch") {
  CHECK_THROWS_AS(norm(spec(NormKind::sup, 3), State{1.0, 2.0}), ContractViolation);
  CHECK_THROWS_AS(distance(spec(NormKind::sup, 2), State{1.0, 2.0}, State{1.0}), ContractViolation);
}

TEST_CASE("norm axioms on random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scalar(-5.0, 5.0);
  for (NormKind k : {NormKind::sup, NormKind::euclidean, NormKind::l1, NormKind::weighted_l2}) {
    const NormSpec s = spec(k, 6, 1.0 / 7.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const State u = random_state(rng, 6);
      const State v = random_state(rng, 6);
      const double a = scalar(rng);
      const double nu = norm(s, u);
      CHECK(nu >= 0.0);
      CHECK(norm(s, a * u) == doctest::Approx(std::abs(a) * nu).epsilon(1e-12));
      CHECK(norm(s, u + v) <= (nu + norm(s, v)) * (1.0 + 1e-12));
      CHECK(distance(s, u, v) == doctest::Approx(norm(s, v - u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("norm kinds parse and print") {
  for (NormKind k : {NormKind::sup, NormKind::euclidean, NormKind::l1, NormKind::weighted_l2}) {
    CHECK(parse_norm_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_norm_kind("l7"), ContractViolation);
}

TEST_CASE("grid cloud spans the box with exact endpoints") {
  CloudSpec s;
  s.lower = -1.0;
  s.upper = 0.5;
  s.count = 40;
  const CompactCloud c(s);
  REQUIRE(c.size() == 40);
  CHECK(c.points().front()[0] == -1.0);
  CHECK(c.points().back()[0] == 0.5);
  CHECK(c.satisfies_constraint());
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c.points()[i][0] > c.points()[i - 1][0]);
}

TEST_CASE("two-dimensional grid has count^dim points") {
  CloudSpec s;
  s.dim = 2;
  s.count = 5;
  CHECK(CompactCloud(s).size() == 25);
}

TEST_CASE("ball cloud is reproducible from its seed and stays in the ball") {
  CloudSpec s;
  s.generator = CloudGenerator::ball;
  s.dim = 8;
  s.count = 50;
  s.radius = 1.5;
  s.ball_norm = NormSpec{NormKind::weighted_l2, 0.125, 8};
  s.seed = 1234;
  const CompactCloud a(s);
  const CompactCloud b(s);
  REQUIRE(a.size() == 50);
  CHECK(a.fingerprint() == b.fingerprint());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::memcmp(a.points()[i].vector().data(), b.points()[i].vector().data(),
                      8 * sizeof(double)) == 0);
    CHECK(norm(s.ball_norm, a.points()[i]) <= 1.5 * (1.0 + 1e-12));
  }
  CHECK(a.satisfies_constraint());
  s.seed = 1235;
  CHECK(CompactCloud(s).fingerprint() != a.fingerprint());
}

TEST_CASE("clouds reject degenerate specs") {
  CloudSpec s;
  s.dim = 0;
  CHECK_THROWS_AS(CompactCloud{s}, ContractViolation);
  s.dim = 1;
  s.count = 0;
  CHECK_THROWS_AS(CompactCloud{s}, ContractViolation);
  s.count = 3;
  s.lower = 2.0;
  CHECK_THROWS_AS(CompactCloud{s}, ContractViolation);
  CHECK_THROWS_AS(CompactCloud::from_points({}), ContractViolation);
  CHECK_THROWS_AS(parse_cloud_generator("sphere"), ContractViolation);
}

TEST_CASE("explicit cloud keeps its points") {
  const CompactCloud c = CompactCloud::from_points({State{0.0}, State{0.25}});
  CHECK(c.size() == 2);
  CHECK(c.spec().generator == CloudGenerator::explicit_list);
  CHECK(c.points()[1][0] == 0.25);
}

TEST_CASE("sublevel family intersects the domain with the cap") {
  const RegularFamily f = sublevel_family(riccati_domain(), NormSpec{}, CapSpec{2.0, 0.0});
  CHECK(f.contains(0.0, State{-2.0}));
  CHECK_FALSE(f.contains(0.0, State{2.5}));
  CHECK(f.contains(0.4, State{1.9}));
  CHECK_FALSE(f.contains(1.0, State{1.0}));
  CHECK(f.description.find("2") != std::string::npos);

  const RegularFamily affine = sublevel_family(DomainFamily::everything(), NormSpec{}, CapSpec{1.0, 2.0});
  CHECK_FALSE(affine.time_invariant);
  CHECK(affine.contains(1.0, State{3.0}));
  CHECK_FALSE(affine.contains(0.5, State{3.0}));

  const RegularFamily all = whole_domain(DomainFamily::everything());
  CHECK(all.time_invariant);
  CHECK(all.contains(5.0, State{1e300}));
}

TEST_CASE("semigroup law residuals") {
  const Problem riccati = list_catalog().find("riccati")->problem;
  CHECK(semigroup_law_residual(riccati, 0.0, 0.0, State{0.5}) == 0.0);
  CHECK(semigroup_law_residual(riccati, 0.5, 0.25, State{0.5}) <= 1e-12);

  const Problem heat = list_catalog().find("heat")->problem;
  std::vector<double> mode(heat.dim);
  for (std::size_t j = 0; j < heat.dim; ++j) {
    mode[j] = std::sin(3.0 * M_PI * static_cast<double>(j + 1) / static_cast<double>(heat.dim + 1));
  }
  CHECK(semigroup_law_residual(heat, 0.1, 0.1, State(mode)) <= 1e-10);
}

TEST_CASE("semigroup law names the evaluation that left the domain") {
  const Problem riccati = list_catalog().find("riccati")->problem;
  try {
    semigroup_law_residual(riccati, 0.5, 0.5, State{2.0});
    FAIL("expected DomainExit");
  } catch (const DomainExit& e) {
    CHECK(e.stage() == "u");
    CHECK(e.time() == 1.0);
    CHECK(e.state() == std::vector<double>{2.0});
  }
}

TEST_CASE("regularity probe on the capped Riccati family") {
  const ProblemCatalog catalog = list_catalog();
  const CatalogEntry& e = *catalog.find("riccati");
  const CompactCloud sample(e.default_cloud);
  const auto ladder = geometric_ladder(0.1, 3);
  const Method exact = make_method(e, "exact-step");
  CHECK(regularity_probe(e.problem, exact, e.problem.regular, 1.0, sample, ladder).empty());
  CHECK(regularity_probe(e.problem, exact, e.problem.regular, 0.0, sample, ladder).empty());
  const Method euler = make_method(e, "explicit-euler-riccati");
  CHECK(regularity_probe(e.problem, euler, e.problem.regular, 1.0, sample, ladder).empty());
}

TEST_CASE("regularity probe flags a family that is not forward invariant") {
  const ProblemCatalog catalog = list_catalog();
  const CatalogEntry& e = *catalog.find("riccati");
  const DomainFamily domain = riccati_domain();
  const RegularFamily broken{[domain](double t, const State& u) {
                               return u[0] <= -0.5 && domain.contains(t, u);
                             },
                             "{u <= -0.5}", false};
  const CompactCloud sample(e.default_cloud);
  const auto ladder = geometric_ladder(0.1, 2);
  const auto violations =
      regularity_probe(e.problem, make_method(e, "exact-step"), broken, 1.0, sample, ladder);
  REQUIRE_FALSE(violations.empty());
  const RegularityViolation& v = violations.front();
  CHECK(v.kind == RegularityViolation::Kind::exact);
  CHECK(v.image[0] > -0.5);
}

TEST_CASE("continuity probe is small for smooth methods") {
  const Method euler = explicit_euler_riccati();
  CHECK(continuity_probe(euler, NormSpec{}, 0.1, State{0.5}, 1e-8) < 1e-7);
  CHECK(continuity_probe(euler, NormSpec{}, 0.0, State{0.5}, 1e-8) < 1e-7);
}

TEST_CASE("Lax-Friedrichs jumps at dt = 0") {
  // C_0 = id is imposed by hand; any dt > 0 averages neighbours.
  const Method lf = lax_friedrichs_advection(5, 1.0);
  const State spike{0.0, 0.0, 1.0, 0.0, 0.0};
  const NormSpec sup{NormKind::sup, 1.0, 5};
  CHECK(step(lf, 0.0, spike) == spike);
  CHECK(continuity_probe(lf, sup, 0.0, spike, 1e-9) > 0.9);
}

TEST_CASE("step enforces its contract") {
  const Method euler = explicit_euler_riccati();
  CHECK_THROWS_AS(step(euler, -0.1, State{1.0}), ContractViolation);
  CHECK_THROWS_AS(step(euler, 0.1, State{1.0, 2.0}), ContractViolation);
  CHECK_THROWS_AS(step(euler, 1.0, State{1e200}), BlowupDetected);
}

}  // TEST_SUITE
