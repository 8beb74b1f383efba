#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace semigap;
using testing::setup_from;

namespace {

std::vector<double> rho_ladder(std::size_t count) { return geometric_ladder(0.25, count - 1); }

ImplicationStatus status_of(const EquivalenceVerdict& v, const std::string& name) {
  for (const Implication& i : v.implications) {
    if (i.name == name) return i.status;
  }
  FAIL("missing implication " << name);
  return ImplicationStatus::inconclusive;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("line fit recovers an exact line") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.rms_residual <= 1e-14);
  const std::vector<double> flat{2.0, 2.0};
  CHECK_THROWS_AS(fit_line(flat, flat), ContractViolation);
}

TEST_CASE("power-law fit recovers synthetic curves") {
  const std::vector<double> rho = rho_ladder(8);
  for (double q : {0.3, 0.5, 1.0}) {
    for (double plateau : {0.0, 0.5, 3.0}) {
      std::vector<double> values;
      for (double r : rho) values.push_back(plateau + 2.0 * std::pow(r, -q));
      const PowerLawFit f = fit_power_law(rho, values);
      CAPTURE(q);
      CAPTURE(plateau);
      REQUIRE(f.valid);
      CHECK(std::abs(f.exponent - q) <= 1e-6);
      CHECK(std::abs(f.plateau - plateau) <= 1e-4 * (1.0 + plateau));
      CHECK(f.amplitude == doctest::Approx(2.0).epsilon(1e-5));
      CHECK(f.rms_residual <= 1e-6);
    }
  }
  const std::vector<double> two{1.0, 0.5};
  CHECK_FALSE(fit_power_law(two, two).valid);
}

TEST_CASE("gap verdicts on synthetic curves") {
  const Tolerances tol;
  const std::vector<double> rho = rho_ladder(7);
  const std::vector<double> flat(7, 2.0);
  CHECK(classify_gap(rho, flat, tol) == GapVerdict::bounded);

  std::vector<double> saturating;
  for (double r : rho) saturating.push_back(3.0 - r);
  CHECK(classify_gap(rho, saturating, tol) == GapVerdict::bounded);

  std::vector<double> power;
  for (double r : rho) power.push_back(1.0 + std::pow(r, -0.5));
  PowerLawFit fit;
  double ratio = 0.0;
  CHECK(classify_gap(rho, power, tol, &fit, &ratio) == GapVerdict::unbounded);
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(ratio == doctest::Approx(power[6] / power[5]));

  // growth that is not a power law
  std::vector<double> erratic{1.0, 4.0, 1.2, 5.0, 1.3, 6.0, 1.4};
  CHECK(classify_gap(rho, erratic, tol) == GapVerdict::inconclusive);

  const std::vector<double> rho3 = rho_ladder(3);
  const std::vector<double> three{1.0, 2.0, 4.0};
  CHECK(classify_gap(rho3, three, tol) == GapVerdict::inconclusive);
  const std::vector<double> short_values{1.0, 2.0};
  CHECK_THROWS_AS(classify_gap(rho3, short_values, tol), ContractViolation);
}

TEST_CASE("gap curve rungs equal standalone distant estimates") {
  const EstimatorSetup s = setup_from("problem = sqrt-drift\n[sampling]\ncount = 129\n");
  const std::vector<double> rho = rho_ladder(6);
  const GapCurve curve = gap_curve(s, rho, Tolerances{});
  REQUIRE(curve.rungs.size() == 6);
  for (const GapRung& rung : curve.rungs) {
    CAPTURE(rung.rho);
    REQUIRE(rung.estimate.has_value());
    CHECK(*rung.estimate == estimate_distant_stability(s, rung.rho));
  }
  CHECK(curve.cloud_fingerprint == s.cloud.fingerprint());
  CHECK(curve.min_pair_distance == doctest::Approx(1.0 / 128.0));
  CHECK_FALSE(curve.resolution_limited);
  CHECK(curve.verdict == GapVerdict::unbounded);
}

TEST_CASE("gap curve marks rungs that no pair reaches") {
  const EstimatorSetup s = setup_from("problem = riccati\n");
  const std::vector<double> rho{4.0, 2.0, 1.0, 0.5, 0.25};
  const GapCurve curve = gap_curve(s, rho, Tolerances{});
  CHECK_FALSE(curve.rungs[0].estimate.has_value());
  CHECK_FALSE(curve.rungs[1].estimate.has_value());
  CHECK(curve.rungs[2].estimate.has_value());
  CHECK(curve.verdict == GapVerdict::inconclusive);
  const std::vector<double> ascending{0.25, 0.5};
  CHECK_THROWS_AS(gap_curve(s, ascending, Tolerances{}), ContractViolation);
}

TEST_CASE("partition identity holds exactly") {
  for (const char* ini : {"problem = riccati\n", "problem = sqrt-drift\n[sampling]\ncount = 65\n",
                          "problem = heat\n[method]\nmu = 0.6\n[ladders]\ndepth = 1\n"}) {
    const EstimatorSetup s = setup_from(ini);
    for (double r : {0.05, 0.1, 0.5}) {
      const PartitionReport p = check_partition_identity(s, r);
      CHECK(p.pass);
      CHECK_FALSE(p.vacuous);
    }
  }
}

TEST_CASE("partition identity on degenerate clouds") {
  const PartitionReport single =
      check_partition_identity(setup_from("problem = riccati\n[sampling]\npoints = 0.2\n"), 0.1);
  CHECK(single.vacuous);
  CHECK(single.pass);
  const PartitionReport dup =
      check_partition_identity(setup_from("problem = riccati\n[sampling]\npoints = 0.1; 0.1; 0.3\n"), 0.1);
  CHECK_FALSE(dup.local.has_value());
  REQUIRE(dup.distant.has_value());
  CHECK(dup.full == dup.distant);
  CHECK(dup.pass);
  CHECK_THROWS_AS(check_partition_identity(setup_from("problem = riccati\n"), 0.0), ContractViolation);
}

TEST_CASE("convergence => distant rule table") {
  using SV = StabilityVerdict;
  using CV = ConvergenceVerdict;
  using IS = ImplicationStatus;
  const struct {
    SV distant;
    CV convergence;
    IS expected;
  } table[] = {
      {SV::stable, CV::convergent, IS::vacuous},       {SV::stable, CV::divergent, IS::vacuous},
      {SV::stable, CV::inconclusive, IS::vacuous},     {SV::unstable, CV::convergent, IS::violated},
      {SV::unstable, CV::divergent, IS::holds},        {SV::unstable, CV::inconclusive, IS::holds},
      {SV::inconclusive, CV::convergent, IS::inconclusive},
      {SV::inconclusive, CV::divergent, IS::inconclusive},
      {SV::inconclusive, CV::inconclusive, IS::inconclusive},
  };
  for (const auto& row : table) {
    CHECK(check_convergence_implies_distant(row.distant, row.convergence).status == row.expected);
  }
}

TEST_CASE("convergence => distant on FTCS beyond the CFL limit") {
  const EstimatorSetup s = setup_from("problem = heat\n[method]\nmu = 0.6\n[ladders]\ndepth = 2\n");
  const DivergenceCheck d = check_convergence_implies_distant(s, 1.0, 0.5, Tolerances{});
  CHECK(d.distant == StabilityVerdict::unstable);
  CHECK(d.convergence == ConvergenceVerdict::divergent);
  CHECK(d.status == ImplicationStatus::holds);
}

TEST_CASE("bound check is gated on its hypotheses") {
  const Tolerances tol;
  const EstimatorSetup heat = setup_from("problem = heat\n[method]\nmu = 0.6\n[ladders]\ndepth = 2\n");
  const StabilityEstimate local = estimate_local_stability(heat, 0.5);
  const BoundCheckReport gated =
      check_convergence_bound(heat, local, classify_stability(local, tol), consistency_report(heat, tol),
                              convergence_report(heat, 0.5, tol), tol);
  CHECK(gated.status == ImplicationStatus::hypothesis_not_met);

  const EstimatorSetup ric = setup_from("problem = riccati\n");
  const StabilityEstimate rl = estimate_local_stability(ric, 0.1);
  const ConsistencyReport rc = consistency_report(ric, tol);
  const ConvergenceReport rv = convergence_report(ric, 0.5, tol);
  const BoundCheckReport b = check_convergence_bound(ric, rl, StabilityVerdict::stable, rc, rv, tol);
  CHECK(b.status == ImplicationStatus::holds);
  REQUIRE(b.rungs.size() == ric.dt_ladder.size());
  for (const BoundRung& r : b.rungs) {
    CHECK(r.error <= r.bound);
    CHECK(r.margin >= 0.0);
  }

  const EstimatorSetup shorter = setup_from("problem = riccati\n[ladders]\ndepth = 2\n");
  CHECK_THROWS_AS(check_convergence_bound(shorter, rl, StabilityVerdict::stable, rc, rv, tol),
                  ContractViolation);
}

TEST_CASE("equivalence report: Euler on Riccati") {
  const ExperimentConfig c = parse_config("problem = riccati\n");
  const EquivalenceVerdict v = equivalence_report(build_setup(c), analysis_options(c));
  CHECK(v.consistency_verdict == ConsistencyVerdict::consistent);
  CHECK(v.local_verdict == StabilityVerdict::stable);
  CHECK(v.distant_verdict == StabilityVerdict::stable);
  CHECK(v.full_verdict == StabilityVerdict::stable);
  CHECK(v.gap.verdict == GapVerdict::bounded);
  CHECK(v.convergence_verdict == ConvergenceVerdict::convergent);
  CHECK(status_of(v, "local => convergence") == ImplicationStatus::holds);
  CHECK(status_of(v, "convergence => distant") == ImplicationStatus::vacuous);
  CHECK(status_of(v, "distant + (C) => local") == ImplicationStatus::holds);
  CHECK(status_of(v, "stable <=> convergent") == ImplicationStatus::holds);
  CHECK(v.partition.pass);
  CHECK_FALSE(v.any_violation());
  for (const Implication& i : v.implications) CHECK_FALSE(i.basis.empty());
}

TEST_CASE("equivalence report: sqrt drift is distantly but not locally stable") {
  const ExperimentConfig c = parse_config("problem = sqrt-drift\n");
  const EquivalenceVerdict v = equivalence_report(build_setup(c), analysis_options(c));
  CHECK(v.distant_verdict == StabilityVerdict::stable);
  CHECK(v.local_verdict == StabilityVerdict::unstable);
  CHECK(v.full_verdict == StabilityVerdict::unstable);
  CHECK(v.gap.verdict == GapVerdict::unbounded);
  CHECK(status_of(v, "local => convergence") == ImplicationStatus::hypothesis_not_met);
  CHECK(status_of(v, "distant + (C) => local") == ImplicationStatus::hypothesis_not_met);
  CHECK(status_of(v, "stable <=> convergent") == ImplicationStatus::hypothesis_not_met);
  CHECK_FALSE(v.any_violation());
}

TEST_CASE("equivalence report is a pure function of its inputs") {
  const ExperimentConfig c = parse_config("problem = heat\n[ladders]\ndepth = 2\nrho_depth = 4\n");
  EstimatorSetup s = build_setup(c);
  const EquivalenceVerdict a = equivalence_report(s, analysis_options(c));
  const EquivalenceVerdict b = equivalence_report(s, analysis_options(c));
  CHECK(a == b);
  s.workers = 3;
  CHECK(equivalence_report(s, analysis_options(c)) == a);
}

TEST_CASE("implication statuses print") {
  CHECK(to_string(ImplicationStatus::hypothesis_not_met) == "hypothesis_not_met");
  CHECK(to_string(ImplicationStatus::vacuous) == "vacuous");
  CHECK(to_string(GapVerdict::unbounded) == "unbounded");
  CHECK(to_string(StabilityKind::distant) == "distant");
}

}  // TEST_SUITE
