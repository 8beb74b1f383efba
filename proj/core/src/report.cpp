#include "semigap/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "json.hpp"

#include "semigap/errors.hpp"

namespace nlohmann {

template <class T>
struct adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};

template <>
struct adl_serializer<semigap::State> {
  static void to_json(json& j, const semigap::State& s) { j = s.vector(); }
  static void from_json(const json& j, semigap::State& s) {
    s = semigap::State(j.get<std::vector<double>>());
  }
};

}  // namespace nlohmann

namespace semigap {

using nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(NormKind, {{NormKind::sup, "sup"},
                                        {NormKind::euclidean, "euclidean"},
                                        {NormKind::l1, "l1"},
                                        {NormKind::weighted_l2, "weighted-l2"}})
NLOHMANN_JSON_SERIALIZE_ENUM(CloudGenerator, {{CloudGenerator::grid_in_box, "grid-in-box"},
                                              {CloudGenerator::ball, "ball"},
                                              {CloudGenerator::explicit_list, "explicit-list"}})
NLOHMANN_JSON_SERIALIZE_ENUM(StabilityKind, {{StabilityKind::local, "local"},
                                             {StabilityKind::distant, "distant"},
                                             {StabilityKind::full, "full"}})
NLOHMANN_JSON_SERIALIZE_ENUM(StabilityVerdict, {{StabilityVerdict::stable, "stable"},
                                                {StabilityVerdict::unstable, "unstable"},
                                                {StabilityVerdict::inconclusive, "inconclusive"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ConsistencyVerdict,
                             {{ConsistencyVerdict::consistent, "consistent"},
                              {ConsistencyVerdict::inconsistent, "inconsistent"},
                              {ConsistencyVerdict::inconclusive, "inconclusive"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ConvergenceVerdict,
                             {{ConvergenceVerdict::convergent, "convergent"},
                              {ConvergenceVerdict::divergent, "divergent"},
                              {ConvergenceVerdict::inconclusive, "inconclusive"}})
NLOHMANN_JSON_SERIALIZE_ENUM(GapVerdict, {{GapVerdict::bounded, "bounded"},
                                          {GapVerdict::unbounded, "unbounded"},
                                          {GapVerdict::inconclusive, "inconclusive"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ImplicationStatus,
                             {{ImplicationStatus::holds, "holds"},
                              {ImplicationStatus::vacuous, "vacuous"},
                              {ImplicationStatus::hypothesis_not_met, "hypothesis_not_met"},
                              {ImplicationStatus::violated, "violated"},
                              {ImplicationStatus::inconclusive, "inconclusive"}})

namespace {

/// JSON has no infinity; unbounded values travel as the string "inf".
json extended_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double read_extended_number(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw json::type_error::create(302, "expected a number or \"inf\"", &j);
  }
  return j.get<double>();
}

}  // namespace

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NormSpec, kind, weight, dim)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CloudSpec, generator, dim, lower, upper, count, radius,
                                   ball_norm, seed, points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Tolerances, consistency_tol, convergence_tol, growth_tol,
                                   gap_tau, q_min, fit_residual_max, slack, zero_tol,
                                   divergence_factor, min_pairs)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ProblemParams, lambda, grid_n, advection_nodes, speed, mu,
                                   courant)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StabilityWitness, u, v, u_index, v_index, n, dt, dt_index)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StabilityEstimate, kind, constant, threshold, witness,
                                   horizon, dt_ladder, pairs_evaluated, skipped_pairs,
                                   duplicate_pairs, evaluations, skipped_evaluations,
                                   growth_factor, growth_profile)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DefectSample, dt, defect, t, u, skipped)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConsistencyReport, defects, verdict, fit_order)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ErrorSample, dt, sup_error, t, n, u, max_mismatch, skipped)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConvergenceReport, errors, theta_factor, verdict, plateau,
                                   floor)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ContinuityModulus, deltas, omegas)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PowerLawFit, plateau, amplitude, exponent, rms_residual, valid)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GapRung, rho, estimate)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PartitionReport, r, local, distant, full, pass, vacuous)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoundRung, dt, error, defect, modulus_term, bound, margin,
                                   holds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoundCheckReport, status, local_constant, slack, rungs, note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DivergenceCheck, status, distant, convergence, note)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Implication, name, basis, status, evidence)

void to_json(json& j, const CapSpec& c) {
  j = json{{"base", extended_number(c.base)}, {"slope", c.slope}};
}

void from_json(const json& j, CapSpec& c) {
  c.base = read_extended_number(j.at("base"));
  c.slope = j.at("slope").get<double>();
}

void to_json(json& j, const GapCurve& g) {
  j = json{{"rungs", g.rungs},
           {"fit", g.fit},
           {"ratio_test", extended_number(g.ratio_test)},
           {"verdict", g.verdict},
           {"regular_description", g.regular_description},
           {"horizon", g.horizon},
           {"cloud_fingerprint", g.cloud_fingerprint},
           {"min_pair_distance", g.min_pair_distance},
           {"resolution_limited", g.resolution_limited}};
}

void from_json(const json& j, GapCurve& g) {
  j.at("rungs").get_to(g.rungs);
  j.at("fit").get_to(g.fit);
  g.ratio_test = read_extended_number(j.at("ratio_test"));
  j.at("verdict").get_to(g.verdict);
  j.at("regular_description").get_to(g.regular_description);
  j.at("horizon").get_to(g.horizon);
  j.at("cloud_fingerprint").get_to(g.cloud_fingerprint);
  j.at("min_pair_distance").get_to(g.min_pair_distance);
  j.at("resolution_limited").get_to(g.resolution_limited);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EquivalenceVerdict, consistency, consistency_verdict, local,
                                   local_verdict, distant, distant_verdict, full, full_verdict,
                                   gap, convergence, convergence_verdict, modulus, bound,
                                   divergence, partition, implications, warnings)

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"problem", c.problem},     {"method", c.method},
           {"params", c.params},       {"norm", c.norm},
           {"cloud", c.cloud},         {"cap", c.cap},
           {"T", c.horizon},           {"dt0", c.dt0},
           {"depth", c.depth},         {"t_count", c.t_count},
           {"rho_local", c.rho_local}, {"rho0", c.rho0},
           {"rho_depth", c.rho_depth}, {"theta_factor", c.theta_factor},
           {"tolerances", c.tol},      {"seed", c.seed}};
}

void from_json(const json& j, ExperimentConfig& c) {
  c = ExperimentConfig{};
  j.at("problem").get_to(c.problem);
  j.at("method").get_to(c.method);
  j.at("params").get_to(c.params);
  j.at("norm").get_to(c.norm);
  j.at("cloud").get_to(c.cloud);
  j.at("cap").get_to(c.cap);
  j.at("T").get_to(c.horizon);
  j.at("dt0").get_to(c.dt0);
  j.at("depth").get_to(c.depth);
  j.at("t_count").get_to(c.t_count);
  j.at("rho_local").get_to(c.rho_local);
  j.at("rho0").get_to(c.rho0);
  j.at("rho_depth").get_to(c.rho_depth);
  j.at("theta_factor").get_to(c.theta_factor);
  j.at("tolerances").get_to(c.tol);
  j.at("seed").get_to(c.seed);
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportDocument, schema_version, config, regular_description,
                                   cloud_fingerprint, cloud_size, verdict, tables, exit_code)

// ---------------------------------------------------------------------------

std::string format_csv_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

namespace {

constexpr const char* kEol = "\r\n";

}  // namespace

std::string gap_curve_csv(const GapCurve& curve) {
  std::string out = std::string("rho,L2estimate") + kEol;
  for (const GapRung& r : curve.rungs) {
    out += format_csv_number(r.rho) + ",";
    if (r.estimate) out += format_csv_number(r.estimate->constant);
    out += kEol;
  }
  return out;
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = std::string("dt,sup_error") + kEol;
  for (const ErrorSample& e : report.errors) {
    out += format_csv_number(e.dt) + "," + format_csv_number(e.sup_error) + kEol;
  }
  return out;
}

std::string consistency_csv(const ConsistencyReport& report) {
  std::string out = std::string("dt,defect") + kEol;
  for (const DefectSample& d : report.defects) {
    out += format_csv_number(d.dt) + "," + format_csv_number(d.defect) + kEol;
  }
  return out;
}

ReportDocument run_experiment(const ExperimentConfig& config) {
  const EstimatorSetup setup = build_setup(config);
  ReportDocument doc;
  doc.config = config;
  doc.config.workers = ExperimentConfig{}.workers;
  doc.config.out_dir = ExperimentConfig{}.out_dir;
  doc.config.format = ExperimentConfig{}.format;
  doc.regular_description = setup.guard.description;
  doc.cloud_fingerprint = setup.cloud.fingerprint();
  doc.cloud_size = setup.cloud.size();
  doc.verdict = equivalence_report(setup, analysis_options(config));
  doc.tables["gap_curve.csv"] = gap_curve_csv(doc.verdict.gap);
  doc.tables["convergence.csv"] =
      doc.verdict.convergence ? convergence_csv(*doc.verdict.convergence) : convergence_csv({});
  doc.tables["consistency.csv"] =
      doc.verdict.consistency ? consistency_csv(*doc.verdict.consistency) : consistency_csv({});
  doc.exit_code = doc.verdict.any_violation() ? 2 : 0;
  return doc;
}

GapCurve run_gap(const ExperimentConfig& config) {
  const EstimatorSetup setup = build_setup(config);
  const AnalysisOptions options = analysis_options(config);
  const std::vector<double> rho = geometric_ladder(options.rho0, options.rho_depth);
  return gap_curve(setup, rho, options.tol);
}

std::string to_json_text(const ReportDocument& report) {
  return json(report).dump(2) + "\n";
}

ReportDocument report_from_json_text(std::string_view text) {
  try {
    return json::parse(text).get<ReportDocument>();
  } catch (const json::exception& e) {
    throw ConfigParseError(std::string("malformed report: ") + e.what());
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit(const ReportDocument& report, std::string_view format,
                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == "json") {
    written.push_back(dir / "report.json");
    write_file(written.back(), to_json_text(report));
  } else if (format == "csv-bundle") {
    for (const char* name : {"gap_curve.csv", "convergence.csv", "consistency.csv"}) {
      written.push_back(dir / name);
      write_file(written.back(), report.tables.at(name));
    }
  } else {
    throw ContractViolation("unknown output format '" + std::string(format) + "'");
  }
  return written;
}

}  // namespace semigap
