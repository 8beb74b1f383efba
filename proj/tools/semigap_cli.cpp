#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "semigap/semigap.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kOperationalError = 1;

std::optional<std::uint64_t> env_unsigned(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw semigap::ConfigValidationError(name, std::string(name) + " must be a non-negative integer");
  }
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

semigap::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o) {
  semigap::ExperimentConfig config = semigap::load_config(path);
  std::optional<std::uint64_t> seed = env_unsigned("SEMIGAP_SEED");
  if (o.seed) seed = o.seed;
  if (seed) {
    config.seed = *seed;
    config.cloud.seed = *seed;
  }
  if (const auto w = env_unsigned("SEMIGAP_WORKERS")) config.workers = static_cast<int>(*w);
  if (o.workers) config.workers = *o.workers;
  if (o.out) config.out_dir = *o.out;
  if (o.format) config.format = *o.format;
  semigap::validate_config(config);
  return config;
}

void print_catalog() {
  const semigap::ProblemCatalog catalog = semigap::list_catalog();
  for (const semigap::CatalogEntry& e : catalog.entries) {
    std::cout << e.name << "  (dim " << e.problem.dim << ", T = " << e.horizon
              << ", dt0 = " << e.dt0 << ")\n  " << e.summary << "\n  methods:";
    for (const std::string& m : e.methods) std::cout << ' ' << m;
    std::cout << "\n  regular family: " << e.problem.regular.description << "\n";
  }
}

void print_summary(const semigap::ReportDocument& doc) {
  const semigap::EquivalenceVerdict& v = doc.verdict;
  std::cout << "problem      " << doc.config.problem << " / " << doc.config.method << "\n"
            << "consistency  " << semigap::to_string(v.consistency_verdict) << "\n"
            << "local        " << semigap::to_string(v.local_verdict) << "\n"
            << "distant      " << semigap::to_string(v.distant_verdict) << "\n"
            << "stability    " << semigap::to_string(v.full_verdict) << "\n"
            << "gap          " << semigap::to_string(v.gap.verdict) << "\n"
            << "convergence  " << semigap::to_string(v.convergence_verdict) << "\n";
  for (const semigap::Implication& i : v.implications) {
    std::cout << "  " << i.name << ": " << semigap::to_string(i.status) << "\n";
  }
  for (const std::string& w : v.warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability, consistency and convergence estimates for one-step methods"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Print the built-in problems and methods");

  std::string run_config;
  Overrides run_overrides;
  auto* run = app.add_subcommand("run", "Run the full analysis for one config");
  run->add_option("--config", run_config, "Experiment config (INI)")->required();
  run->add_option("--out", run_overrides.out, "Output directory");
  run->add_option("--format", run_overrides.format, "json or csv-bundle")
      ->check(CLI::IsMember({"json", "csv-bundle"}));
  run->add_option("--seed", run_overrides.seed, "Cloud seed (overrides SEMIGAP_SEED)");
  run->add_option("--workers", run_overrides.workers, "Worker threads (overrides SEMIGAP_WORKERS)")
      ->check(CLI::PositiveNumber);

  std::string gap_config;
  Overrides gap_overrides;
  auto* gap = app.add_subcommand("gap", "Compute the gap curve only");
  gap->add_option("--config", gap_config, "Experiment config (INI)")->required();
  gap->add_option("--seed", gap_overrides.seed, "Cloud seed (overrides SEMIGAP_SEED)");
  gap->add_option("--workers", gap_overrides.workers, "Worker threads (overrides SEMIGAP_WORKERS)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kOperationalError;
  }

  try {
    if (list->parsed()) {
      print_catalog();
      return kOk;
    }
    if (run->parsed()) {
      const semigap::ExperimentConfig config = load_with_overrides(run_config, run_overrides);
      const semigap::ReportDocument doc = semigap::run_experiment(config);
      for (const auto& path : semigap::emit(doc, config.format, config.out_dir)) {
        std::cout << "wrote " << path.string() << "\n";
      }
      print_summary(doc);
      return doc.exit_code;
    }
    if (gap->parsed()) {
      const semigap::ExperimentConfig config = load_with_overrides(gap_config, gap_overrides);
      const semigap::GapCurve curve = semigap::run_gap(config);
      std::cout << semigap::gap_curve_csv(curve);
      std::cout << "verdict " << semigap::to_string(curve.verdict) << ", exponent "
                << curve.fit.exponent << ", ratio test " << curve.ratio_test << "\n";
      return kOk;
    }
  } catch (const semigap::ConfigValidationError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return kOperationalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOperationalError;
  }
  return kOperationalError;
}
