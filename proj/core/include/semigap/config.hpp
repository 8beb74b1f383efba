#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "semigap/analysis.hpp"
#include "semigap/cloud.hpp"
#include "semigap/estimators.hpp"
#include "semigap/families.hpp"
#include "semigap/problems.hpp"
#include "semigap/verdicts.hpp"

namespace semigap {

/// One (problem, method) experiment. Unset fields fall back to the catalog
/// entry of `problem`.
///
/// The file is INI: sections [problem], [method], [sampling], [ladders],
/// [tolerances] and [output]. `problem = ...` and `method = ...` may also
/// appear before the first section as shorthands for the two `name` keys.
struct ExperimentConfig {
  std::string problem;
  std::string method;
  ProblemParams params;
  /// Norm override; the problem's own norm when empty.
  std::optional<NormKind> norm;
  CloudSpec cloud;
  CapSpec cap;
  double horizon = 1.0;
  double dt0 = 0.1;
  std::size_t depth = 6;
  std::size_t t_count = 10;
  double rho_local = 0.1;
  double rho0 = 0.25;
  std::size_t rho_depth = 7;
  double theta_factor = 0.5;
  Tolerances tol;
  std::string out_dir = ".";
  std::string format = "json";
  std::uint64_t seed = 42;
  int workers = 1;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigFileError, ConfigParseError or ConfigValidationError.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Same as load_config on in-memory text.
ExperimentConfig parse_config(std::string_view text);

/// Re-validates after command-line or environment overrides.
void validate_config(const ExperimentConfig& config);

/// Resolves the catalog entry, method, norm, guard, cloud and ladders.
EstimatorSetup build_setup(const ExperimentConfig& config);

AnalysisOptions analysis_options(const ExperimentConfig& config);

}  // namespace semigap
