#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "semigap/analysis.hpp"
#include "semigap/config.hpp"

namespace semigap {

inline constexpr int kSchemaVersion = 1;

/// Everything one `run` produces. The config echo leaves out the worker
/// count and the output settings, so reports of the same experiment compare
/// equal byte-for-byte.
struct ReportDocument {
  int schema_version = kSchemaVersion;
  ExperimentConfig config;
  std::string regular_description;
  std::uint64_t cloud_fingerprint = 0;
  std::size_t cloud_size = 0;
  EquivalenceVerdict verdict;
  /// CSV payloads keyed by file name.
  std::map<std::string, std::string> tables;
  /// 0 when no implication is violated, 2 otherwise.
  int exit_code = 0;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

ReportDocument run_experiment(const ExperimentConfig& config);

/// Gap curve only, on the configured rho ladder.
GapCurve run_gap(const ExperimentConfig& config);

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_csv_number(double x);

std::string gap_curve_csv(const GapCurve& curve);
std::string convergence_csv(const ConvergenceReport& report);
std::string consistency_csv(const ConsistencyReport& report);

std::string to_json_text(const ReportDocument& report);
/// Throws ConfigParseError on malformed input.
ReportDocument report_from_json_text(std::string_view text);

/// Writes report.json ("json") or gap_curve.csv, convergence.csv and
/// consistency.csv ("csv-bundle") into `dir`, creating it if needed.
/// Returns the written paths; throws Error naming the path on I/O failure.
std::vector<std::filesystem::path> emit(const ReportDocument& report, std::string_view format,
                                        const std::filesystem::path& dir);

}  // namespace semigap
