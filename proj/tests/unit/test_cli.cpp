#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

using namespace semigap;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("semigap_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SEMIGAP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string validation_key(const std::string& ini) {
  try {
    parse_config(ini);
  } catch (const ConfigValidationError& e) {
    return e.key();
  }
  return "<none>";
}

std::vector<std::string> split_csv_fields(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) out.push_back(cell);
  }
  return out;
}

void collect_numbers(const nlohmann::json& j, std::vector<double>& out) {
  if (j.is_number()) out.push_back(j.get<double>());
  if (j.is_structured()) {
    for (const auto& child : j) collect_numbers(child, out);
  }
}

const char* kSmallRiccati =
    "problem = riccati\n[sampling]\ncount = 16\n[ladders]\ndepth = 3\nrho_depth = 4\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config falls back to catalog defaults") {
  const ExperimentConfig c = parse_config("problem = riccati\n");
  CHECK(c.method == "explicit-euler-riccati");
  CHECK(c.horizon == 1.0);
  CHECK(c.dt0 == 0.1);
  CHECK(c.depth == 6);
  CHECK(c.seed == 42);
  CHECK(c.rho_local == 0.1);
  CHECK(c.rho0 == 0.25);
  CHECK(c.rho_depth == 7);
  CHECK(c.cap.base == 2.0);
  CHECK(c.cloud.count == 40);
  CHECK(c.format == "json");
  CHECK(c.tol == Tolerances{});
}

TEST_CASE("config sections override the defaults") {
  const ExperimentConfig c = parse_config(
      "[problem]\nname = \"heat\"\nT = 0.05\ngrid_n = 16\n[method]\nmu = 0.45\n"
      "[sampling]\nnorm = sup\ncount = 20\nseed = 9\n[tolerances]\nslack = 3\n"
      "[output]\nformat = csv-bundle\n");
  CHECK(c.problem == "heat");
  CHECK(c.method == "ftcs-heat");
  CHECK(c.horizon == 0.05);
  CHECK(c.params.grid_n == 16);
  CHECK(c.dt0 == doctest::Approx(0.45 / 289.0));
  CHECK(c.norm == NormKind::sup);
  CHECK(c.cloud.seed == 9);
  CHECK(c.cloud.dim == 16);
  CHECK(c.tol.slack == 3.0);
  CHECK(c.format == "csv-bundle");
  const EstimatorSetup s = build_setup(c);
  CHECK(s.norm().kind == NormKind::sup);
  CHECK(s.cloud.size() == 20);
  CHECK(s.dt_ladder.size() == 7);
  CHECK(s.t_grid.back() == 0.05);
}

TEST_CASE("validation errors name the offending key") {
  CHECK(validation_key("problem = riccati\n[problem]\nT = -1\n") == "problem.T");
  CHECK(validation_key("problem = riccati\n[problem]\nT = abc\n") == "problem.T");
  CHECK(validation_key("problem = riccati\n[ladders]\ndt0 = 0\n") == "ladders.dt0");
  CHECK(validation_key("problem = riccati\n[sampling]\nfrobnicate = 1\n") == "sampling.frobnicate");
  CHECK(validation_key("problem = riccati\n[extras]\nx = 1\n") == "extras");
  CHECK(validation_key("problem = riccati\nmethod = ftcs-heat\n") == "method.name");
  CHECK(validation_key("problem = riccati\n[output]\nformat = xml\n") == "output.format");
  CHECK(validation_key("problem = riccati\n[sampling]\nnorm = l7\n") == "sampling.norm");
  CHECK(validation_key("[problem]\nT = 1\n") == "problem.name");
  CHECK(validation_key("problem = heat\n[sampling]\ncloud = grid-in-box\ncount = 3\n") == "sampling.count");
}

TEST_CASE("unknown problems list the catalog") {
  try {
    parse_config("problem = navier-stokes\n");
    FAIL("expected ConfigValidationError");
  } catch (const ConfigValidationError& e) {
    CHECK(e.key() == "problem.name");
    const std::string what = e.what();
    for (const std::string& name : list_catalog().names()) CHECK(what.find(name) != std::string::npos);
  }
}

TEST_CASE("file and syntax errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/semigap.ini"), ConfigFileError);
  CHECK_THROWS_AS(parse_config("problem = riccati\n[sampling\ncount = 3\n"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("problem = riccati\nthis line has no equals sign\n"), ConfigParseError);
}

TEST_CASE("shipped configs load") {
  for (const auto& entry : fs::directory_iterator(SEMIGAP_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    const ExperimentConfig c = load_config(entry.path());
    CHECK_NOTHROW(build_setup(c));
  }
}

TEST_CASE("CSV numbers use 17 significant digits and a dot") {
  CHECK(format_csv_number(0.1) == "0.10000000000000001");
  CHECK(format_csv_number(2.0) == "2");
  CHECK(std::stod(format_csv_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_csv_number(-1.5e-20) == "-1.5000000000000001e-20");
}

TEST_CASE("report JSON round-trips") {
  const ReportDocument doc = run_experiment(parse_config(kSmallRiccati));
  const std::string text = to_json_text(doc);
  const ReportDocument back = report_from_json_text(text);
  CHECK(back == doc);
  CHECK(to_json_text(back) == text);
  CHECK(doc.schema_version == 1);
  CHECK(doc.exit_code == 0);
  CHECK(doc.cloud_size == 16);
  CHECK_THROWS_AS(report_from_json_text("{ not json"), ConfigParseError);
}

TEST_CASE("reports do not depend on workers or output settings") {
  ExperimentConfig c = parse_config(kSmallRiccati);
  const std::string a = to_json_text(run_experiment(c));
  c.workers = 3;
  c.out_dir = "/somewhere/else";
  c.format = "csv-bundle";
  CHECK(to_json_text(run_experiment(c)) == a);
}

TEST_CASE("CSV tables agree with the JSON report") {
  const ExperimentConfig c = parse_config(kSmallRiccati);
  const ReportDocument doc = run_experiment(c);
  const std::string gap = doc.tables.at("gap_curve.csv");
  CHECK(gap.rfind("rho,L2estimate\r\n", 0) == 0);
  std::size_t lines = 0;
  for (std::size_t pos = gap.find("\r\n"); pos != std::string::npos; pos = gap.find("\r\n", pos + 2)) ++lines;
  CHECK(lines == c.rho_depth + 2);
  CHECK(doc.tables.at("convergence.csv").rfind("dt,sup_error\r\n", 0) == 0);
  CHECK(doc.tables.at("consistency.csv").rfind("dt,defect\r\n", 0) == 0);

  std::vector<double> json_numbers;
  collect_numbers(nlohmann::json::parse(to_json_text(doc)), json_numbers);
  for (const auto& [name, table] : doc.tables) {
    for (const std::string& field : split_csv_fields(table)) {
      if (field.empty()) continue;
      const double x = std::stod(field);
      CAPTURE(name);
      CAPTURE(field);
      CHECK(std::find(json_numbers.begin(), json_numbers.end(), x) != json_numbers.end());
    }
  }
}

TEST_CASE("emit writes one JSON file or three CSV files") {
  const ReportDocument doc = run_experiment(parse_config(kSmallRiccati));
  const fs::path json_dir = scratch_dir("json");
  const auto written = emit(doc, "json", json_dir / "nested");
  REQUIRE(written.size() == 1);
  CHECK(read_file(written.front()) == to_json_text(doc));
  const fs::path csv_dir = scratch_dir("csv");
  const auto tables = emit(doc, "csv-bundle", csv_dir);
  REQUIRE(tables.size() == 3);
  for (const fs::path& p : tables) CHECK(read_file(p) == doc.tables.at(p.filename().string()));
  CHECK_THROWS_AS(emit(doc, "xml", csv_dir), Error);
}

TEST_CASE("a one-point cloud degrades to warnings, not an error") {
  const ReportDocument doc = run_experiment(parse_config("problem = riccati\n[sampling]\npoints = 0.25\n"));
  CHECK(doc.exit_code == 0);
  CHECK(doc.verdict.local_verdict == StabilityVerdict::inconclusive);
  CHECK(doc.verdict.distant_verdict == StabilityVerdict::inconclusive);
  CHECK(doc.verdict.gap.verdict == GapVerdict::inconclusive);
  CHECK_FALSE(doc.verdict.warnings.empty());
  for (const Implication& i : doc.verdict.implications) {
    CHECK(i.status != ImplicationStatus::violated);
  }
}

TEST_CASE("run_gap matches the gap curve of the full report") {
  const ExperimentConfig c = parse_config(kSmallRiccati);
  CHECK(run_gap(c) == run_experiment(c).verdict.gap);
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("list") == 0);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("run") == 1);
  CHECK(run_cli("run --config /nonexistent.ini") == 1);

  const fs::path dir = scratch_dir("cli");
  {
    std::ofstream bad(dir / "bad.ini");
    bad << "problem = riccati\n[problem]\nT = -2\n";
    std::ofstream good(dir / "good.ini");
    good << kSmallRiccati;
  }
  CHECK(run_cli("run --config " + (dir / "bad.ini").string()) == 1);
  CHECK(run_cli("run --config " + (dir / "good.ini").string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(run_cli("run --config " + (dir / "good.ini").string() + " --format csv-bundle --workers 2 --out " +
                (dir / "csv").string()) == 0);
  CHECK(fs::exists(dir / "csv" / "gap_curve.csv"));
  CHECK(run_cli("gap --config " + (dir / "good.ini").string()) == 0);
  CHECK(run_cli("run --config " + (dir / "good.ini").string() + " --workers 0") == 1);

  const std::string from_cli = read_file(dir / "out" / "report.json");
  CHECK(from_cli == to_json_text(run_experiment(parse_config(kSmallRiccati))));
}

TEST_CASE("the seed flag changes ball clouds and nothing else") {
  const fs::path dir = scratch_dir("seed");
  {
    std::ofstream ini(dir / "heat.ini");
    ini << "problem = heat\n[sampling]\ncount = 8\n[ladders]\ndepth = 1\nrho_depth = 3\n";
  }
  const std::string cfg = (dir / "heat.ini").string();
  REQUIRE(run_cli("run --config " + cfg + " --seed 5 --out " + (dir / "a").string()) == 0);
  REQUIRE(run_cli("run --config " + cfg + " --seed 5 --workers 2 --out " + (dir / "b").string()) == 0);
  REQUIRE(run_cli("run --config " + cfg + " --seed 6 --out " + (dir / "c").string()) == 0);
  const std::string a = read_file(dir / "a" / "report.json");
  CHECK(a == read_file(dir / "b" / "report.json"));
  CHECK(a != read_file(dir / "c" / "report.json"));
}

}  // TEST_SUITE
