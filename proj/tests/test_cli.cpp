#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coopemit/config.hpp"
#include "coopemit/errors.hpp"
#include "coopemit/tools/runner.hpp"

using namespace coopemit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("coopemit-test-" + name);
  fs::remove_all(p);
  return p;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("coopemit-test-" + name + ".json");
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ConfigError::Kind kind_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  FAIL("configuration was accepted");
  return ConfigError::Kind::parse;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(R"({"mode": "sweep", "seed": 5, "threads": 2,
    "cloud": {"n_atoms": 40, "k0r0": 6.5},
    "time_grid": {"start_inv_gamma1": 0.01, "stop_inv_gamma1": 3, "points": 10, "spacing": "linear"},
    "sweep": {"n_values": [8, 16, 32], "k0r0_values": [2, 3, 4], "realizations": 60}})");
  CHECK(c.mode == RunMode::sweep);
  CHECK(c.seed == 5);
  CHECK(c.cloud.seed == 5);
  CHECK(c.cloud.n_atoms == 40);
  CHECK(c.cloud.k0r0() == 6.5);
  CHECK(c.sweep.realizations == 60);
  const auto grid = make_time_grid(c.time_grid, c.cloud);
  CHECK(grid.size() == 10);
  CHECK(grid.front() == 0.01);
  CHECK(grid.back() == 3.0);
  CHECK(grid[1] - grid[0] == doctest::Approx(grid[9] - grid[8]));

  CHECK(kind_of("{ not json") == ConfigError::Kind::parse);
  CHECK(kind_of(R"({"cloud": {"n_atoms": 4, "radius": 3}})") == ConfigError::Kind::parse);
  CHECK(kind_of(R"({"mode": "fast"})") == ConfigError::Kind::parse);
  CHECK(kind_of(R"({"cloud": {"n_atoms": "many"}})") == ConfigError::Kind::parse);
  CHECK(kind_of(R"({"cloud": {"n_atoms": 0}})") == ConfigError::Kind::validation);
  CHECK(kind_of(R"({"threads": 0})") == ConfigError::Kind::validation);
  CHECK(kind_of(R"({"time_grid": {"start_inv_gamma1": 2, "stop_inv_gamma1": 1}})") == ConfigError::Kind::validation);
  CHECK(kind_of(R"({"mode": "sweep", "sweep": {"n_values": [8, 16], "k0r0_values": [1, 2, 3]}})") ==
        ConfigError::Kind::validation);
  CHECK(kind_of(R"({"acceptance": {"c8_realizations": 20}})") == ConfigError::Kind::validation);
}

TEST_CASE("default time grid spans both decay regimes") {
  CloudParams p;
  p.n_atoms = 400;
  p.r0 = 10.0;
  const auto grid = make_time_grid(TimeGridConfig{}, p);
  CHECK(grid.size() == 64);
  CHECK(grid.front() == doctest::Approx(1e-2 / 4.0));
  CHECK(grid.back() == doctest::Approx(10.0 / (400.0 / 20000.0)));
  CHECK(grid[1] / grid[0] == doctest::Approx(grid[63] / grid[62]));
}

TEST_CASE("single atom survival file follows exp(-2 gamma1 t)") {
  const fs::path out = scratch("n1");
  const fs::path cfg = write_config("n1", R"({"cloud": {"n_atoms": 1, "k0r0": 3},
    "time_grid": {"start_inv_gamma1": 0.05, "stop_inv_gamma1": 5, "points": 20}})");
  CHECK(tools::run_cli({"single", "--config", cfg.string(), "--out", out.string(), "--quiet"}) == tools::kOk);
  std::ifstream in(out / "survival.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_inv_gamma1,survival");
  int rows = 0;
  while (std::getline(in, line)) {
    double t, s;
    char comma;
    std::istringstream(line) >> t >> comma >> s;
    CHECK(s == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-13));
    ++rows;
  }
  CHECK(rows == 20);
  CHECK(fs::exists(out / "results.json"));
  CHECK(fs::exists(out / "positions.csv"));
}

TEST_CASE("small samples run with an explicit regime warning") {
  const fs::path out = scratch("small");
  const fs::path cfg = write_config("small", R"({"seed": 3, "cloud": {"n_atoms": 12, "k0r0": 0.5},
    "time_grid": {"start_inv_gamma1": 0.01, "stop_inv_gamma1": 10, "points": 16}})");
  CHECK(tools::run_cli({"single", "--config", cfg.string(), "--out", out.string(), "--quiet"}) == tools::kOk);
  const std::string summary = slurp(out / "summary.txt");
  CHECK(summary.find("WARNING") != std::string::npos);
  CHECK(summary.find("k0R0              0.5") != std::string::npos);
  CHECK(summary.find("N (k0R0)^-2       48") != std::string::npos);
  CHECK(slurp(out / "results.json").find("\"warnings\": [") != std::string::npos);
}

TEST_CASE("single runs are byte-identical for one seed") {
  const fs::path cfg = write_config("repro", R"({"seed": 8, "cloud": {"n_atoms": 40, "k0r0": 4},
    "time_grid": {"points": 12}, "single": {"export_amplitudes": true}})");
  const fs::path a = scratch("repro-a"), b = scratch("repro-b");
  CHECK(tools::run_cli({"single", "--config", cfg.string(), "--out", a.string(), "--quiet"}) == tools::kOk);
  CHECK(tools::run_cli({"single", "--config", cfg.string(), "--out", b.string(), "--quiet"}) == tools::kOk);
  for (const char* f : {"results.json", "survival.csv", "amplitudes.csv", "angular.csv", "perturbative.csv", "positions.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
  const fs::path c = scratch("repro-c");
  CHECK(tools::run_cli({"single", "--config", cfg.string(), "--out", c.string(), "--seed", "9", "--quiet"}) == tools::kOk);
  CHECK(slurp(a / "positions.csv") != slurp(c / "positions.csv"));
}

TEST_CASE("sweep writes a summary table with fitted exponents") {
  const fs::path out = scratch("sweep");
  const fs::path cfg = write_config("sweep", R"({"seed": 1, "sweep": {"n_values": [16, 32, 64],
    "k0r0_for_n_axis": 3, "k0r0_values": [2, 3, 4], "n_for_k0r0_axis": 32, "realizations": 50}})");
  CHECK(tools::run_cli({"sweep", "--config", cfg.string(), "--out", out.string(), "--threads", "2", "--quiet"}) ==
        tools::kOk);
  const std::string csv = slurp(out / "summary.csv");
  CHECK(csv.find("slope_gamma_col_vs_N") != std::string::npos);
  const std::string records = slurp(out / "records.ndjson");
  CHECK(records.find("\"type\":\"exponent\"") != std::string::npos);
  CHECK(slurp(out / "summary.txt").find("fitted exponents") != std::string::npos);
}

TEST_CASE("exit codes and no partial output") {
  const fs::path out = scratch("bad");
  CHECK(tools::run_cli(std::vector<std::string>{}) == tools::kConfigParse);
  CHECK(tools::run_cli({"launch"}) == tools::kConfigParse);
  const fs::path broken = write_config("broken", "{\"cloud\": ");
  CHECK(tools::run_cli({"single", "--config", broken.string(), "--out", out.string(), "--quiet"}) == tools::kConfigParse);
  const fs::path invalid = write_config("invalid", R"({"cloud": {"n_atoms": -4}})");
  CHECK(tools::run_cli({"single", "--config", invalid.string(), "--out", out.string(), "--quiet"}) ==
        tools::kConfigValidation);
  const fs::path thin = write_config("thin", R"({"sweep": {"n_values": [8, 16, 32], "k0r0_values": [1, 2, 3], "realizations": 10}})");
  CHECK(tools::run_cli({"sweep", "--config", thin.string(), "--out", out.string(), "--quiet"}) == tools::kConfigValidation);
  CHECK_FALSE(fs::exists(out));
}

}
