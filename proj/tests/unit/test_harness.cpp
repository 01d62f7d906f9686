#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "phopfield/harness/commands.hpp"
#include "phopfield/harness/config.hpp"

using namespace phopfield;
using namespace phopfield::harness;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("phopfield-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_CASE("config JSON round trip") {
  RunConfig c;
  c.mode_count = 8;
  c.injection = {1, 2};
  c.scattering.kind = "hadamard";
  c.scattering.rows = default_hadamard_rows(8);
  c.targets.kind = "explicit";
  c.targets.configs = {{1, 1}, {2, 3}};
  c.grid = {{0.01, 0.05}, {0.1, 1.0}};
  c.spins = {{1, -1, 1, 1, 1, 1, 1, 1}};
  c.seed = 123456789012345ull;
  const nlohmann::json j = c;
  CHECK(j.get<RunConfig>() == c);
  nlohmann::json bad = j;
  bad["no_such_key"] = 1;
  CHECK_THROWS(bad.get<RunConfig>());
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.energy_mode = "guess";
  CHECK_THROWS(c.validate());
  c = RunConfig{};
  c.mode_count = 0;
  CHECK_THROWS(c.validate());
  c = RunConfig{};
  c.temperatures = {-0.1};
  CHECK_THROWS(c.validate());
}

TEST_CASE("config hash ignores output location and threads") {
  RunConfig a, b;
  b.out = "elsewhere";
  b.threads = 7;
  CHECK(config_hash("mc", a) == config_hash("mc", b));
  CHECK(config_hash("mc", a) != config_hash("distribution", a));
  b.seed = 2;
  CHECK(config_hash("mc", a) != config_hash("mc", b));
}

TEST_CASE("scattering from a matrix file") {
  const auto dir = scratch("file");
  const auto u = haar_random_unitary(4, 3).matrix;
  {
    std::ofstream out(dir / "s.txt");
    write_complex_matrix(out, u);
  }
  RunConfig c;
  c.mode_count = 4;
  c.scattering.kind = "file";
  c.scattering.path = (dir / "s.txt").string();
  CHECK((build_scattering(c).matrix - u).cwiseAbs().maxCoeff() == 0.0);
  {
    std::ofstream out(dir / "bad.txt");
    write_complex_matrix(out, 2.0 * u);
  }
  c.scattering.path = (dir / "bad.txt").string();
  CHECK_THROWS(build_scattering(c));
}

TEST_CASE("oracle suite passes and detects the wrong multiplicity") {
  std::ostringstream log;
  CHECK(cmd_validate(ValidateOptions{}, log) == 0);
  ValidateOptions corrupt;
  corrupt.corrupt_multiplicity = true;
  std::ostringstream bad;
  CHECK(cmd_validate(corrupt, bad) == 1);
  CHECK(bad.str().find("FAIL") != std::string::npos);
}

TEST_CASE("distribution command writes a reproducible run directory") {
  const auto dir = scratch("distribution");
  RunConfig c;
  c.mode_count = 4;
  c.spins = {{1, 1, 1, 1}, {1, -1, 1, -1}};
  c.sample = true;
  c.events = 5000;
  c.out = dir.string();
  std::ostringstream log;
  const auto run = cmd_distribution(c, log);
  CHECK(run.exit_code == 0);
  std::ifstream in(fs::path(run.directory) / "distribution.csv");
  std::string line;
  int comments = 0, rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) ++comments;
    else ++rows;
  }
  CHECK(comments == 2);
  CHECK(rows == 1 + 2 * 10);
  CHECK(fs::exists(fs::path(run.directory) / "metadata.json"));
  std::ifstream meta(fs::path(run.directory) / "metadata.json");
  const auto j = nlohmann::json::parse(meta);
  CHECK(j["config"].get<RunConfig>() == c);
  CHECK(j["seeds"]["rng"] == "splitmix64-ctr/v1");
  CHECK(j["results"]["mean_tvd"].get<double>() < 0.05);
}

TEST_CASE("mc and hopfield commands") {
  const auto dir = scratch("mc");
  RunConfig c;
  c.mode_count = 4;
  c.n_steps = 50;
  c.max_lag = 10;
  c.replicas = 2;
  c.temperatures = {0.1, 1.0};
  c.pattern_counts = {1, 2};
  c.out = dir.string();
  std::ostringstream log;
  CHECK(cmd_mc(c, log).exit_code == 0);
  c.scattering.kind = "hadamard";
  c.scattering.rows = default_hadamard_rows(4);
  c.n_steps = 200;
  c.replicas = 10;
  c.temperatures = {0.05};
  const auto run = cmd_hopfield(c, log);
  std::ifstream meta(fs::path(run.directory) / "metadata.json");
  const auto j = nlohmann::json::parse(meta);
  for (const auto& r : j["results"]["runs"]) {
    CHECK(r["max_abs_imag_m"].get<double>() < 1e-12);
    CHECK(r["retrieved_fraction"].get<double>() > 0.5);
  }
  c.scattering.kind = "dft";
  CHECK_THROWS(cmd_phase_diagram(c, log));
}
