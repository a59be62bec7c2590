#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mfcoop/error.hpp"
#include "mfcoop/scenario.hpp"

using namespace mfcoop;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mfcoop_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "scenario.cfg";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MFCOOP_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

const char* kBase =
    "# fixture\n"
    "model.q = 0.5\n"
    "model.T = 1\n"
    "model.x0 = 1\n";

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mfcoop::Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("config parsing") {
  const Scenario sc = scenario_from_config(Config::parse(std::string(kBase) + "task = sweep\nsweep.points = 5\n"));
  CHECK(sc.model.q == 0.5);
  CHECK(sc.model.sigma == 1.0);
  CHECK(sc.n_steps == 2000);
  CHECK(sc.task == TaskKind::kSweep);
  CHECK(sc.sweep_points == 5);

  CHECK(code_of([] { scenario_from_config(Config::parse("model.q = 0.5\nmodel.x0 = 1\n")); }) ==
        ErrorCode::kConfig);
  CHECK(code_of([] { scenario_from_config(Config::parse(std::string(kBase) + "model.qq = 1\n")); }) ==
        ErrorCode::kConfig);
  CHECK(code_of([] { scenario_from_config(Config::parse(std::string(kBase) + "model.sigma = abc\n")); }) ==
        ErrorCode::kConfig);
  CHECK(code_of([] { Config::parse("no equals sign\n"); }) == ErrorCode::kConfig);
  CHECK(code_of([] {
          scenario_from_config(Config::parse(std::string(kBase) + "task = sweep\nsweep.points = 0\n"));
        }) == ErrorCode::kEmptyRange);
  try {
    scenario_from_config(Config::parse(std::string(kBase) + "solve.p = 2\n"));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("solve.p") != std::string::npos);
  }
}

TEST_CASE("provenance round-trips") {
  const char* extras[] = {
      "task = solve\nsolve.kind = lambda\nsolve.lambda = 0.3\n",
      "task = sweep\nsweep.axis = q\nsweep.from = -1\nsweep.to = 0.9\nsweep.points = 20\n",
      "task = deviate\ndeviate.schedule = sequence\ndeviate.p_sequence = 0.5, 0.1, 0\n",
      "task = figures\nfigures.q_list = [-0.5, 0.25, 0.5]\nmodel.sigma = 0.1\n",
      "task = pstar\npstar.tol = 1e-11\ngrid.n_steps = 321\n",
  };
  for (const char* extra : extras) {
    CAPTURE(extra);
    const Scenario sc = scenario_from_config(Config::parse(std::string(kBase) + extra));
    const std::string line = provenance_line(sc);
    const Scenario back = scenario_from_config(Config::from_provenance(line));
    CHECK(back.resolved().values() == sc.resolved().values());
    CHECK(provenance_line(back) == line);
  }
}

TEST_CASE("solve table") {
  const Scenario sc = scenario_from_config(Config::parse(std::string(kBase) + "task = solve\nsolve.kind = mfc\n"));
  const RunResult res = run_scenario(sc);
  REQUIRE(res.tables.size() == 1);
  REQUIRE(res.tables[0].rows.size() == 1);
  CHECK(res.tables[0].rows[0][2] == doctest::Approx(0.544401099663905).epsilon(1e-12));
  CHECK(res.tables[0].rows[0][3] == doctest::Approx(0.924897260380946).epsilon(1e-12));
}

TEST_CASE("p sweep crosses at p*") {
  const Scenario sc = scenario_from_config(Config::parse(std::string(kBase) + "task = sweep\nsweep.axis = p\n"));
  const Table t = run_scenario(sc).tables.at(0);
  REQUIRE(t.rows.size() == 101);
  int crossings = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i][0] > t.rows[i - 1][0]);
    const bool below_prev = t.rows[i - 1][1] < t.rows[i - 1][3];
    const bool below = t.rows[i][1] < t.rows[i][3];
    crossings += below_prev != below;
  }
  CHECK(crossings == 1);
}

TEST_CASE("lambda sweep is nonincreasing for a monotone coupling") {
  const Scenario sc = scenario_from_config(
      Config::parse("model.q = -0.5\nmodel.T = 1\nmodel.x0 = 1\ntask = sweep\nsweep.axis = lambda\nsweep.points = 21\n"));
  const Table t = run_scenario(sc).tables.at(0);
  REQUIRE(t.rows.size() == 21);
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][2] <= t.rows[i - 1][2] + 1e-10);
}

TEST_CASE("q sweep skips degenerate points") {
  // q (1 - e^{-2T}) / 2 = 1 lands on a grid point for T = 1.
  const double q_bad = 2.0 / (1.0 - std::exp(-2.0));
  std::ostringstream cfg;
  cfg.precision(17);
  cfg << "model.T = 1\nmodel.x0 = 1\ntask = sweep\nsweep.axis = q\nsweep.from = " << q_bad - 1.0
      << "\nsweep.to = " << q_bad + 1.0 << "\nsweep.points = 3\n";
  const RunResult res = run_scenario(scenario_from_config(Config::parse(cfg.str())));
  CHECK(res.tables.at(0).rows.size() == 2);
  REQUIRE(res.skipped.size() == 1);
  CHECK(res.skipped[0].find("SingularSystem") != std::string::npos);
}

TEST_CASE("p sweep at q = 0 is flat") {
  const Scenario sc = scenario_from_config(
      Config::parse("model.q = 0\nmodel.T = 1\nmodel.x0 = 1\ntask = sweep\nsweep.points = 11\n"));
  const Table t = run_scenario(sc).tables.at(0);
  for (const auto& row : t.rows) {
    CHECK(row[1] == doctest::Approx(t.rows[0][1]).epsilon(1e-14));
    CHECK(row[2] == doctest::Approx(t.rows[0][2]).epsilon(1e-12));
  }
}

TEST_CASE("csv and json formatting") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{1.0 / 3.0, 2.0}};
  const std::string csv = format_csv(t, "# config: x=1");
  CHECK(csv == "# config: x=1\na,b\n0.333333333333,2\n");
  const Scenario sc = scenario_from_config(Config::parse(kBase));
  const auto doc = nlohmann::json::parse(format_json(t, sc));
  CHECK(doc["columns"].size() == 2);
  CHECK(doc["rows"][0]["b"].get<double>() == 2.0);
  CHECK(doc["provenance"]["model.q"] == "0.5");
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCode::kConfig) == 2);
  CHECK(exit_code_for(ErrorCode::kSingularSystem) == 3);
  CHECK(exit_code_for(ErrorCode::kIo) == 4);
}

TEST_CASE("command line: determinism, round-trip and exit codes") {
  const fs::path dir = scratch_dir("cli");
  const fs::path cfg = write_config(dir, std::string(kBase) + "sweep.axis = p\nsweep.points = 11\n");

  SUBCASE("repeated runs are byte-identical") {
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + (dir / "a.csv").string()) == 0);
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + (dir / "b.csv").string()) == 0);
    const std::string a = slurp(dir / "a.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(a.find('\r') == std::string::npos);
  }
  SUBCASE("the provenance line reproduces the output") {
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " + (dir / "a.csv").string()) == 0);
    const std::string a = slurp(dir / "a.csv");
    const std::string line = a.substr(0, a.find('\n'));
    const Scenario sc = scenario_from_config(Config::from_provenance(line));
    {
      std::ofstream out(dir / "replay.cfg", std::ios::binary);
      for (const auto& [k, v] : sc.resolved().values()) out << k << " = " << v << "\n";
    }
    REQUIRE(run_cli("sweep --config " + (dir / "replay.cfg").string() + " --out " + (dir / "c.csv").string()) == 0);
    CHECK(slurp(dir / "c.csv") == a);
  }
  SUBCASE("json output") {
    REQUIRE(run_cli("solve --config " + cfg.string() + " --format json --out " + (dir / "s.json").string()) == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "s.json"));
    CHECK(doc["rows"][0]["xbar_T"].get<double>() == doctest::Approx(0.544401099664).epsilon(1e-11));
  }
  SUBCASE("figures") {
    const fs::path fcfg = write_config(dir, std::string(kBase) + "figures.q_list = -0.5, 0.25, 0.5\nfigures.points = 11\n");
    REQUIRE(run_cli("figures --config " + fcfg.string() + " --out " + (dir / "fig").string()) == 0);
    CHECK(fs::exists(dir / "fig" / "costs_q-0.5.csv"));
    CHECK(fs::exists(dir / "fig" / "costs_q0.25.csv"));
    CHECK(fs::exists(dir / "fig" / "costs_q0.5.csv"));
    CHECK(fs::exists(dir / "fig" / "pstar.csv"));
  }
  SUBCASE("exit codes") {
    CHECK(run_cli("solve --config " + (dir / "missing.cfg").string()) == 2);
    const fs::path bad = write_config(dir, "model.q = 0.5\n");
    CHECK(run_cli("solve --config " + bad.string()) == 2);
    const double q_bad = 2.0 / (1.0 - std::exp(-2.0));
    std::ostringstream s;
    s.precision(17);
    s << "model.q = " << q_bad << "\nmodel.T = 1\nmodel.x0 = 1\nsolve.kind = mfg\n";
    const fs::path sing = write_config(dir, s.str());
    CHECK(run_cli("solve --config " + sing.string() + " --out " + (dir / "x.csv").string()) == 3);
    const fs::path ok = write_config(dir, kBase);
    CHECK(run_cli("solve --config " + ok.string() + " --out " + (dir / "no" / "such" / "dir.csv").string()) == 4);
    CHECK(run_cli("bogus") == 2);
  }
  fs::remove_all(dir);
}
