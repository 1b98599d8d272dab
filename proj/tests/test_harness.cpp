#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dmv/config.hpp"
#include "dmv/io.hpp"
#include "dmv/solver.hpp"

using namespace dmv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dmv_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("cd '") + dir.string() + "' && '" + DMV_CLI + "' " + args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmall = R"(# small perturbed run
grid.nx = 16
grid.ny = 16
run.t_end = 0.01   # short
ic.kind = perturbed
ic.seed = 3
)";

}  // namespace

TEST(Config, ParsesKeysAndDefaults) {
  const SolverConfig c = parse_config(std::string(kSmall) + "fluid.mu = 0.02\nrun.backend = serial\nforcing = none\n");
  EXPECT_EQ(c.grid.nx(), 16);
  EXPECT_EQ(c.t_end, 0.01);
  EXPECT_EQ(c.ic.kind, InitialCondition::Kind::perturbed);
  EXPECT_EQ(c.ic.seed, 3u);
  EXPECT_EQ(c.fluid.mu, 0.02);
  EXPECT_EQ(c.backend, Backend::serial);
  EXPECT_EQ(c.cfl, SolverConfig{}.cfl);
}

TEST(Config, MissingRequiredKeyIsNamed) {
  try {
    parse_config("grid.nx = 16\ngrid.ny = 16\nic.kind = constant\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("run.t_end"), std::string::npos);
  }
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of(std::string(kSmall) + "grid.nz = 3\n"), 7);
  EXPECT_EQ(line_of(std::string(kSmall) + "grid.nx = 32\n"), 7);
  EXPECT_EQ(line_of("grid.nx = 16\ngrid.ny = sixteen\n"), 2);
  EXPECT_EQ(line_of("grid.nx = 16\njust words\n"), 2);
  EXPECT_EQ(line_of(std::string(kSmall) + "run.backend = gpu\n"), 7);
  EXPECT_THROW(parse_config(std::string(kSmall) + "run.cfl = 2\n"), ConfigError);
}

TEST(Config, JsonFormMatchesFlatForm) {
  const SolverConfig flat = parse_config(kSmall);
  const SolverConfig json = parse_config(
      R"({"grid": {"nx": 16, "ny": 16}, "run.t_end": 0.01, "ic": {"kind": "perturbed", "seed": 3}})");
  EXPECT_EQ(config_to_json(flat), config_to_json(json));
  EXPECT_THROW(parse_config("{\"grid\": "), ConfigError);
  // The resolved JSON parses back to the same config.
  EXPECT_EQ(config_to_json(parse_config(config_to_json(flat))), config_to_json(flat));
}

TEST(Io, FormatNumberRoundTrips) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int k = 0; k < 10000; ++k) {
    const double v = std::ldexp(u(rng), static_cast<int>(u(rng)));
    EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::strtod(format_number(std::numeric_limits<double>::denorm_min()).c_str(), nullptr),
            std::numeric_limits<double>::denorm_min());
}

TEST(Io, SnapshotRoundTrip) {
  const fs::path dir = scratch("snapshot");
  SolverConfig c = parse_config(kSmall);
  const ConservedState s = initial_state(c);
  write_snapshot_csv((dir / "s.csv").string(), s);
  const ConservedState back = read_snapshot_csv((dir / "s.csv").string(), c.grid);
  for (std::size_t k = 0; k < c.grid.size(); ++k) {
    EXPECT_NEAR(back.rho[k], s.rho[k], 1e-15);
    EXPECT_NEAR(back.z[k], s.z[k], 1e-14);
    EXPECT_NEAR(back.mom[k].x, s.mom[k].x, 1e-15);
  }
  EXPECT_ANY_THROW(read_snapshot_csv((dir / "s.csv").string(), Grid2D(8, 8)));
  EXPECT_ANY_THROW(read_snapshot_csv((dir / "missing.csv").string(), c.grid));

  // A snapshot restarts the run from the stored state.
  c.ic.kind = InitialCondition::Kind::file;
  c.ic.path = (dir / "s.csv").string();
  const ConservedState restarted = initial_state(c);
  EXPECT_TRUE(restarted == back);
}

TEST(Cli, SimulateWritesArtifactsDeterministically) {
  const fs::path dir = scratch("simulate");
  put(dir / "run.cfg", kSmall);
  ASSERT_EQ(cli("simulate --config run.cfg --out a", dir), 0) << slurp(dir / "stderr.txt");
  ASSERT_EQ(cli("simulate --config run.cfg --out b", dir), 0);
  for (const char* f : {"timeseries.csv", "snapshot_00000.csv"}) {
    ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  }
  auto manifest = [&](const char* run) {
    auto j = nlohmann::json::parse(slurp(dir / run / "manifest.json"));
    j.erase("wall_seconds");
    return j;
  };
  const auto m = manifest("a");
  EXPECT_EQ(m, manifest("b"));
  EXPECT_EQ(m["config"]["grid"]["nx"], 16);
  const std::string series = slurp(dir / "a" / "timeseries.csv");
  EXPECT_EQ(series.substr(0, series.find('\n')).find("t,"), 0u);
  EXPECT_NE(series.find("rel_energy"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("exit");
  put(dir / "run.cfg", kSmall);
  put(dir / "bad.cfg", std::string(kSmall) + "grid.nz = 4\n");
  EXPECT_EQ(cli("", dir), 2);
  EXPECT_EQ(cli("simulate", dir), 2);
  EXPECT_EQ(cli("simulate --config missing.cfg", dir), 2);
  EXPECT_EQ(cli("simulate --config bad.cfg", dir), 2);
  EXPECT_NE(slurp(dir / "stderr.txt").find("line 7"), std::string::npos);
  EXPECT_EQ(cli("convergence-study --config run.cfg --levels 8,16", dir), 2);
  EXPECT_EQ(cli("rei-check --config run.cfg --out rei", dir), 0) << slurp(dir / "stderr.txt");
  EXPECT_TRUE(fs::exists(dir / "rei" / "rei.csv"));

  // A state leaving the admissible set is a solver failure, not a usage error.
  ASSERT_EQ(cli("simulate --config run.cfg --out a", dir), 0);
  std::istringstream rows(slurp(dir / "a" / "snapshot_00000.csv"));
  std::ostringstream bad;
  std::string row;
  for (int k = 0; std::getline(rows, row); ++k) {
    if (k == 5) {
      std::vector<std::string> cols;
      std::stringstream ss(row);
      for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
      cols[2] = "-0.5";
      row = cols[0] + "," + cols[1] + "," + cols[2] + "," + cols[3] + "," + cols[4] + "," + cols[5];
    }
    bad << row << '\n';
  }
  put(dir / "neg.csv", bad.str());
  put(dir / "neg.cfg", "grid.nx = 16\ngrid.ny = 16\nrun.t_end = 0.01\nic.kind = file\nic.path = neg.csv\n");
  EXPECT_EQ(cli("simulate --config neg.cfg --out neg", dir), 1);
  EXPECT_NE(slurp(dir / "stderr.txt").find("solver failure"), std::string::npos);
}

TEST(Cli, CoercivityCertificate) {
  const fs::path dir = scratch("lemma");
  ASSERT_EQ(cli("verify-lemma --samples 2000 --out cert", dir), 0) << slurp(dir / "stderr.txt");
  const auto j = nlohmann::json::parse(slurp(dir / "cert" / "certificate.json"));
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_GT(j["c4"].get<double>(), 0.0);
  EXPECT_EQ(j["fresh_checked"], 2000);
  // c* above the temperature range leaves no admissible reference state.
  EXPECT_EQ(cli("verify-lemma --c-star 3 --out cert2", dir), 2);
  // A degenerate density range is a single reference density.
  EXPECT_EQ(cli("verify-lemma --rho-lo 1 --rho-hi 1 --samples 1000 --out cert3", dir), 0)
      << slurp(dir / "stderr.txt");
  EXPECT_EQ(cli("verify-lemma --rho-lo 2 --rho-hi 1", dir), 2);
  EXPECT_EQ(cli("verify-lemma --samples 0", dir), 2);
}

TEST(Cli, UniquenessSingleAmplitudeSkipsScaling) {
  const fs::path dir = scratch("uniq");
  put(dir / "run.cfg", "grid.nx = 16\ngrid.ny = 16\nrun.t_end = 0.02\nic.kind = constant\n");
  ASSERT_EQ(cli("uniqueness-study --config run.cfg --eps 0.01 --out u", dir), 0) << slurp(dir / "stderr.txt");
  EXPECT_NE(slurp(dir / "stdout.txt").find("note:"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "u" / "uniqueness.json"));
  EXPECT_EQ(j["runs"].size(), 1u);
}

TEST(Cli, ConvergenceStudyWritesTable) {
  const fs::path dir = scratch("conv");
  put(dir / "run.cfg", "grid.nx = 8\ngrid.ny = 8\nrun.t_end = 0.01\nic.kind = perturbed\n");
  ASSERT_EQ(cli("convergence-study --config run.cfg --levels 8,16,32 --out c", dir), 0) << slurp(dir / "stderr.txt");
  EXPECT_TRUE(fs::exists(dir / "c" / "convergence.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "c" / "convergence.json"));
  EXPECT_EQ(j["reference_n"], 64);
}
