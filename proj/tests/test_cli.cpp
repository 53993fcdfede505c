#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kfks/cli.hpp"
#include "kfks/csv.hpp"
#include "kfks/error.hpp"
#include "kfks/problems.hpp"

using namespace kfks;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("kfks_cli_" + std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "kfks");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(ParseConfig, SodExample) {
  const RunConfig c = parse_config({"--scheme", "rfks", "--problem", "sod", "--nx", "300", "--nv",
                                    "50", "--vmax", "20", "--nu", "1e4", "--tfinal", "0.07"});
  EXPECT_EQ(c.schemes, std::vector<SchemeKind>{SchemeKind::rfks});
  EXPECT_EQ(c.problem, ProblemKind::sod);
  EXPECT_EQ(c.meshes, std::vector<std::size_t>{300});
  EXPECT_EQ(c.n_velocities, 50u);
  EXPECT_EQ(c.v_max, 20.0);
  EXPECT_EQ(c.nus, std::vector<double>{1e4});
  EXPECT_EQ(c.t_final, 0.07);
  EXPECT_EQ(c.cfl, 1.0);
  EXPECT_FALSE(c.dt);
}

TEST(ParseConfig, ProblemDefaults) {
  const RunConfig c = parse_config({"--scheme", "fks", "--problem", "oscillating", "--nx", "600"});
  EXPECT_EQ(c.v_max, 30.0);
  EXPECT_EQ(c.nus, std::vector<double>{1e2});
  EXPECT_EQ(c.delta, 0.02);
  EXPECT_EQ(c.n_velocities, 50u);
}

TEST(ParseConfig, UsageErrors) {
  const std::vector<std::vector<std::string>> bad = {
      {"--nx", "100"},
      {"--scheme", "rfks", "--nx", "100", "--cfl", "1.5"},
      {"--scheme", "rfks", "--nx", "100", "--cfl", "0"},
      {"--scheme", "rfks", "--nx", "100", "--meshes", "100,200"},
      {"--scheme", "rfks", "--schemes", "fks,rfks", "--nx", "100"},
      {"--scheme", "weno", "--nx", "100"},
      {"--scheme", "rfks"},
      {"--scheme", "rfks", "--nx", "abc"},
      {"--scheme", "rfks", "--nx", "100", "--bogus", "1"},
      {"--scheme", "rfks", "--meshes", "100,200,300", "--convergence"},
      {"--scheme", "rfks", "--meshes", "100,200", "--convergence"},
      {"--scheme", "rfks", "--nx", "100", "--nu", "1,2"},
      {"--scheme", "rfks", "--nx", "100", "--dt", "1"},
      {"--scheme", "rfks", "--nx", "100", "--problem", "blast"},
      {"--scheme", "rfks", "--nx", "100", "--nu", "-1"},
  };
  for (const auto& args : bad) {
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_THROW(parse_config(args), UsageError) << joined;
  }
}

TEST(ParseConfig, ConfigFileWithOverrides) {
  TempDir dir;
  const std::string path = dir / "run.cfg";
  std::ofstream(path) << "# sweep\nschemes = fks,rfks\nmeshes = 50,100,200\nconvergence = true\n"
                         "nu = 10,100\ntfinal = 0.01\ncfl = 0.5\n";
  const RunConfig c = parse_config({"--config", path, "--cfl", "0.8"});
  EXPECT_EQ(c.schemes, (std::vector<SchemeKind>{SchemeKind::fks, SchemeKind::rfks}));
  EXPECT_EQ(c.meshes, (std::vector<std::size_t>{50, 100, 200}));
  EXPECT_TRUE(c.convergence);
  EXPECT_EQ(c.nus, (std::vector<double>{10, 100}));
  EXPECT_EQ(c.t_final, 0.01);
  EXPECT_EQ(c.cfl, 0.8);

  std::ofstream(dir / "bad.cfg") << "scheme = fks\nnx = 10\ncolour = blue\n";
  EXPECT_THROW(parse_config({"--config", dir / "bad.cfg"}), UsageError);
}

TEST(ParseConfig, Help) {
  const RunConfig c = parse_config({"--help"});
  EXPECT_TRUE(c.help);
  EXPECT_NE(c.help_text.find("--scheme"), std::string::npos);
}

TEST(Run, ZeroFinalTimeWritesInitialMoments) {
  TempDir dir;
  RunConfig c = parse_config({"--scheme", "muscl", "--problem", "smooth", "--nx", "40", "--nv", "20",
                              "--tfinal", "0", "--output", dir / "z"});
  const RunResult r = run(c);
  const CsvTable t = read_csv_file(dir / "z_profile.csv");
  const std::vector<double> rho = numeric_column(t, "rho");
  const std::vector<double> temp = numeric_column(t, "T");
  const std::vector<double> x = numeric_column(t, "x");
  ASSERT_EQ(rho.size(), 40u);
  for (std::size_t j = 0; j < 40; ++j) {
    EXPECT_NEAR(rho[j], smooth_state(x[j]).rho, 1e-12);
    EXPECT_NEAR(temp[j], smooth_state(x[j]).temperature, 1e-12);
  }
  ASSERT_EQ(r.metrics.size(), 1u);
  EXPECT_EQ(r.metrics[0].n_cycles, 0);
  EXPECT_TRUE(fs::exists(dir / "z_metrics.csv"));
}

TEST(Run, IdenticalInvocationsGiveIdenticalBytes) {
  TempDir dir;
  for (const char* tag : {"a", "b"})
    run(parse_config({"--scheme", "rfks", "--problem", "sod", "--nx", "60", "--nv", "20", "--tfinal",
                      "0.01", "--output", dir / tag}));
  EXPECT_EQ(slurp(dir / "a_profile.csv"), slurp(dir / "b_profile.csv"));
  EXPECT_FALSE(slurp(dir / "a_profile.csv").empty());
}

TEST(Run, ReferenceSteppersAgree) {
  TempDir dir;
  for (const std::string tag : {"k", "r"}) {
    std::vector<std::string> args = {"--scheme", "fks",      "--problem", "oscillating", "--nx", "60",
                                     "--nv",     "20",       "--delta",   "0.1",         "--tfinal",
                                     "0.005",    "--output", dir / tag};
    if (tag == "r") args.push_back("--reference");
    run(parse_config(args));
  }
  const auto a = numeric_column(read_csv_file(dir / "k_profile.csv"), "rho");
  const auto b = numeric_column(read_csv_file(dir / "r_profile.csv"), "rho");
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
}

TEST(Run, ConvergenceSweep) {
  TempDir dir;
  const RunConfig c = parse_config({"--schemes", "upwind,rfks", "--meshes", "20,40,80", "--convergence",
                                    "--nv", "16", "--nu", "10,100", "--tfinal", "0.005", "--output",
                                    dir / "c"});
  const RunResult r = run(c);
  EXPECT_EQ(r.metrics.size(), 12u);
  ASSERT_EQ(r.convergence.size(), 4u);
  for (const auto& row : r.convergence) {
    EXPECT_EQ(row.m_coarse, 20u);
    EXPECT_TRUE(std::isfinite(row.estimate.order));
    EXPECT_GT(row.estimate.fine_diff, 0.0);
  }
  EXPECT_TRUE(fs::exists(dir / "c_rfks_m80_nu100_profile.csv"));
  const CsvTable t = read_csv_file(dir / "c_convergence.csv");
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0][0], "sl_upwind");
  EXPECT_EQ(numeric_column(t, "nu"), (std::vector<double>{10, 100, 10, 100}));
  // every mesh uses the finest mesh's step
  for (const auto& m : r.metrics) EXPECT_EQ(m.n_cycles, r.metrics[2].n_cycles);
}

TEST(Run, Snapshots) {
  TempDir dir;
  // dt = dx / v_max = 1/300, so three steps; the final state goes to the profile only
  const RunResult r = run(parse_config({"--scheme", "fks", "--nx", "20", "--nv", "10", "--tfinal",
                                        "0.01", "--snapshot-every", "1", "--output", dir / "s"}));
  EXPECT_EQ(r.metrics.at(0).n_cycles, 3);
  EXPECT_TRUE(fs::exists(dir / "s_snapshot_1.csv"));
  EXPECT_TRUE(fs::exists(dir / "s_snapshot_2.csv"));
  EXPECT_FALSE(fs::exists(dir / "s_snapshot_3.csv"));
  EXPECT_EQ(read_csv_file(dir / "s_snapshot_1.csv").rows.size(), 20u);
}

TEST(ThreadLimit, ParsesEnvironment) {
  const int before = omp_get_max_threads();
  apply_thread_limit(nullptr);
  apply_thread_limit("");
  apply_thread_limit("0");
  EXPECT_EQ(omp_get_max_threads(), before);
  apply_thread_limit("1");
  EXPECT_EQ(omp_get_max_threads(), 1);
  EXPECT_THROW(apply_thread_limit("two"), UsageError);
  EXPECT_THROW(apply_thread_limit("-3"), UsageError);
  omp_set_num_threads(before);
}

TEST(RunCli, ExitCodes) {
  TempDir dir;
  EXPECT_EQ(call({"--scheme", "fks", "--nx", "20", "--nv", "10", "--tfinal", "0.001", "--output",
                  dir / "ok"}),
            0);
  EXPECT_EQ(call({"--nx", "20"}), 2);
  EXPECT_EQ(call({"--scheme", "fks", "--nx", "20", "--cfl", "1.5"}), 2);
  EXPECT_EQ(call({"--scheme", "fks", "--nx", "20", "--nv", "10", "--tfinal", "0.001", "--output",
                  dir / "missing_dir/x"}),
            1);
  // a lattice far too coarse for the temperature: the equilibrium solve fails
  EXPECT_EQ(call({"--scheme", "fks", "--nx", "20", "--nv", "3", "--vmax", "0.05", "--tfinal",
                  "0.001", "--output", dir / "bad"}),
            3);
  EXPECT_EQ(call({"--help"}), 0);
}
