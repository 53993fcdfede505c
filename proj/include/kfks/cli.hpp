#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kfks/csv.hpp"
#include "kfks/problems.hpp"
#include "kfks/schemes.hpp"

namespace kfks {

struct RunConfig {
  std::vector<SchemeKind> schemes;
  ProblemKind problem = ProblemKind::smooth;
  std::vector<std::size_t> meshes;  // one entry for a single run
  bool convergence = false;
  std::size_t n_velocities = 50;
  double v_max = 15.0;
  std::vector<double> nus;  // one entry outside convergence mode
  double t_final = 0.025;
  double cfl = 1.0;
  double delta = 0.02;
  std::optional<double> dt;  // overrides the CFL step
  std::string output = "kfks";
  std::int64_t snapshot_every = 0;
  bool reference = false;  // serial reference steppers

  bool help = false;
  std::string help_text;
};

/**
 * Flags and an optional `--config FILE` of `key = value` lines (keys are the
 * long flag names, `#` starts a comment). Flags win over the file. Problem
 * defaults fill whatever is left unset. Throws UsageError.
 */
RunConfig parse_config(const std::vector<std::string>& args);

struct RunResult {
  std::vector<std::string> files;
  std::vector<RunMetrics> metrics;
  std::vector<ConvergenceRow> convergence;
};

/// Runs every (scheme, nu, mesh) combination and writes the CSV artifacts.
RunResult run(const RunConfig& config);

/// KFKS_THREADS: unset or 0 leaves OpenMP's default; n > 0 caps the team size.
void apply_thread_limit(const char* env_value);

/// Full command line entry point; returns the process exit status.
int run_cli(int argc, const char* const* argv);

}  // namespace kfks
