#include "kfks/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>

#include "kfks/diagnostics.hpp"
#include "kfks/error.hpp"
#include "kfks/reference.hpp"

namespace kfks {

namespace {

SchemeKind scheme_or_throw(const std::string& name) {
  if (auto s = parse_scheme(name)) return *s;
  throw UsageError("--scheme: unknown scheme '" + name + "' (upwind, muscl, fks, rfks or sl_upwind, sl_muscl)");
}

void check_meshes(const std::vector<std::size_t>& meshes, bool convergence) {
  for (std::size_t m : meshes)
    if (m < 2) throw UsageError("--meshes: every mesh needs at least 2 cells");
  for (std::size_t i = 1; i < meshes.size(); ++i) {
    if (meshes[i] <= meshes[i - 1]) throw UsageError("--meshes: sizes must be strictly increasing");
    if (convergence && meshes[i] != 2 * meshes[i - 1])
      throw UsageError("--meshes: convergence mode needs each mesh to double the previous one");
  }
  if (convergence && meshes.size() < 3)
    throw UsageError("--convergence needs at least three meshes");
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"1D-space x 1D-velocity BGK solver (SL-Upwind, SL-MUSCL, FKS, R-FKS)", "kfks"};
  app.set_config("--config", "", "key = value file; flags override its entries");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string scheme, problem = "smooth", output = "kfks";
  std::vector<std::string> schemes;
  std::size_t nx = 0, nv = 50;
  std::vector<std::size_t> meshes;
  std::vector<double> nus;
  double vmax = 0.0, tfinal = 0.0, cfl = 1.0, delta = 0.0, dt = 0.0;
  std::int64_t snapshot_every = 0;
  bool convergence = false, reference = false;

  auto* o_scheme = app.add_option("--scheme", scheme, "upwind | muscl | fks | rfks");
  auto* o_schemes = app.add_option("--schemes", schemes, "comma separated scheme sweep")->delimiter(',');
  app.add_option("--problem", problem, "smooth | sod | oscillating")->capture_default_str();
  auto* o_nx = app.add_option("--nx", nx, "number of cells");
  auto* o_meshes = app.add_option("--meshes", meshes, "comma separated mesh sweep")->delimiter(',');
  app.add_flag("--convergence", convergence, "estimate orders on consecutive mesh triples");
  app.add_option("--nv", nv, "number of velocities")->capture_default_str();
  auto* o_vmax = app.add_option("--vmax", vmax, "velocity bound");
  auto* o_nu = app.add_option("--nu", nus, "collision frequency (a list in convergence mode)")->delimiter(',');
  auto* o_tfinal = app.add_option("--tfinal", tfinal, "final time");
  app.add_option("--cfl", cfl, "CFL number in (0, 1]")->capture_default_str();
  auto* o_delta = app.add_option("--delta", delta, "oscillating band width");
  auto* o_dt = app.add_option("--dt", dt, "fixed time step");
  app.add_option("--output", output, "output file prefix")->capture_default_str();
  app.add_option("--snapshot-every", snapshot_every, "profile snapshot every k steps (0 = off)");
  app.add_flag("--reference", reference, "use the serial reference steppers");

  RunConfig cfg;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    cfg.help = true;
    cfg.help_text = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (o_scheme->count() && o_schemes->count()) throw UsageError("--scheme conflicts with --schemes");
  if (o_scheme->count()) {
    cfg.schemes = {scheme_or_throw(scheme)};
  } else if (o_schemes->count()) {
    for (const auto& s : schemes) cfg.schemes.push_back(scheme_or_throw(s));
  } else {
    throw UsageError("missing --scheme");
  }

  const auto pk = parse_problem(problem);
  if (!pk) throw UsageError("--problem: unknown problem '" + problem + "'");
  cfg.problem = *pk;
  const ProblemSpec spec = ProblemSpec::defaults(cfg.problem);

  if (o_nx->count() && o_meshes->count()) throw UsageError("--nx conflicts with --meshes");
  if (o_nx->count()) cfg.meshes = {nx};
  else if (o_meshes->count()) cfg.meshes = meshes;
  else throw UsageError("missing --nx or --meshes");
  cfg.convergence = convergence;
  check_meshes(cfg.meshes, convergence);

  if (nv < 2) throw UsageError("--nv: need at least 2 velocities");
  cfg.n_velocities = nv;
  cfg.v_max = o_vmax->count() ? vmax : spec.v_max;
  if (!(cfg.v_max > 0.0)) throw UsageError("--vmax: must be positive");
  cfg.nus = o_nu->count() ? nus : std::vector<double>{spec.nu};
  for (double nu : cfg.nus)
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw UsageError("--nu: must be finite and non-negative");
  if (!convergence && cfg.nus.size() != 1) throw UsageError("--nu: a list is only allowed with --convergence");
  cfg.t_final = o_tfinal->count() ? tfinal : spec.t_final;
  if (!(cfg.t_final >= 0.0) || !std::isfinite(cfg.t_final)) throw UsageError("--tfinal: must be non-negative");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw UsageError("--cfl: must lie in (0, 1]");
  cfg.cfl = cfl;
  cfg.delta = o_delta->count() ? delta : spec.delta;
  if (!(cfg.delta > 0.0 && cfg.delta <= 0.5)) throw UsageError("--delta: must lie in (0, 0.5]");
  if (o_dt->count()) {
    const double dx_fine = 1.0 / static_cast<double>(cfg.meshes.back());
    if (!(dt > 0.0)) throw UsageError("--dt: must be positive");
    if (dt * cfg.v_max > dx_fine * (1.0 + 1e-12))
      throw UsageError("--dt: violates the CFL bound on the finest mesh");
    cfg.dt = dt;
  }
  if (output.empty()) throw UsageError("--output: empty prefix");
  cfg.output = output;
  if (snapshot_every < 0) throw UsageError("--snapshot-every: must be non-negative");
  cfg.snapshot_every = snapshot_every;
  cfg.reference = reference;
  return cfg;
}

RunResult run(const RunConfig& cfg) {
  RunResult result;
  ProblemSpec spec = ProblemSpec::defaults(cfg.problem);
  spec.delta = cfg.delta;
  if (cfg.problem == ProblemKind::oscillating && oscillating_bands_truncated(cfg.delta))
    std::cerr << "warning: 0.5/delta is not an integer; the last band is cut at x = 0.75\n";

  const VelocityGrid vgrid(cfg.n_velocities, cfg.v_max);
  const bool single = cfg.schemes.size() == 1 && cfg.meshes.size() == 1 && cfg.nus.size() == 1;
  const std::size_t finest = cfg.meshes.back();

  for (SchemeKind scheme : cfg.schemes) {
    for (double nu : cfg.nus) {
      // samples[(mesh, coarse)] = density of run `mesh` at the centers of mesh `coarse`
      std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> samples;
      for (std::size_t mi = 0; mi < cfg.meshes.size(); ++mi) {
        const std::size_t m = cfg.meshes[mi];
        const SpatialGrid grid(m, spec.domain_length, spec.boundary);
        SchemeState state = init_problem(spec, scheme, grid, vgrid);

        double dt = 0.0;
        if (cfg.dt) dt = *cfg.dt;
        else if (cfg.convergence)
          dt = compute_dt(vgrid, SpatialGrid(finest, spec.domain_length, spec.boundary), cfg.cfl);
        else
          dt = compute_dt(vgrid, grid, cfg.cfl);

        std::string tag = cfg.output;
        if (!single) {
          tag += "_" + std::string(to_string(scheme)) + "_m" + std::to_string(m);
          if (cfg.nus.size() > 1) tag += "_nu" + format_double(nu);
        }

        const std::int64_t n = steps_to(dt, cfg.t_final);
        double wall = 0.0;
        for (std::int64_t s = 0; s < n; ++s) {
          const auto t0 = std::chrono::steady_clock::now();
          const double h = step_length(s, n, dt, cfg.t_final);
          if (cfg.reference) reference::step(state, nu, h);
          else step(state, nu, h);
          wall += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          if (cfg.snapshot_every > 0 && (s + 1) % cfg.snapshot_every == 0 && s + 1 < n) {
            const std::string path = tag + "_snapshot_" + std::to_string(s + 1) + ".csv";
            write_csv_file(path, profile_table(profile(state)));
            result.files.push_back(path);
          }
        }
        if (n > 0) state.time = cfg.t_final;

        const std::string path = tag + "_profile.csv";
        write_csv_file(path, profile_table(profile(state)));
        result.files.push_back(path);

        RunMetrics metrics = make_metrics(scheme, m, cfg.n_velocities, n, wall);
        metrics.nu = nu;
        result.metrics.push_back(metrics);

        if (cfg.convergence) {
          for (std::size_t c = mi >= 2 ? mi - 2 : 0; c <= mi; ++c) {
            const SpatialGrid coarse(cfg.meshes[c], spec.domain_length, spec.boundary);
            samples[{mi, c}] = density_at(state, coarse.centers());
          }
        }
      }
      if (cfg.convergence) {
        for (std::size_t c = 0; c + 2 < cfg.meshes.size(); ++c) {
          ConvergenceRow row;
          row.scheme = std::string(to_string(scheme));
          row.m_coarse = cfg.meshes[c];
          row.m_mid = cfg.meshes[c + 1];
          row.m_fine = cfg.meshes[c + 2];
          row.nu = nu;
          row.estimate = convergence_order(samples.at({c, c}), samples.at({c + 1, c}),
                                           samples.at({c + 2, c}));
          if (row.estimate.infinite)
            std::cerr << "warning: zero fine difference for meshes " << row.m_coarse
                      << "; order reported as inf\n";
          result.convergence.push_back(row);
        }
      }
    }
  }

  const std::string metrics_path = cfg.output + "_metrics.csv";
  write_csv_file(metrics_path, metrics_table(result.metrics));
  result.files.push_back(metrics_path);
  if (cfg.convergence) {
    const std::string conv_path = cfg.output + "_convergence.csv";
    write_csv_file(conv_path, convergence_table(result.convergence));
    result.files.push_back(conv_path);
  }
  return result;
}

void apply_thread_limit(const char* env_value) {
  if (env_value == nullptr || *env_value == '\0') return;
  const std::string_view s(env_value);
  int n = -1;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), n);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || n < 0)
    throw UsageError("KFKS_THREADS: expected a non-negative integer, got '" + std::string(s) + "'");
  if (n > 0) omp_set_num_threads(std::min(n, omp_get_max_threads()));
}

int run_cli(int argc, const char* const* argv) {
  try {
    apply_thread_limit(std::getenv("KFKS_THREADS"));
    const RunConfig cfg = parse_config(std::vector<std::string>(argv + 1, argv + argc));
    if (cfg.help) {
      std::cout << cfg.help_text;
      return 0;
    }
    const RunResult result = run(cfg);
    for (const auto& f : result.files) std::cout << f << '\n';
    for (const auto& row : result.convergence)
      std::cout << row.scheme << " nu=" << format_double(row.nu) << " meshes " << row.m_coarse
                << "/" << row.m_mid << "/" << row.m_fine << " p=" << format_double(row.estimate.order)
                << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.category()) << "]: " << e.what() << '\n';
    return e.category() == ErrorCategory::usage ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error [io]: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace kfks
