#include "kfks/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "kfks/equilibrium.hpp"
#include "kfks/error.hpp"

namespace kfks {

std::string_view to_string(SchemeKind s) noexcept {
  switch (s) {
    case SchemeKind::sl_upwind: return "sl_upwind";
    case SchemeKind::sl_muscl: return "sl_muscl";
    case SchemeKind::fks: return "fks";
    case SchemeKind::rfks: return "rfks";
  }
  return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept {
  for (SchemeKind s : kAllSchemes)
    if (name == to_string(s)) return s;
  if (name == "upwind" || name == "sl-upwind") return SchemeKind::sl_upwind;
  if (name == "muscl" || name == "sl-muscl") return SchemeKind::sl_muscl;
  if (name == "r-fks") return SchemeKind::rfks;
  return std::nullopt;
}

SchemeState SchemeState::from_cells(SchemeKind scheme, const SpatialGrid& grid,
                                    const VelocityGrid& vgrid, const CellDistribution& f0) {
  if (f0.cells() != grid.size() || f0.velocities() != vgrid.size())
    throw DomainError("initial distribution does not match the grids");
  SchemeState state{scheme, grid, vgrid, {}, std::nullopt, 0.0, 0, {}};
  switch (scheme) {
    case SchemeKind::sl_upwind:
    case SchemeKind::sl_muscl: state.cells = f0; break;
    case SchemeKind::fks:
      state.nodal = NodalDistribution::from_cells(NodalKind::piecewise_constant, grid, f0);
      break;
    case SchemeKind::rfks:
      state.nodal = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid, f0);
      break;
  }
  state.work.fstar = CellDistribution(grid.size(), vgrid.size());
  state.work.equilibrium = CellDistribution(grid.size(), vgrid.size());
  return state;
}

CellDistribution sample(const SchemeState& state) {
  return state.is_nodal() ? sample_nodal(*state.nodal) : state.cells;
}

double compute_dt(const VelocityGrid& vgrid, const SpatialGrid& grid, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
  return cfl * grid.dx() / vgrid.v_max();
}

double resolve_node_maxwellian(double e_left, double e_right, double sigma_left,
                               double sigma_right, double x_left, double x_right,
                               double x_ext) noexcept {
  const double e_minus = e_left + sigma_left * (x_ext - x_left);
  const double e_plus = e_right + sigma_right * (x_ext - x_right);
  if (sigma_left * sigma_right >= 0.0)
    return ((x_right - x_ext) * e_minus + (x_ext - x_left) * e_plus) / (x_right - x_left);
  return sigma_left > 0.0 ? std::min(e_minus, e_plus) : std::max(e_minus, e_plus);
}

namespace {

struct Relaxation {
  double keep;     // exp(-nu dt)
  double relax;    // 1 - exp(-nu dt)
};

Relaxation relaxation(double nu, double dt) noexcept {
  return {std::exp(-nu * dt), -std::expm1(-nu * dt)};
}

// Remembers the failure with the lowest cell index across worker threads and
// rethrows it tagged with that cell.
class FirstFailure {
 public:
  explicit FirstFailure(std::ptrdiff_t cells) : cell_(cells) {}

  void record(std::ptrdiff_t j) {
#pragma omp critical(kfks_first_failure)
    if (j < cell_) {
      cell_ = j;
      failure_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (!failure_) return;
    const std::string where = "cell " + std::to_string(cell_) + ": ";
    try {
      std::rethrow_exception(failure_);
    } catch (const DegenerateMomentsError& e) {
      throw DegenerateMomentsError(static_cast<std::size_t>(cell_), where + e.what());
    } catch (const CorrectionFailureError& e) {
      throw CorrectionFailureError(e.residual(), where + e.what());
    } catch (const InvalidStateError& e) {
      throw InvalidStateError(where + e.what());
    }
  }

 private:
  std::ptrdiff_t cell_;
  std::exception_ptr failure_;
};

void cell_equilibrium(std::span<const double> fstar, const VelocityGrid& vgrid,
                      std::span<double> eq) {
  const Conserved u = cell_moments(fstar, vgrid);
  if (!std::isfinite(u.rho) || !std::isfinite(u.mom) || !std::isfinite(u.energy))
    throw InvalidStateError("non-finite moments");
  discrete_maxwellian(u, vgrid, eq);
}

// Discrete Maxwellians of every cell of fstar.
void cell_equilibria(const CellDistribution& fstar, const VelocityGrid& vgrid,
                     CellDistribution& eq) {
  const auto m = static_cast<std::ptrdiff_t>(fstar.cells());
  FirstFailure failure(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    try {
      cell_equilibrium(fstar.cell(j), vgrid, eq.cell(j));
    } catch (...) {
      failure.record(j);
    }
  }
  failure.rethrow();
}

void check_scheme(const SchemeState& state, bool nodal, const char* name) {
  if (state.is_nodal() != nodal) throw PreconditionError(std::string(name) + ": wrong scheme kind");
}

void shift_all(SchemeState& state, double dt) {
  NodalDistribution& nd = *state.nodal;
  const auto n = static_cast<std::ptrdiff_t>(nd.velocities());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) nd.shift(k, state.vgrid[k], dt);
}

void sample_into(const NodalDistribution& nd, CellDistribution& out) {
  const auto n = static_cast<std::ptrdiff_t>(nd.velocities());
  const std::size_t m = nd.cells();
#pragma omp parallel
  {
    std::vector<double> slice(m);
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      sample_centers(nd, k, slice);
      for (std::size_t j = 0; j < m; ++j) out(j, k) = slice[j];
    }
  }
}

std::size_t wrap(std::ptrdiff_t i, std::size_t m) noexcept {
  const auto mm = static_cast<std::ptrdiff_t>(m);
  i %= mm;
  return static_cast<std::size_t>(i < 0 ? i + mm : i);
}

}  // namespace

void step_sl(SchemeState& state, double nu, double dt) {
  check_scheme(state, false, "step_sl");
  const SpatialGrid& grid = state.grid;
  const std::size_t m = grid.size();
  const std::size_t n = state.vgrid.size();
  const double dx = grid.dx();
  const bool muscl = state.scheme == SchemeKind::sl_muscl;
  CellDistribution& f = state.cells;
  CellDistribution& fstar = state.work.fstar;

  std::vector<double> frac(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = state.vgrid[k] * dt / dx;
    if (std::abs(d) > 1.0 + 1e-12)
      throw PreconditionError("semi-Lagrangian step violates CFL: |v dt / dx| = " +
                              std::to_string(std::abs(d)));
    frac[k] = std::clamp(d, -1.0, 1.0);
  }

  LimitedSlopes& slopes = state.work.slopes;
  if (muscl) {
    slopes.cells = m;
    slopes.velocities = n;
    slopes.values.resize(m * n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m); ++j) {
      const auto left = f.cell(neighbor_cell(grid, j, -1));
      const auto mid = f.cell(j);
      const auto right = f.cell(neighbor_cell(grid, j, +1));
      double* out = slopes.values.data() + j * n;
      for (std::size_t k = 0; k < n; ++k) out[k] = van_leer_slope(left[k], mid[k], right[k], dx);
    }
  }

  // Average of the shifted reconstruction over each cell (flux form).
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m); ++j) {
    const std::size_t jl = neighbor_cell(grid, j, -1);
    const std::size_t jr = neighbor_cell(grid, j, +1);
    const auto left = f.cell(jl);
    const auto mid = f.cell(j);
    const auto right = f.cell(jr);
    auto out = fstar.cell(j);
    if (!muscl) {
      for (std::size_t k = 0; k < n; ++k) {
        const double d = frac[k];
        out[k] = d >= 0.0 ? (1.0 - d) * mid[k] + d * left[k] : (1.0 + d) * mid[k] - d * right[k];
      }
      continue;
    }
    const double* sl = slopes.values.data() + jl * n;
    const double* sm = slopes.values.data() + j * n;
    const double* sr = slopes.values.data() + jr * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = frac[k];
      if (d >= 0.0) {
        out[k] = d * (left[k] + sl[k] * (1.0 - d) * dx * 0.5) +
                 (1.0 - d) * (mid[k] - sm[k] * d * dx * 0.5);
      } else {
        const double e = -d;
        out[k] = e * (right[k] - sr[k] * (1.0 - e) * dx * 0.5) +
                 (1.0 - e) * (mid[k] + sm[k] * e * dx * 0.5);
      }
    }
  }

  if (nu > 0.0) {
    const Relaxation r = relaxation(nu, dt);
    FirstFailure failure(static_cast<std::ptrdiff_t>(m));
#pragma omp parallel
    {
      std::vector<double> eq(n);
#pragma omp for schedule(static)
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m); ++j) {
        try {
          const auto fs = fstar.cell(j);
          cell_equilibrium(fs, state.vgrid, eq);
          auto out = f.cell(j);
          for (std::size_t k = 0; k < n; ++k) out[k] = r.keep * fs[k] + r.relax * eq[k];
        } catch (...) {
          failure.record(j);
        }
      }
    }
    failure.rethrow();
  } else {
    std::swap(f, fstar);
  }
  state.time += dt;
  ++state.step_count;
}

void step_fks(SchemeState& state, double nu, double dt) {
  check_scheme(state, true, "step_fks");
  if (state.nodal->kind() != NodalKind::piecewise_constant)
    throw PreconditionError("step_fks needs a piecewise-constant representation");
  NodalDistribution& nd = *state.nodal;
  shift_all(state, dt);

  if (nu > 0.0) {
    const Relaxation r = relaxation(nu, dt);
    const std::size_t m = nd.cells();
    const std::size_t n = nd.velocities();
    // Each cell center lies in exactly one piece; center j of velocity k sits in
    // piece (j + start[k]) mod m. That piece takes the center's update, and f*
    // at the center is the piece value itself.
    // In outflow the last center can fall in the wrapped part of the first
    // piece. It then reads the last node's continuation and updates nothing.
    // The value is captured before the loop since that node is updated in place.
    const bool outflow = state.grid.boundary() == BoundaryKind::outflow;
    std::vector<std::size_t> start(n);
    std::vector<double> gap_value(n, std::nan(""));
    for (std::size_t k = 0; k < n; ++k) {
      start[k] = wrap(-center_lag(nd, k), m);
      const std::size_t first = nd.first_node(k);
      if (outflow && (start[k] == 0 ? m - 1 : start[k] - 1) == first)
        gap_value[k] = nd.nodes(k)[first == 0 ? m - 1 : first - 1];
    }
    double* const nodes = nd.nodes(0).data();
    const std::size_t none = m * n;
    FirstFailure failure(static_cast<std::ptrdiff_t>(m));
#pragma omp parallel
    {
      std::vector<double> fs(n), eq(n);
      std::vector<std::size_t> piece(n);
#pragma omp for schedule(static)
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(m); ++j) {
        try {
          const bool last_cell = j + 1 == static_cast<std::ptrdiff_t>(m);
          for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = start[k] + static_cast<std::size_t>(j);
            if (p >= m) p -= m;
            if (last_cell && !std::isnan(gap_value[k])) {
              piece[k] = none;
              fs[k] = gap_value[k];
              continue;
            }
            piece[k] = k * m + p;
            fs[k] = nodes[piece[k]];
          }
          cell_equilibrium(fs, state.vgrid, eq);
          for (std::size_t k = 0; k < n; ++k)
            if (piece[k] != none) nodes[piece[k]] = r.keep * fs[k] + r.relax * eq[k];
        } catch (...) {
          failure.record(j);
        }
      }
    }
    failure.rethrow();
  }
  state.time += dt;
  ++state.step_count;
}

void step_rfks(SchemeState& state, double nu, double dt) {
  check_scheme(state, true, "step_rfks");
  if (state.nodal->kind() != NodalKind::piecewise_linear)
    throw PreconditionError("step_rfks needs a piecewise-linear representation");
  NodalDistribution& nd = *state.nodal;
  shift_all(state, dt);

  if (nu > 0.0) {
    CellDistribution& fstar = state.work.fstar;
    sample_into(nd, fstar);
    cell_equilibria(fstar, state.vgrid, state.work.equilibrium);
    const CellDistribution& eq = state.work.equilibrium;
    const Relaxation r = relaxation(nu, dt);
    const std::size_t m = nd.cells();
    const double dx = state.grid.dx();
    const bool outflow = state.grid.boundary() == BoundaryKind::outflow;
    const auto n = static_cast<std::ptrdiff_t>(nd.velocities());
#pragma omp parallel
    {
      std::vector<double> updated(m);
#pragma omp for schedule(static)
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        auto g = nd.nodes(k);
        const std::size_t first = nd.first_node(k);
        const std::size_t last = (first + m - 1) % m;
        for (std::size_t i = 0; i < m; ++i) {
          std::size_t prev = i == 0 ? m - 1 : i - 1;
          std::size_t next = i + 1 == m ? 0 : i + 1;
          if (outflow && i == first) prev = i;
          if (outflow && i == last) next = i;
          const double sigma_left = (g[i] - g[prev]) / dx;
          const double sigma_right = (g[next] - g[i]) / dx;

          const double x = nd.node_position(k, i);
          const double fl = std::floor(x / dx - 0.5);
          const double x_left = (fl + 0.5) * dx;
          const auto jl = static_cast<std::ptrdiff_t>(fl);
          std::size_t cl, cr;
          if (outflow) {
            cl = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(jl, 0, m - 1));
            cr = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(jl + 1, 0, m - 1));
          } else {
            // x in [0, L) so jl in [-1, m-1]
            cl = jl < 0 ? m - 1 : static_cast<std::size_t>(jl);
            cr = jl + 1 == static_cast<std::ptrdiff_t>(m) ? 0 : static_cast<std::size_t>(jl + 1);
          }
          const double e_node = resolve_node_maxwellian(eq(cl, k), eq(cr, k), sigma_left,
                                                        sigma_right, x_left, x_left + dx, x);
          // the transported function at its own node is the node value
          updated[i] = r.keep * g[i] + r.relax * e_node;
        }
        std::copy(updated.begin(), updated.end(), g.begin());
      }
    }
  }
  state.time += dt;
  ++state.step_count;
}

void step(SchemeState& state, double nu, double dt) {
  switch (state.scheme) {
    case SchemeKind::sl_upwind:
    case SchemeKind::sl_muscl: step_sl(state, nu, dt); break;
    case SchemeKind::fks: step_fks(state, nu, dt); break;
    case SchemeKind::rfks: step_rfks(state, nu, dt); break;
  }
}

std::int64_t steps_to(double dt, double t_final) noexcept {
  if (!(t_final > 0.0) || !(dt > 0.0)) return 0;
  return static_cast<std::int64_t>(std::ceil(t_final / dt - 1e-9));
}

double step_length(std::int64_t s, std::int64_t n, double dt, double t_final) noexcept {
  if (s != n - 1) return dt;
  const double rest = t_final - static_cast<double>(n - 1) * dt;
  return std::abs(rest - dt) > 1e-12 * dt ? rest : dt;
}

std::int64_t advance_to(SchemeState& state, double nu, double dt, double t_final) {
  const std::int64_t n = steps_to(dt, t_final);
  for (std::int64_t s = 0; s < n; ++s) step(state, nu, step_length(s, n, dt, t_final));
  if (n > 0) state.time = t_final;
  return n;
}

}  // namespace kfks
