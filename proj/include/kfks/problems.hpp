#pragma once

#include <optional>
#include <string_view>

#include "kfks/equilibrium.hpp"
#include "kfks/grid.hpp"
#include "kfks/schemes.hpp"

namespace kfks {

enum class ProblemKind { smooth, sod, oscillating };

std::string_view to_string(ProblemKind p) noexcept;
std::optional<ProblemKind> parse_problem(std::string_view name) noexcept;

/// Benchmark setup with the defaults of each problem.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::smooth;
  double domain_length = 1.0;
  double nu = 1e4;
  double t_final = 0.025;
  double v_max = 15.0;
  double delta = 0.02;  // oscillating band width
  BoundaryKind boundary = BoundaryKind::periodic;

  static ProblemSpec defaults(ProblemKind kind);
};

struct Primitive {
  double rho;
  double u;
  double temperature;
};

/// rho = 1 + sin(2 pi x)/2, u = 0, T = 5 + sin(2 pi x)/2.
Primitive smooth_state(double x) noexcept;

/// Left (1, 0, 5) for x <= L/2, right (0.125, 0, 4) otherwise.
Primitive sod_state(double x, double length = 1.0) noexcept;

/**
 * Staircase velocity: bands [0.25 + m delta, 0.25 + (m+1) delta) inside
 * [0.25, 0.75) carry u = +1 for even m and -1 for odd m; u = 0 elsewhere.
 */
double oscillating_velocity(double x, double delta) noexcept;

/// True when 0.5 / delta is not an integer, i.e. the last band is cut at 0.75.
bool oscillating_bands_truncated(double delta) noexcept;

/// Cell-wise corrected discrete Maxwellians of a macroscopic profile.
template <class Profile>
CellDistribution equilibrium_cells(const SpatialGrid& grid, const VelocityGrid& vgrid,
                                   Profile&& profile);

SchemeState init_smooth(SchemeKind scheme, const SpatialGrid& grid, const VelocityGrid& vgrid);
SchemeState init_sod(SchemeKind scheme, const SpatialGrid& grid, const VelocityGrid& vgrid);
SchemeState init_oscillating(SchemeKind scheme, const SpatialGrid& grid,
                             const VelocityGrid& vgrid, double delta);

/// Dispatch on spec.kind; the grid's boundary kind must match spec.boundary.
SchemeState init_problem(const ProblemSpec& spec, SchemeKind scheme, const SpatialGrid& grid,
                         const VelocityGrid& vgrid);

/// Uniform equilibrium state, e.g. (1, 0, 5) for fixed-point checks.
SchemeState init_uniform(SchemeKind scheme, const SpatialGrid& grid, const VelocityGrid& vgrid,
                         Primitive state);

// Implementation

template <class Profile>
CellDistribution equilibrium_cells(const SpatialGrid& grid, const VelocityGrid& vgrid,
                                   Profile&& profile) {
  CellDistribution f(grid.size(), vgrid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Primitive p = profile(grid.center(j));
    const Conserved target{p.rho, p.rho * p.u, 0.5 * p.rho * (p.u * p.u + p.temperature)};
    discrete_maxwellian(target, vgrid, f.cell(j));
  }
  return f;
}

}  // namespace kfks
