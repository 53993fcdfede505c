#include "kfks/problems.hpp"

#include <cmath>
#include <numbers>

#include "kfks/error.hpp"

namespace kfks {

std::string_view to_string(ProblemKind p) noexcept {
  switch (p) {
    case ProblemKind::smooth: return "smooth";
    case ProblemKind::sod: return "sod";
    case ProblemKind::oscillating: return "oscillating";
  }
  return "?";
}

std::optional<ProblemKind> parse_problem(std::string_view name) noexcept {
  for (ProblemKind p : {ProblemKind::smooth, ProblemKind::sod, ProblemKind::oscillating})
    if (name == to_string(p)) return p;
  return std::nullopt;
}

ProblemSpec ProblemSpec::defaults(ProblemKind kind) {
  ProblemSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ProblemKind::smooth:
      spec.nu = 1e4;
      spec.t_final = 0.025;
      spec.v_max = 15.0;
      spec.boundary = BoundaryKind::periodic;
      break;
    case ProblemKind::sod:
      spec.nu = 1e4;
      spec.t_final = 0.07;
      spec.v_max = 20.0;
      spec.boundary = BoundaryKind::outflow;
      break;
    case ProblemKind::oscillating:
      spec.nu = 1e2;
      spec.t_final = 0.025;
      spec.v_max = 30.0;
      spec.delta = 0.02;
      spec.boundary = BoundaryKind::periodic;
      break;
  }
  return spec;
}

Primitive smooth_state(double x) noexcept {
  const double s = std::sin(2.0 * std::numbers::pi * x);
  return {1.0 + 0.5 * s, 0.0, 5.0 + 0.5 * s};
}

Primitive sod_state(double x, double length) noexcept {
  if (x <= 0.5 * length) return {1.0, 0.0, 5.0};
  return {0.125, 0.0, 4.0};
}

double oscillating_velocity(double x, double delta) noexcept {
  constexpr double lo = 0.25, hi = 0.75;
  if (x < lo || x >= hi) return 0.0;
  const auto band = static_cast<long>(std::floor((x - lo) / delta));
  return band % 2 == 0 ? 1.0 : -1.0;
}

bool oscillating_bands_truncated(double delta) noexcept {
  const double bands = 0.5 / delta;
  return std::abs(bands - std::round(bands)) > 1e-9 * bands;
}

SchemeState init_smooth(SchemeKind scheme, const SpatialGrid& grid, const VelocityGrid& vgrid) {
  return SchemeState::from_cells(scheme, grid, vgrid, equilibrium_cells(grid, vgrid, smooth_state));
}

SchemeState init_sod(SchemeKind scheme, const SpatialGrid& grid, const VelocityGrid& vgrid) {
  const double len = grid.length();
  return SchemeState::from_cells(
      scheme, grid, vgrid,
      equilibrium_cells(grid, vgrid, [len](double x) { return sod_state(x, len); }));
}

SchemeState init_oscillating(SchemeKind scheme, const SpatialGrid& grid,
                             const VelocityGrid& vgrid, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("oscillating band width must lie in (0, 0.5]");
  return SchemeState::from_cells(
      scheme, grid, vgrid, equilibrium_cells(grid, vgrid, [delta](double x) {
        return Primitive{1.0, oscillating_velocity(x, delta), 5.0};
      }));
}

SchemeState init_uniform(SchemeKind scheme, const SpatialGrid& grid, const VelocityGrid& vgrid,
                         Primitive state) {
  return SchemeState::from_cells(scheme, grid, vgrid,
                                 equilibrium_cells(grid, vgrid, [state](double) { return state; }));
}

SchemeState init_problem(const ProblemSpec& spec, SchemeKind scheme, const SpatialGrid& grid,
                         const VelocityGrid& vgrid) {
  if (grid.boundary() != spec.boundary)
    throw DomainError("grid boundary kind does not match the problem");
  switch (spec.kind) {
    case ProblemKind::smooth: return init_smooth(scheme, grid, vgrid);
    case ProblemKind::sod: return init_sod(scheme, grid, vgrid);
    case ProblemKind::oscillating: return init_oscillating(scheme, grid, vgrid, spec.delta);
  }
  throw DomainError("unknown problem");
}

}  // namespace kfks
