#include "kfks/reference.hpp"

#include <algorithm>
#include <cmath>

#include "kfks/equilibrium.hpp"
#include "kfks/error.hpp"

namespace kfks::reference {

namespace {

CellDistribution equilibria(const CellDistribution& fstar, const VelocityGrid& vgrid) {
  CellDistribution eq(fstar.cells(), fstar.velocities());
  for (std::size_t j = 0; j < fstar.cells(); ++j) {
    const Conserved u = cell_moments(fstar.cell(j), vgrid);
    const DiscreteMaxwellian e = discrete_maxwellian(u, vgrid);
    for (std::size_t k = 0; k < vgrid.size(); ++k) eq(j, k) = e.values[k];
  }
  return eq;
}

}  // namespace

CellDistribution sample(const SchemeState& state) {
  if (!state.is_nodal()) return state.cells;
  const NodalDistribution& nd = *state.nodal;
  CellDistribution f(nd.cells(), nd.velocities());
  for (std::size_t j = 0; j < nd.cells(); ++j)
    for (std::size_t k = 0; k < nd.velocities(); ++k)
      f(j, k) = evaluate(nd, k, state.grid.center(j));
  return f;
}

void step_sl(SchemeState& state, double nu, double dt) {
  const SpatialGrid& grid = state.grid;
  const CellDistribution& f = state.cells;
  LimitedSlopes slopes;
  const LimitedSlopes* sp = nullptr;
  if (state.scheme == SchemeKind::sl_muscl) {
    slopes = van_leer_slopes(f, grid);
    sp = &slopes;
  }
  CellDistribution fstar(f.cells(), f.velocities());
  for (std::size_t j = 0; j < f.cells(); ++j)
    for (std::size_t k = 0; k < f.velocities(); ++k)
      fstar(j, k) = departure_cell_average(f, sp, grid, k, state.vgrid[k], dt, j);

  if (nu > 0.0) {
    const CellDistribution eq = equilibria(fstar, state.vgrid);
    const double keep = std::exp(-nu * dt);
    const double relax = -std::expm1(-nu * dt);
    for (std::size_t j = 0; j < f.cells(); ++j)
      for (std::size_t k = 0; k < f.velocities(); ++k)
        fstar(j, k) = keep * fstar(j, k) + relax * eq(j, k);
  }
  state.cells = std::move(fstar);
  state.time += dt;
  ++state.step_count;
}

void step_fks(SchemeState& state, double nu, double dt) {
  NodalDistribution& nd = *state.nodal;
  const SpatialGrid& grid = state.grid;
  for (std::size_t k = 0; k < nd.velocities(); ++k) shift(nd, k, state.vgrid[k], dt);

  if (nu > 0.0) {
    const CellDistribution fstar = reference::sample(state);
    const CellDistribution eq = equilibria(fstar, state.vgrid);
    const double keep = std::exp(-nu * dt);
    const double relax = -std::expm1(-nu * dt);
    const double len = grid.length();
    for (std::size_t k = 0; k < nd.velocities(); ++k) {
      auto g = nd.nodes(k);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        // piece whose half-open support contains x_j
        double y = grid.center(j) - nd.offset(k);
        if (y < 0.0) y += len;
        auto p = static_cast<std::ptrdiff_t>(std::floor(y / grid.dx() + 1e-9));
        p %= static_cast<std::ptrdiff_t>(grid.size());
        // outflow: a center in the wrapped part of the first piece owns no node
        if (grid.boundary() == BoundaryKind::outflow &&
            static_cast<std::size_t>(p) == nd.first_node(k) &&
            grid.center(j) >= nd.node_position(k, nd.first_node(k)) + 0.5 * len)
          continue;
        g[static_cast<std::size_t>(p)] = keep * fstar(j, k) + relax * eq(j, k);
      }
    }
  }
  state.time += dt;
  ++state.step_count;
}

void step_rfks(SchemeState& state, double nu, double dt) {
  NodalDistribution& nd = *state.nodal;
  const SpatialGrid& grid = state.grid;
  const std::size_t m = grid.size();
  const double dx = grid.dx();
  for (std::size_t k = 0; k < nd.velocities(); ++k) shift(nd, k, state.vgrid[k], dt);

  if (nu > 0.0) {
    const CellDistribution fstar = reference::sample(state);
    const CellDistribution eq = equilibria(fstar, state.vgrid);
    const double keep = std::exp(-nu * dt);
    const double relax = -std::expm1(-nu * dt);
    const bool outflow = grid.boundary() == BoundaryKind::outflow;

    for (std::size_t k = 0; k < nd.velocities(); ++k) {
      const std::vector<double> g(nd.nodes(k).begin(), nd.nodes(k).end());
      const std::vector<double> xs = locate_extreme_points(nd, k);  // ascending
      const std::size_t first = nd.first_node(k);
      for (std::size_t c = 0; c < m; ++c) {
        const std::size_t i = (first + c) % m;
        // neighbours in physical order; outflow ends see a flat continuation
        const std::size_t prev = (c == 0 && outflow) ? i : (i + m - 1) % m;
        const std::size_t next = (c == m - 1 && outflow) ? i : (i + 1) % m;
        const double x = xs[c];

        // bracketing centers x_left <= x < x_left + dx, with ghost centers at the ends
        const double x_left = (std::floor(x / dx - 0.5) + 0.5) * dx;
        const double x_right = x_left + dx;
        auto center_value = [&](double xc) {
          double p = xc;
          if (outflow) {
            p = std::clamp(p, grid.center(0), grid.center(m - 1));
          } else {
            if (p < 0.0) p += grid.length();
            if (p > grid.length()) p -= grid.length();
          }
          const auto j = static_cast<std::size_t>(std::lround(p / dx - 0.5)) % m;
          return eq(j, k);
        };
        const double e_node = resolve_node_maxwellian(
            center_value(x_left), center_value(x_right), (g[i] - g[prev]) / dx,
            (g[next] - g[i]) / dx, x_left, x_right, x);
        nd.nodes(k)[i] = keep * g[i] + relax * e_node;
      }
    }
  }
  state.time += dt;
  ++state.step_count;
}

void step(SchemeState& state, double nu, double dt) {
  switch (state.scheme) {
    case SchemeKind::sl_upwind:
    case SchemeKind::sl_muscl: reference::step_sl(state, nu, dt); break;
    case SchemeKind::fks: reference::step_fks(state, nu, dt); break;
    case SchemeKind::rfks: reference::step_rfks(state, nu, dt); break;
  }
}

}  // namespace kfks::reference
