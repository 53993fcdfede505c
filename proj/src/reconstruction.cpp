#include "kfks/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kfks/error.hpp"

namespace kfks {

namespace {

std::size_t wrap_index(std::ptrdiff_t i, std::size_t m) noexcept {
  const auto mm = static_cast<std::ptrdiff_t>(m);
  i %= mm;
  if (i < 0) i += mm;
  return static_cast<std::size_t>(i);
}

// boundary snapping in units of dx
constexpr double kTie = 1e-9;

}  // namespace

NodalDistribution::NodalDistribution(NodalKind kind, const SpatialGrid& grid,
                                     std::size_t n_velocities)
    : kind_(kind),
      grid_(grid),
      n_vel_(n_velocities),
      values_(n_velocities * grid.size(), 0.0),
      offset_(n_velocities, 0.0),
      steps_(n_velocities, 0),
      step_dt_(n_velocities, 0.0),
      extra_(n_velocities, 0.0) {}

NodalDistribution NodalDistribution::from_cells(NodalKind kind, const SpatialGrid& grid,
                                                const CellDistribution& f) {
  if (f.cells() != grid.size()) throw DomainError("cell distribution does not match grid");
  NodalDistribution nd(kind, grid, f.velocities());
  for (std::size_t k = 0; k < f.velocities(); ++k) {
    auto g = nd.nodes(k);
    for (std::size_t j = 0; j < grid.size(); ++j) g[j] = f(j, k);
  }
  return nd;
}

double NodalDistribution::node_position(std::size_t k, std::size_t i) const noexcept {
  const double p = grid_.center(i) + offset_[k];
  return p >= grid_.length() ? p - grid_.length() : p;
}

std::size_t NodalDistribution::first_node(std::size_t k) const noexcept {
  // first i with x_i + s >= L, using the same expression as node_position
  const double s = offset_[k];
  const double len = grid_.length();
  const std::size_t m = cells();
  auto wrapped = [&](std::size_t i) { return grid_.center(i) + s >= len; };
  double guess = std::ceil((len - s) / grid_.dx() - 0.5);
  std::size_t i = guess <= 0.0 ? 0 : (guess >= static_cast<double>(m) ? m : static_cast<std::size_t>(guess));
  while (i > 0 && wrapped(i - 1)) --i;
  while (i < m && !wrapped(i)) ++i;
  return i == m ? 0 : i;
}

void NodalDistribution::shift(std::size_t k, double v, double dt) {
  if (!(dt > 0.0)) throw PreconditionError("shift requires dt > 0");
  const std::size_t first_before = first_node(k);

  if (step_dt_[k] == 0.0) step_dt_[k] = dt;
  if (dt == step_dt_[k])
    ++steps_[k];
  else
    extra_[k] += v * dt;

  const double len = grid_.length();
  double s = std::fmod(static_cast<double>(steps_[k]) * (v * step_dt_[k]) + extra_[k], len);
  if (s < 0.0) s += len;
  if (s >= len) s = 0.0;
  offset_[k] = s;

  if (grid_.boundary() == BoundaryKind::outflow)
    reanchor_outflow(nodes(k), first_before, first_node(k), v);
}

void shift(NodalDistribution& nd, std::size_t k, double v, double dt) { nd.shift(k, v, dt); }

void reanchor_outflow(std::span<double> nodes, std::size_t first_before, std::size_t first_after,
                      double velocity) noexcept {
  const std::size_t m = nodes.size();
  if (first_before == first_after || velocity == 0.0) return;
  if (velocity > 0.0) {
    // nodes first_after .. first_before-1 crossed x = L and reappear at the left edge
    const double fill = nodes[first_before];
    const std::size_t count = (first_before + m - first_after) % m;
    for (std::size_t c = 0; c < count; ++c) nodes[(first_after + c) % m] = fill;
  } else {
    // nodes first_before .. first_after-1 crossed x = 0 and reappear at the right edge
    const double fill = nodes[(first_before + m - 1) % m];
    const std::size_t count = (first_after + m - first_before) % m;
    for (std::size_t c = 0; c < count; ++c) nodes[(first_before + c) % m] = fill;
  }
}

double evaluate(const NodalDistribution& nd, std::size_t k, double x) {
  const SpatialGrid& grid = nd.grid();
  const double len = grid.length();
  if (!(x >= 0.0 && x <= len))
    throw DomainError("evaluate: x = " + std::to_string(x) + " outside [0, L]");
  const std::size_t m = nd.cells();
  const double dx = grid.dx();
  const auto g = nd.nodes(k);

  double y = x - nd.offset(k);
  if (y < 0.0) y += len;
  const bool outflow = grid.boundary() == BoundaryKind::outflow;

  if (nd.kind() == NodalKind::piecewise_constant) {
    const std::size_t p = wrap_index(static_cast<std::ptrdiff_t>(std::floor(y / dx + kTie)), m);
    if (outflow) {
      // wrapped parts: the first piece's near x = L, the last piece's near x = 0;
      // thresholds sit half a domain away from either piece edge
      const std::size_t first = nd.first_node(k);
      const std::size_t last = (first + m - 1) % m;
      const double mid = nd.node_position(k, first) + 0.5 * len;
      if (p == first && x >= mid) return g[last];
      if (p == last && x < mid - dx) return g[first];
    }
    return g[p];
  }

  const double t = y / dx - 0.5;
  const double fl = std::floor(t);
  const double w = t - fl;
  const std::size_t i0 = wrap_index(static_cast<std::ptrdiff_t>(fl), m);
  const std::size_t i1 = (i0 + 1) % m;
  if (outflow) {
    const std::size_t first = nd.first_node(k);
    if (i1 == first) {
      // beyond the outermost nodes: constant continuation of the nearer end
      const std::size_t last = (first + m - 1) % m;
      return x < 0.5 * len ? g[first] : g[last];
    }
  }
  return (1.0 - w) * g[i0] + w * g[i1];
}

std::vector<double> locate_extreme_points(const NodalDistribution& nd, std::size_t k) {
  const std::size_t m = nd.cells();
  const std::size_t first = nd.first_node(k);
  std::vector<double> xs(m);
  for (std::size_t c = 0; c < m; ++c) xs[c] = nd.node_position(k, (first + c) % m);
  return xs;
}

void sample_centers(const NodalDistribution& nd, std::size_t k, std::span<double> out) {
  const SpatialGrid& grid = nd.grid();
  const std::size_t m = nd.cells();
  const auto g = nd.nodes(k);
  if (nd.kind() == NodalKind::piecewise_constant) {
    // out[j] = g[j - lag], a rotation
    const std::size_t start = wrap_index(-center_lag(nd, k), m);
    std::size_t src = start;
    for (std::size_t j = 0; j < m; ++j) {
      out[j] = g[src];
      if (++src == m) src = 0;
    }
    if (grid.boundary() == BoundaryKind::outflow) {
      // the last center can sit in the wrapped part of the first piece
      const std::size_t first = nd.first_node(k);
      if ((start == 0 ? m - 1 : start - 1) == first) out[m - 1] = g[(first + m - 1) % m];
    }
    return;
  }

  const double t = nd.offset(k) / grid.dx();
  const double q_real = std::floor(t);
  const double r = t - q_real;
  const auto q = static_cast<std::ptrdiff_t>(q_real);

  // center j lies between node j-q-1 (weight r) and node j-q (weight 1-r)
  std::size_t right = wrap_index(-q, m);
  std::size_t left = right == 0 ? m - 1 : right - 1;
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = r * g[left] + (1.0 - r) * g[right];
    left = right;
    if (++right == m) right = 0;
  }
  if (grid.boundary() == BoundaryKind::outflow && r > 0.0) {
    const std::size_t first = nd.first_node(k);
    const std::size_t last = (first + m - 1) % m;
    // the one center whose bracketing pair is (last, first) sits in the wrap gap
    const std::size_t j = wrap_index(static_cast<std::ptrdiff_t>(first) + q, m);
    out[j] = grid.center(j) < 0.5 * grid.length() ? g[first] : g[last];
  }
}

std::ptrdiff_t center_lag(const NodalDistribution& nd, std::size_t k) noexcept {
  const double t = nd.offset(k) / nd.grid().dx();
  const double q = std::floor(t);
  return static_cast<std::ptrdiff_t>(q) + (t - q > 0.5 + kTie ? 1 : 0);
}

CellDistribution sample_nodal(const NodalDistribution& nd) {
  CellDistribution f(nd.cells(), nd.velocities());
  const auto n = static_cast<std::ptrdiff_t>(nd.velocities());
#pragma omp parallel
  {
    std::vector<double> slice(nd.cells());
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      sample_centers(nd, k, slice);
      for (std::size_t j = 0; j < nd.cells(); ++j) f(j, k) = slice[j];
    }
  }
  return f;
}

double van_leer_slope(double left, double center, double right, double dx) noexcept {
  const double dm = center - left;
  const double dp = right - center;
  if (!(dm * dp > 0.0)) return 0.0;
  return 2.0 * dm * dp / ((dm + dp) * dx);
}

std::size_t neighbor_cell(const SpatialGrid& grid, std::size_t j, int offset) noexcept {
  const auto m = static_cast<std::ptrdiff_t>(grid.size());
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(j) + offset;
  if (grid.boundary() == BoundaryKind::periodic) return wrap_index(i, grid.size());
  if (i < 0) i = 0;
  if (i >= m) i = m - 1;
  return static_cast<std::size_t>(i);
}

LimitedSlopes van_leer_slopes(const CellDistribution& f, const SpatialGrid& grid) {
  LimitedSlopes s{f.cells(), f.velocities(), std::vector<double>(f.cells() * f.velocities())};
  const auto m = static_cast<std::ptrdiff_t>(f.cells());
  const std::size_t n = f.velocities();
  const double dx = grid.dx();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const auto left = f.cell(neighbor_cell(grid, j, -1));
    const auto mid = f.cell(j);
    const auto right = f.cell(neighbor_cell(grid, j, +1));
    for (std::size_t k = 0; k < n; ++k)
      s.values[j * n + k] = van_leer_slope(left[k], mid[k], right[k], dx);
  }
  return s;
}

namespace {

// Signed CFL fraction v dt / dx, validated against |.| <= 1.
double courant_fraction(double v, double dt, double dx) {
  const double d = v * dt / dx;
  if (std::abs(d) > 1.0 + 1e-12)
    throw PreconditionError("semi-Lagrangian step violates CFL: |v dt / dx| = " +
                            std::to_string(std::abs(d)));
  return std::clamp(d, -1.0, 1.0);
}

double slope_at(const LimitedSlopes* slopes, std::size_t j, std::size_t k) {
  return slopes ? (*slopes)(j, k) : 0.0;
}

}  // namespace

double evaluate_foot_point(const CellDistribution& f, const LimitedSlopes* slopes,
                           const SpatialGrid& grid, std::size_t k, double v, double dt,
                           std::size_t j) {
  const double d = courant_fraction(v, dt, grid.dx());
  const double dx = grid.dx();
  if (!slopes) {
    if (d >= 0.0) return (1.0 - d) * f(j, k) + d * f(neighbor_cell(grid, j, -1), k);
    return (1.0 + d) * f(j, k) - d * f(neighbor_cell(grid, j, +1), k);
  }
  // half-open cells [x_i - dx/2, x_i + dx/2)
  if (d >= 0.0) {
    if (d <= 0.5) return f(j, k) - slope_at(slopes, j, k) * d * dx;
    const std::size_t i = neighbor_cell(grid, j, -1);
    return f(i, k) + slope_at(slopes, i, k) * (1.0 - d) * dx;
  }
  const double e = -d;
  if (e < 0.5) return f(j, k) + slope_at(slopes, j, k) * e * dx;
  const std::size_t i = neighbor_cell(grid, j, +1);
  return f(i, k) - slope_at(slopes, i, k) * (1.0 - e) * dx;
}

double departure_cell_average(const CellDistribution& f, const LimitedSlopes* slopes,
                              const SpatialGrid& grid, std::size_t k, double v, double dt,
                              std::size_t j) {
  const double d = courant_fraction(v, dt, grid.dx());
  const double dx = grid.dx();
  if (d >= 0.0) {
    const std::size_t i = neighbor_cell(grid, j, -1);
    return d * (f(i, k) + slope_at(slopes, i, k) * (1.0 - d) * dx * 0.5) +
           (1.0 - d) * (f(j, k) - slope_at(slopes, j, k) * d * dx * 0.5);
  }
  const double e = -d;
  const std::size_t i = neighbor_cell(grid, j, +1);
  return e * (f(i, k) - slope_at(slopes, i, k) * (1.0 - e) * dx * 0.5) +
         (1.0 - e) * (f(j, k) + slope_at(slopes, j, k) * e * dx * 0.5);
}

}  // namespace kfks
