#include "kfks/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kfks/error.hpp"

namespace kfks {

RunMetrics make_metrics(SchemeKind scheme, std::size_t n_cells, std::size_t n_velocities,
                        std::int64_t n_cycles, double wall_time) {
  RunMetrics m;
  m.scheme = std::string(to_string(scheme));
  m.n_cells = n_cells;
  m.n_velocities = n_velocities;
  m.n_cycles = n_cycles;
  m.wall_time = wall_time;
  if (n_cycles > 0) {
    m.time_per_cycle = wall_time / static_cast<double>(n_cycles);
    m.time_per_cell = m.time_per_cycle / static_cast<double>(n_cells);
  }
  return m;
}

namespace {

ConvergenceEstimate order_from_sums(double a, double b) {
  ConvergenceEstimate est;
  est.coarse_diff = a;
  est.fine_diff = b;
  if (b == 0.0) {
    est.infinite = true;
    est.order = std::numeric_limits<double>::infinity();
  } else {
    est.order = std::log2(a / b);
  }
  return est;
}

}  // namespace

ConvergenceEstimate convergence_order(std::span<const double> coarse, std::span<const double> mid,
                                      std::span<const double> fine) {
  if (coarse.size() != mid.size() || mid.size() != fine.size())
    throw PreconditionError("convergence_order: samples must have equal length");
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    a += std::abs(coarse[i] - mid[i]);
    b += std::abs(mid[i] - fine[i]);
  }
  return order_from_sums(a, b);
}

ConvergenceEstimate convergence_order_nested(std::span<const double> coarse,
                                             std::span<const double> mid,
                                             std::span<const double> fine) {
  const std::size_t m = coarse.size();
  if (mid.size() != 2 * m || fine.size() != 4 * m)
    throw PreconditionError("convergence_order_nested: meshes must be nested by factor 2");
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    a += std::abs(coarse[i] - mid[2 * i + 1]);
    b += std::abs(mid[2 * i + 1] - fine[4 * i + 3]);
  }
  return order_from_sums(a, b);
}

double total_variation(std::span<const double> field) noexcept {
  const std::size_t n = field.size();
  double tv = 0.0;
  for (std::size_t j = 0; j < n; ++j) tv += std::abs(field[(j + 1) % n] - field[j]);
  return tv;
}

std::size_t front_width(std::span<const double> field, double lo, double hi, double tolerance) {
  const double jump = std::abs(hi - lo);
  if (field.size() >= 2) {
    const double slack = tolerance * jump;
    bool up = false, down = false;
    for (std::size_t j = 0; j + 1 < field.size(); ++j) {
      const double d = field[j + 1] - field[j];
      if (d > slack) up = true;
      if (d < -slack) down = true;
    }
    if (up && down)
      throw PreconditionError("front_width: field is not monotone over the window; choose another window");
  }
  const double band_lo = std::min(lo, hi) + 0.1 * jump;
  const double band_hi = std::max(lo, hi) - 0.1 * jump;
  return static_cast<std::size_t>(std::count_if(
      field.begin(), field.end(), [&](double f) { return f > band_lo && f < band_hi; }));
}

Profile profile(const SchemeState& state) {
  const MomentField mf = compute_moments(sample(state), state.vgrid);
  Profile p;
  p.x = state.grid.centers();
  p.rho = mf.rho;
  p.u = mf.u;
  p.temperature = mf.temperature;
  p.raw_second_moment.resize(mf.size());
  for (std::size_t j = 0; j < mf.size(); ++j) p.raw_second_moment[j] = 2.0 * mf.energy[j];
  return p;
}

std::vector<double> density_at(const SchemeState& state, std::span<const double> xs) {
  const SpatialGrid& grid = state.grid;
  const std::size_t nv = state.vgrid.size();
  const double dx = grid.dx();
  const double len = grid.length();
  const long m = static_cast<long>(grid.size());
  const bool periodic = grid.boundary() == BoundaryKind::periodic;

  LimitedSlopes slopes;
  if (state.scheme == SchemeKind::sl_muscl) slopes = van_leer_slopes(state.cells, grid);

  auto wrap = [&](long j) -> std::size_t {
    if (periodic) return static_cast<std::size_t>(((j % m) + m) % m);
    return static_cast<std::size_t>(std::clamp(j, 0L, m - 1));
  };

  std::vector<double> rho(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    if (!(x >= 0.0 && x <= len)) throw DomainError("density_at: point outside the domain");
    double sum = 0.0;
    if (state.is_nodal()) {
      for (std::size_t k = 0; k < nv; ++k) sum += evaluate(*state.nodal, k, x);
    } else if (state.scheme == SchemeKind::sl_muscl) {
      const long j = std::min(static_cast<long>(std::floor(x / dx)), m - 1);
      const std::size_t c = wrap(j);
      const double off = x - grid.center(c);
      for (std::size_t k = 0; k < nv; ++k) sum += state.cells(c, k) + slopes(c, k) * off;
    } else {
      const double t = x / dx - 0.5;
      const long jl = static_cast<long>(std::floor(t));
      const double w = t - static_cast<double>(jl);
      const std::size_t a = wrap(jl), b = wrap(jl + 1);
      for (std::size_t k = 0; k < nv; ++k) sum += (1.0 - w) * state.cells(a, k) + w * state.cells(b, k);
    }
    rho[i] = state.vgrid.dv() * sum;
  }
  return rho;
}

CostEstimate fixed_accuracy_cost(double spread_cells, double delta_l, double cycles_per_cell,
                                 double time_per_cell) {
  if (!(delta_l > 0.0)) throw DomainError("fixed_accuracy_cost: delta_l must be positive");
  CostEstimate c;
  c.cells = 2.0 * spread_cells / delta_l;
  c.cycles = cycles_per_cell * c.cells;
  c.seconds = c.cells * c.cycles * time_per_cell;
  return c;
}

}  // namespace kfks
