#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kfks/grid.hpp"

namespace kfks {

enum class NodalKind { piecewise_constant, piecewise_linear };

/**
 * Per-velocity shifted piecewise function used by the FKS family.
 *
 * Velocity k owns M node values g_{k,i} located at x_i + s_k (mod L). For
 * piecewise_constant, g_{k,i} holds on [x_i + s_k - dx/2, x_i + s_k + dx/2);
 * for piecewise_linear the function interpolates linearly between
 * consecutive nodes, so its extrema sit on nodes.
 *
 * The offset is never accumulated: s_k = mod(n_k v_k dt + extra_k, L), where
 * n_k counts regular steps and extra_k collects displacement of steps taken
 * with a different dt (e.g. a truncated final step).
 *
 * With outflow boundaries the node array still rotates periodically, but the
 * nodes that wrap across an edge are re-anchored to the neighbouring boundary
 * value and evaluation beyond the outermost nodes is constant.
 */
class NodalDistribution {
 public:
  NodalDistribution(NodalKind kind, const SpatialGrid& grid, std::size_t n_velocities);

  /// Nodes placed at the cell centers with g_{k,j} = f(j, k).
  static NodalDistribution from_cells(NodalKind kind, const SpatialGrid& grid,
                                      const CellDistribution& f);

  NodalKind kind() const noexcept { return kind_; }
  const SpatialGrid& grid() const noexcept { return grid_; }
  std::size_t cells() const noexcept { return grid_.size(); }
  std::size_t velocities() const noexcept { return n_vel_; }

  std::span<double> nodes(std::size_t k) noexcept { return {values_.data() + k * cells(), cells()}; }
  std::span<const double> nodes(std::size_t k) const noexcept {
    return {values_.data() + k * cells(), cells()};
  }

  double offset(std::size_t k) const noexcept { return offset_[k]; }
  std::int64_t step_count(std::size_t k) const noexcept { return steps_[k]; }

  /// Node position mod(x_i + s_k, L).
  double node_position(std::size_t k, std::size_t i) const noexcept;

  /// Index of the node with the smallest position for velocity k.
  std::size_t first_node(std::size_t k) const noexcept;

  /// Advance velocity k by v dt. See shift() below.
  void shift(std::size_t k, double v, double dt);

 private:
  NodalKind kind_;
  SpatialGrid grid_;
  std::size_t n_vel_;
  std::vector<double> values_;  // velocity-major
  std::vector<double> offset_;
  std::vector<std::int64_t> steps_;
  std::vector<double> step_dt_;
  std::vector<double> extra_;
};

/// Exact transport of velocity k's whole function by v dt (dt > 0).
void shift(NodalDistribution& nd, std::size_t k, double v, double dt);

/// Value of velocity k's function at x in [0, L]. DomainError otherwise.
double evaluate(const NodalDistribution& nd, std::size_t k, double x);

/// Node positions of velocity k in ascending order.
std::vector<double> locate_extreme_points(const NodalDistribution& nd, std::size_t k);

/// Every velocity's function sampled at every cell center.
CellDistribution sample_nodal(const NodalDistribution& nd);

/// Velocity k sampled at the cell centers by index arithmetic; out has M entries.
void sample_centers(const NodalDistribution& nd, std::size_t k, std::span<double> out);

/**
 * Piecewise constant: center j lies in piece (j - lag) mod M. A center within
 * 1e-9 dx of a piece boundary belongs to the piece on its right.
 */
std::ptrdiff_t center_lag(const NodalDistribution& nd, std::size_t k) noexcept;

/**
 * Outflow re-anchoring of one velocity slice after a shift. Nodes that moved
 * from `first_before` to `first_after` across an edge take the value of the
 * adjacent boundary node (constant extrapolation in index space).
 */
void reanchor_outflow(std::span<double> nodes, std::size_t first_before, std::size_t first_after,
                      double velocity) noexcept;

/// Cell-major M x N van Leer slopes.
struct LimitedSlopes {
  std::size_t cells = 0;
  std::size_t velocities = 0;
  std::vector<double> values;

  double operator()(std::size_t j, std::size_t k) const noexcept { return values[j * velocities + k]; }
};

/// Harmonic-mean limiter 2 d- d+ / ((d- + d+) dx), zero unless d- d+ > 0.
double van_leer_slope(double left, double center, double right, double dx) noexcept;

LimitedSlopes van_leer_slopes(const CellDistribution& f, const SpatialGrid& grid);

/// Cell index of j + offset with periodic wrap or clamping to the boundary cell.
std::size_t neighbor_cell(const SpatialGrid& grid, std::size_t j, int offset) noexcept;

/**
 * f at the foot of the characteristic x_j - v dt.
 *
 * Without slopes: linear interpolation between the two bracketing centers.
 * With slopes: the limited in-cell polynomial of the cell holding the foot.
 * Requires |v| dt <= dx; PreconditionError otherwise.
 */
double evaluate_foot_point(const CellDistribution& f, const LimitedSlopes* slopes,
                           const SpatialGrid& grid, std::size_t k, double v, double dt,
                           std::size_t j);

/**
 * Average of the reconstruction over the departure cell
 * [x_j - dx/2 - v dt, x_j + dx/2 - v dt].
 *
 * This is the conservative update used by the SL steppers. Without slopes it
 * coincides with evaluate_foot_point.
 */
double departure_cell_average(const CellDistribution& f, const LimitedSlopes* slopes,
                              const SpatialGrid& grid, std::size_t k, double v, double dt,
                              std::size_t j);

}  // namespace kfks
