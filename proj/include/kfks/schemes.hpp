#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kfks/grid.hpp"
#include "kfks/reconstruction.hpp"

namespace kfks {

enum class SchemeKind { sl_upwind, sl_muscl, fks, rfks };

std::string_view to_string(SchemeKind s) noexcept;
std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept;
inline constexpr SchemeKind kAllSchemes[] = {SchemeKind::sl_upwind, SchemeKind::sl_muscl,
                                             SchemeKind::fks, SchemeKind::rfks};

/**
 * Solver state for one run.
 *
 * SL schemes own `cells`; the FKS family owns `nodal` (piecewise constant
 * for FKS, continuous piecewise linear for R-FKS). Scratch buffers live in
 * `work` so steps do not allocate.
 */
struct SchemeState {
  SchemeKind scheme;
  SpatialGrid grid;
  VelocityGrid vgrid;
  CellDistribution cells;
  std::optional<NodalDistribution> nodal;
  double time = 0.0;
  std::int64_t step_count = 0;

  struct Workspace {
    CellDistribution fstar;
    CellDistribution equilibrium;
    LimitedSlopes slopes;
    std::vector<double> node_scratch;
  } work;

  /// Builds the representation from cell-center point values f(x_j, v_k).
  static SchemeState from_cells(SchemeKind scheme, const SpatialGrid& grid,
                                const VelocityGrid& vgrid, const CellDistribution& f0);

  bool is_nodal() const noexcept { return nodal.has_value(); }
};

/// Cell-center values of the current representation.
CellDistribution sample(const SchemeState& state);

/// dt = cfl dx / max_k |v_k|, cfl in (0, 1].
double compute_dt(const VelocityGrid& vgrid, const SpatialGrid& grid, double cfl);

/**
 * Equilibrium value at a moving node x_ext with x_left <= x_ext <= x_right.
 *
 * The center values are extended along the f slopes of the segments holding
 * each center: E- = e_left + sigma_left (x_ext - x_left) and
 * E+ = e_right + sigma_right (x_ext - x_right). Same-sign (or zero) slopes
 * give the distance-weighted average; at a maximum (sigma_left > 0) the
 * smaller one-sided state is taken, at a minimum the larger.
 */
double resolve_node_maxwellian(double e_left, double e_right, double sigma_left,
                               double sigma_right, double x_left, double x_right,
                               double x_ext) noexcept;

// One split step (exact transport, then exact BGK relaxation) with the
// OpenMP kernels. Each advances time and step_count.
void step_sl(SchemeState& state, double nu, double dt);
void step_fks(SchemeState& state, double nu, double dt);
void step_rfks(SchemeState& state, double nu, double dt);
void step(SchemeState& state, double nu, double dt);

/// Steps of size dt until t_final, truncating the last; returns the step count.
std::int64_t advance_to(SchemeState& state, double nu, double dt, double t_final);

/// Number of steps advance_to takes from t = 0.
std::int64_t steps_to(double dt, double t_final) noexcept;

/// Length of step s out of n: dt, except a shortened last step landing on t_final.
double step_length(std::int64_t s, std::int64_t n, double dt, double t_final) noexcept;

}  // namespace kfks
