#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kfks/schemes.hpp"

namespace kfks {

/// Timing of one run; the loop is timed without initialization or I/O.
struct RunMetrics {
  std::string scheme;
  std::size_t n_cells = 0;
  std::size_t n_velocities = 0;
  double nu = 0.0;
  std::int64_t n_cycles = 0;
  double wall_time = 0.0;
  double time_per_cycle = 0.0;
  double time_per_cell = 0.0;
};

/// time_per_cycle = wall / cycles, time_per_cell = time_per_cycle / cells.
RunMetrics make_metrics(SchemeKind scheme, std::size_t n_cells, std::size_t n_velocities,
                        std::int64_t n_cycles, double wall_time);

struct ConvergenceEstimate {
  double order = 0.0;  // +inf when the fine difference vanishes
  double coarse_diff = 0.0;
  double fine_diff = 0.0;
  bool infinite = false;
};

/// p = log2(sum|a - b| / sum|b - c|) for three samples taken at the same points.
ConvergenceEstimate convergence_order(std::span<const double> coarse, std::span<const double> mid,
                                      std::span<const double> fine);

/**
 * Same estimate on raw cell arrays of sizes M, 2M, 4M, pairing coarse cell i
 * with mid cell 2i + 1 and fine cell 4i + 3 (index nesting i -> 2i -> 4i in
 * one-based numbering).
 */
ConvergenceEstimate convergence_order_nested(std::span<const double> coarse,
                                             std::span<const double> mid,
                                             std::span<const double> fine);

/// sum_j |f_{j+1} - f_j| with periodic wrap.
double total_variation(std::span<const double> field) noexcept;

/**
 * Number of cells strictly inside the 10-90 % band of the jump between the
 * plateau values lo and hi. The field must be monotone over the span
 * (reversals up to `tolerance` times the jump are ignored); PreconditionError
 * otherwise.
 */
std::size_t front_width(std::span<const double> field, double lo, double hi,
                        double tolerance = 1e-9);

struct Profile {
  std::vector<double> x;
  std::vector<double> rho;
  std::vector<double> u;
  std::vector<double> temperature;
  std::vector<double> raw_second_moment;  // dv sum v^2 f = 2E
};

/// Moments of the state at the cell centers.
Profile profile(const SchemeState& state);

/**
 * Density at arbitrary points in [0, L] through the scheme's own
 * representation: the shifted nodal function for FKS/R-FKS, the limited
 * in-cell polynomial for SL-MUSCL and linear interpolation between
 * centers for SL-Upwind.
 */
std::vector<double> density_at(const SchemeState& state, std::span<const double> xs);

/// Table 3 style cost estimate at fixed accuracy.
struct CostEstimate {
  double cells = 0.0;   // N_c = 2 spread / delta_l
  double cycles = 0.0;  // cycles_per_cell * N_c
  double seconds = 0.0; // N_c * cycles * time_per_cell
};

CostEstimate fixed_accuracy_cost(double spread_cells, double delta_l, double cycles_per_cell,
                                 double time_per_cell);

}  // namespace kfks
