#pragma once

#include <span>
#include <vector>

#include "kfks/grid.hpp"

namespace kfks {

/// rho / sqrt(2 pi T) * exp(-(v - u)^2 / (2 T)). Throws DomainError unless rho, T > 0.
double maxwellian_pointwise(double rho, double u, double temperature, double v);

/// Discrete equilibrium E_k = exp(a + b v_k + c v_k^2).
struct EquilibriumParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Analytic (untruncated) Maxwellian written in exponential-family form.
EquilibriumParams analytic_params(double rho, double u, double temperature);

struct EquilibriumOptions {
  double tolerance = 1e-13;  // scaled residual, infinity norm
  int max_iterations = 50;
  double tail_warning = 1e-6;  // analytic mass fraction outside the lattice
};

struct EquilibriumInfo {
  EquilibriumParams params;
  double residual = 0.0;  // final scaled residual
  int iterations = 0;
  bool truncation_warning = false;
};

/**
 * Fill `out` with the discrete Maxwellian whose lattice moments
 * dv * sum_k (1, v_k, v_k^2/2) E_k reproduce `target`.
 *
 * Damped Newton on the exponential family, seeded from the analytic
 * Maxwellian and solved in the variable (v - u)/sqrt(T) so the 3x3
 * system stays well conditioned for any (rho, u, T). The residual is
 * measured per component relative to rho, rho (sqrt(T) + |u|) and E.
 *
 * Throws DegenerateMomentsError for rho <= 0 or T <= 0 and
 * CorrectionFailureError if Newton stalls.
 */
EquilibriumInfo discrete_maxwellian(const Conserved& target, const VelocityGrid& vgrid,
                                    std::span<double> out,
                                    const EquilibriumOptions& options = {});

struct DiscreteMaxwellian {
  std::vector<double> values;
  EquilibriumInfo info;
};

DiscreteMaxwellian discrete_maxwellian(const Conserved& target, const VelocityGrid& vgrid,
                                       const EquilibriumOptions& options = {});

/// Largest per-component relative mismatch between target and the moments of `values`.
double moment_residual(const Conserved& target, std::span<const double> values,
                       const VelocityGrid& vgrid);

}  // namespace kfks
