#include "kfks/grid.hpp"

#include <cmath>
#include <string>

#include "kfks/error.hpp"

namespace kfks {

const char* to_string(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::invalid_state: return "invalid-state";
    case ErrorCategory::degenerate_moments: return "degenerate-moments";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::correction_failure: return "correction-failure";
    case ErrorCategory::precondition: return "precondition";
  }
  return "unknown";
}

VelocityGrid::VelocityGrid(std::size_t n_velocities, double v_max) : v_max_(v_max) {
  if (n_velocities < 2) throw DomainError("velocity grid needs at least 2 points");
  if (!(v_max > 0.0) || !std::isfinite(v_max)) throw DomainError("v_max must be positive");
  dv_ = 2.0 * v_max / static_cast<double>(n_velocities - 1);
  v_.resize(n_velocities);
  // integer numerator keeps v_k == -v_{N-1-k} bit for bit
  const auto last = static_cast<double>(n_velocities - 1);
  for (std::size_t k = 0; k < n_velocities; ++k)
    v_[k] = v_max * (2.0 * static_cast<double>(k) - last) / last;
}

SpatialGrid::SpatialGrid(std::size_t n_cells, double length, BoundaryKind boundary)
    : n_(n_cells), length_(length), boundary_(boundary) {
  if (n_cells < 2) throw DomainError("spatial grid needs at least 2 cells");
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("domain length must be positive");
  dx_ = length / static_cast<double>(n_cells);
}

std::vector<double> SpatialGrid::centers() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = center(j);
  return xs;
}

bool CellDistribution::all_finite() const noexcept {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

Conserved cell_moments(std::span<const double> f, const VelocityGrid& vgrid) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double v = vgrid[k];
    s0 += f[k];
    s1 += v * f[k];
    s2 += v * v * f[k];
  }
  const double dv = vgrid.dv();
  return {dv * s0, dv * s1, 0.5 * dv * s2};
}

std::vector<Conserved> conserved_moments(const CellDistribution& f, const VelocityGrid& vgrid) {
  std::vector<Conserved> out(f.cells());
  const auto m = static_cast<std::ptrdiff_t>(f.cells());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) out[j] = cell_moments(f.cell(j), vgrid);
  return out;
}

MomentField compute_moments(const CellDistribution& f, const VelocityGrid& vgrid) {
  if (f.velocities() != vgrid.size())
    throw DomainError("distribution has " + std::to_string(f.velocities()) +
                      " velocities, grid has " + std::to_string(vgrid.size()));
  if (!f.all_finite()) throw InvalidStateError("non-finite value in distribution");

  const auto raw = conserved_moments(f, vgrid);
  MomentField out;
  const std::size_t m = raw.size();
  out.rho.resize(m);
  out.mom.resize(m);
  out.energy.resize(m);
  out.u.resize(m);
  out.temperature.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Conserved& c = raw[j];
    out.rho[j] = c.rho;
    out.mom[j] = c.mom;
    out.energy[j] = c.energy;
    if (!(c.rho > 0.0))
      throw DegenerateMomentsError(j, "non-positive density in cell " + std::to_string(j));
    out.u[j] = c.mom / c.rho;
    out.temperature[j] = 2.0 * c.energy / c.rho - out.u[j] * out.u[j];
    if (!(out.temperature[j] > 0.0))
      throw DegenerateMomentsError(j, "non-positive temperature in cell " + std::to_string(j));
  }
  return out;
}

Conserved total_moments(const CellDistribution& f, const VelocityGrid& vgrid, double dx) {
  Conserved total;
  for (const Conserved& c : conserved_moments(f, vgrid)) {
    total.rho += c.rho;
    total.mom += c.mom;
    total.energy += c.energy;
  }
  total.rho *= dx;
  total.mom *= dx;
  total.energy *= dx;
  return total;
}

}  // namespace kfks
