#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kfks {

enum class BoundaryKind { periodic, outflow };

/**
 * Uniform velocity lattice on [-v_max, v_max], endpoints included.
 *
 * Every lattice point carries the same quadrature weight dv (rectangle
 * rule), so a velocity integral is dv times a plain sum.
 */
class VelocityGrid {
 public:
  VelocityGrid(std::size_t n_velocities, double v_max);

  std::size_t size() const noexcept { return v_.size(); }
  double v_min() const noexcept { return -v_max_; }
  double v_max() const noexcept { return v_max_; }
  double dv() const noexcept { return dv_; }
  double operator[](std::size_t k) const noexcept { return v_[k]; }
  std::span<const double> velocities() const noexcept { return v_; }

 private:
  double v_max_;
  double dv_;
  std::vector<double> v_;
};

/// M cells on [0, L]; centers at (j + 1/2) dx for j = 0..M-1.
class SpatialGrid {
 public:
  SpatialGrid(std::size_t n_cells, double length, BoundaryKind boundary);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  BoundaryKind boundary() const noexcept { return boundary_; }
  double center(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * dx_; }
  std::vector<double> centers() const;

 private:
  std::size_t n_;
  double length_;
  double dx_;
  BoundaryKind boundary_;
};

/// Cell-major M x N array of point values f(x_j, v_k).
class CellDistribution {
 public:
  CellDistribution() = default;
  CellDistribution(std::size_t n_cells, std::size_t n_velocities, double fill = 0.0)
      : m_(n_cells), n_(n_velocities), values_(n_cells * n_velocities, fill) {}

  std::size_t cells() const noexcept { return m_; }
  std::size_t velocities() const noexcept { return n_; }

  double& operator()(std::size_t j, std::size_t k) noexcept { return values_[j * n_ + k]; }
  double operator()(std::size_t j, std::size_t k) const noexcept { return values_[j * n_ + k]; }

  std::span<double> cell(std::size_t j) noexcept { return {values_.data() + j * n_, n_}; }
  std::span<const double> cell(std::size_t j) const noexcept {
    return {values_.data() + j * n_, n_};
  }

  std::span<double> data() noexcept { return values_; }
  std::span<const double> data() const noexcept { return values_; }

  bool all_finite() const noexcept;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Conserved moments (rho, rho u, E) of one cell.
struct Conserved {
  double rho = 0.0;
  double mom = 0.0;
  double energy = 0.0;

  double velocity() const noexcept { return mom / rho; }
  // 1D monatomic: E = rho u^2 / 2 + rho T / 2.
  double temperature() const noexcept {
    const double u = mom / rho;
    return 2.0 * energy / rho - u * u;
  }
};

struct MomentField {
  std::vector<double> rho;
  std::vector<double> mom;
  std::vector<double> energy;
  std::vector<double> u;
  std::vector<double> temperature;

  std::size_t size() const noexcept { return rho.size(); }
  Conserved conserved(std::size_t j) const noexcept { return {rho[j], mom[j], energy[j]}; }
};

/// dv * sum_k (1, v_k, v_k^2/2) f_k for a single velocity slice. No validation.
Conserved cell_moments(std::span<const double> f, const VelocityGrid& vgrid) noexcept;

/// Raw moments per cell with no primitive derivation; never throws on rho <= 0.
std::vector<Conserved> conserved_moments(const CellDistribution& f, const VelocityGrid& vgrid);

/**
 * Moments and primitives per cell.
 *
 * Throws InvalidStateError on non-finite input, DegenerateMomentsError on the
 * first cell with rho <= 0 or T <= 0.
 */
MomentField compute_moments(const CellDistribution& f, const VelocityGrid& vgrid);

/// Domain totals dx * sum_j (rho, rho u, E).
Conserved total_moments(const CellDistribution& f, const VelocityGrid& vgrid, double dx);

}  // namespace kfks
