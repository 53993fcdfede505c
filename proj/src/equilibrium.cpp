#include "kfks/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "kfks/error.hpp"

namespace kfks {

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

double norm_inf(const Vec3& r) {
  return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

// Gaussian elimination with partial pivoting; returns false on a singular matrix.
bool solve3(Mat3 a, Vec3 b, Vec3& x) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (!(std::abs(a[piv][col]) > 0.0)) return false;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

// Weights q_k = exp(l0 + l1 xi_k + l2 xi_k^2) in the scaled variable xi.
// Scaled targets are sum q = 1, sum xi q = 0, sum xi^2 q = 1.
struct ScaledEvaluation {
  Vec3 residual{};
  std::array<double, 5> s{};  // power sums sum xi^p q
};

// Symmetric pairwise summation from both ends keeps odd sums exactly zero for
// symmetric weights on a symmetric lattice.
//
// The lattice is uniform in xi with spacing h, so the exponent is quadratic in
// k and the weights follow from ratios q_{k+1}/q_k that themselves change by
// the constant factor exp(2 l2 h^2). Starting at the middle of the lattice and
// walking outwards keeps the weights exactly symmetric when l1 = 0 and xi is
// symmetric.
void fill_weights(const Vec3& lambda, std::span<const double> xi, double h, std::span<double> q) {
  const std::size_t n = xi.size();
  auto direct = [&](std::size_t k) {
    return std::exp(lambda[0] + xi[k] * (lambda[1] + lambda[2] * xi[k]));
  };
  if (n < 4) {
    for (std::size_t k = 0; k < n; ++k) q[k] = direct(k);
    return;
  }
  const std::size_t hi = n / 2;
  const std::size_t lo = n % 2 ? hi : hi - 1;
  q[lo] = direct(lo);
  q[hi] = direct(hi);
  const double growth = std::exp(2.0 * lambda[2] * h * h);
  double up = std::exp(h * (lambda[1] + lambda[2] * (2.0 * xi[hi] + h)));
  for (std::size_t k = hi + 1; k < n; ++k) {
    q[k] = q[k - 1] * up;
    up *= growth;
  }
  double down = std::exp(-h * (lambda[1] + lambda[2] * (2.0 * xi[lo] - h)));
  for (std::size_t k = lo; k-- > 0;) {
    q[k] = q[k + 1] * down;
    down *= growth;
  }
}

ScaledEvaluation evaluate_scaled(const Vec3& lambda, std::span<const double> xi, double h,
                                 std::span<double> q) {
  const std::size_t n = xi.size();
  fill_weights(lambda, xi, h, q);

  ScaledEvaluation ev;
  auto accumulate = [&](std::size_t k, std::array<double, 5>& acc) {
    const double x = xi[k];
    double p = q[k];
    for (double& a : acc) {
      a += p;
      p *= x;
    }
  };
  std::size_t lo = 0, hi = n;
  while (hi - lo >= 2) {
    std::array<double, 5> pair{};
    accumulate(lo, pair);
    accumulate(hi - 1, pair);
    for (int p = 0; p < 5; ++p) ev.s[p] += pair[p];
    ++lo;
    --hi;
  }
  if (hi > lo) {
    std::array<double, 5> single{};
    accumulate(lo, single);
    for (int p = 0; p < 5; ++p) ev.s[p] += single[p];
  }
  ev.residual = {ev.s[0] - 1.0, ev.s[1], ev.s[2] - 1.0};
  return ev;
}

bool all_finite(const ScaledEvaluation& ev) {
  for (double v : ev.s)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

double maxwellian_pointwise(double rho, double u, double temperature, double v) {
  if (!(rho > 0.0)) throw DomainError("maxwellian: density must be positive");
  if (!(temperature > 0.0)) throw DomainError("maxwellian: temperature must be positive");
  const double d = v - u;
  return rho / std::sqrt(2.0 * std::numbers::pi * temperature) *
         std::exp(-d * d / (2.0 * temperature));
}

EquilibriumParams analytic_params(double rho, double u, double temperature) {
  return {std::log(rho / std::sqrt(2.0 * std::numbers::pi * temperature)) -
              u * u / (2.0 * temperature),
          u / temperature, -1.0 / (2.0 * temperature)};
}

EquilibriumInfo discrete_maxwellian(const Conserved& target, const VelocityGrid& vgrid,
                                    std::span<double> out, const EquilibriumOptions& options) {
  const std::size_t n = vgrid.size();
  if (out.size() != n) throw DomainError("equilibrium output size mismatch");
  if (!(target.rho > 0.0) || !std::isfinite(target.rho))
    throw DegenerateMomentsError(0, "equilibrium: non-positive density");
  const double u = target.mom / target.rho;
  const double temperature = 2.0 * target.energy / target.rho - u * u;
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw DegenerateMomentsError(0, "equilibrium: non-positive temperature");

  const double theta = std::sqrt(temperature);
  const double dv = vgrid.dv();

  constexpr std::size_t kStackLattice = 256;
  std::array<double, kStackLattice> xi_stack;
  std::vector<double> xi_heap;
  std::span<double> xi;
  if (n <= kStackLattice) {
    xi = std::span<double>(xi_stack.data(), n);
  } else {
    xi_heap.resize(n);
    xi = xi_heap;
  }
  for (std::size_t k = 0; k < n; ++k) xi[k] = (vgrid[k] - u) / theta;
  const double h = dv / theta;

  // out doubles as the weight buffer q; it is rescaled at the end.
  Vec3 lambda{std::log(dv / (theta * std::sqrt(2.0 * std::numbers::pi))), 0.0, -0.5};
  ScaledEvaluation ev = evaluate_scaled(lambda, xi, h, out);
  double res = all_finite(ev) ? norm_inf(ev.residual) : INFINITY;

  constexpr double kAcceptable = 1e-12;
  int it = 0;
  while (res > options.tolerance) {
    if (it == options.max_iterations) break;
    ++it;
    const Mat3 jac{Vec3{ev.s[0], ev.s[1], ev.s[2]}, Vec3{ev.s[1], ev.s[2], ev.s[3]},
                   Vec3{ev.s[2], ev.s[3], ev.s[4]}};
    Vec3 step{};
    if (!solve3(jac, ev.residual, step)) break;

    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const Vec3 trial{lambda[0] - t * step[0], lambda[1] - t * step[1], lambda[2] - t * step[2]};
      ScaledEvaluation trial_ev = evaluate_scaled(trial, xi, h, out);
      const double trial_res = all_finite(trial_ev) ? norm_inf(trial_ev.residual) : INFINITY;
      if (trial_res < res) {
        lambda = trial;
        ev = trial_ev;
        res = trial_res;
        improved = true;
        break;
      }
    }
    if (!improved) {
      // round-off floor: restore the weights of the current iterate
      ev = evaluate_scaled(lambda, xi, h, out);
      break;
    }
  }
  if (!(res <= kAcceptable)) {
    throw CorrectionFailureError(
        res, "discrete Maxwellian correction failed: residual " + std::to_string(res) +
                 " after " + std::to_string(it) + " iterations (rho=" +
                 std::to_string(target.rho) + ", u=" + std::to_string(u) +
                 ", T=" + std::to_string(temperature) + ")");
  }

  const double scale = target.rho / dv;
  for (double& e : out) e *= scale;

  EquilibriumInfo info;
  info.residual = res;
  info.iterations = it;
  const double c = lambda[2] / temperature;
  const double b = lambda[1] / theta - 2.0 * lambda[2] * u / temperature;
  const double a = std::log(scale) + lambda[0] - lambda[1] * u / theta +
                   lambda[2] * u * u / temperature;
  info.params = {a, b, c};
  const double tail = 0.5 * std::erfc((vgrid.v_max() - u) / (theta * std::numbers::sqrt2)) +
                      0.5 * std::erfc((vgrid.v_max() + u) / (theta * std::numbers::sqrt2));
  info.truncation_warning = tail >= options.tail_warning;
  return info;
}

DiscreteMaxwellian discrete_maxwellian(const Conserved& target, const VelocityGrid& vgrid,
                                       const EquilibriumOptions& options) {
  DiscreteMaxwellian result;
  result.values.resize(vgrid.size());
  result.info = discrete_maxwellian(target, vgrid, result.values, options);
  return result;
}

double moment_residual(const Conserved& target, std::span<const double> values,
                       const VelocityGrid& vgrid) {
  const Conserved got = cell_moments(values, vgrid);
  const double u = target.mom / target.rho;
  const double temperature = 2.0 * target.energy / target.rho - u * u;
  const double mom_scale = target.rho * (std::sqrt(std::max(temperature, 0.0)) + std::abs(u));
  return std::max({std::abs(got.rho - target.rho) / target.rho,
                   std::abs(got.mom - target.mom) / mom_scale,
                   std::abs(got.energy - target.energy) / target.energy});
}

}  // namespace kfks
