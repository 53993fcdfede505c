#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kfks/error.hpp"
#include "kfks/reconstruction.hpp"
#include "oracles.hpp"

using namespace kfks;

namespace {

CellDistribution single_velocity(const std::vector<double>& g) {
  CellDistribution f(g.size(), 1);
  for (std::size_t j = 0; j < g.size(); ++j) f(j, 0) = g[j];
  return f;
}

std::vector<double> random_values(std::size_t m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> g(m);
  for (double& x : g) x = U(rng);
  return g;
}

std::vector<double> samples(const NodalDistribution& nd) {
  std::vector<double> out(nd.cells());
  sample_centers(nd, 0, out);
  return out;
}

}  // namespace

TEST(Nodal, ZeroOffsetSamplingIsIdentity) {
  const SpatialGrid grid(16, 1.0, BoundaryKind::periodic);
  const auto g = random_values(16, 1);
  for (NodalKind kind : {NodalKind::piecewise_constant, NodalKind::piecewise_linear}) {
    const auto nd = NodalDistribution::from_cells(kind, grid, single_velocity(g));
    EXPECT_EQ(samples(nd), g);
    const CellDistribution f = sample_nodal(nd);
    for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(f(j, 0), g[j]);
  }
}

TEST(Nodal, ShiftByOneCellRotates) {
  const SpatialGrid grid(10, 1.0, BoundaryKind::periodic);
  const auto g = random_values(10, 2);
  for (NodalKind kind : {NodalKind::piecewise_constant, NodalKind::piecewise_linear}) {
    auto nd = NodalDistribution::from_cells(kind, grid, single_velocity(g));
    shift(nd, 0, 2.0, 0.05);  // v dt = dx
    const auto s = samples(nd);
    for (std::size_t j = 0; j < 10; ++j) EXPECT_NEAR(s[j], g[(j + 9) % 10], 1e-14);
  }
}

TEST(Nodal, HalfCellShiftAveragesLinearNodes) {
  const SpatialGrid grid(8, 1.0, BoundaryKind::periodic);
  const auto g = random_values(8, 3);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid, single_velocity(g));
  shift(nd, 0, 1.0, grid.dx() / 2.0);
  const auto s = samples(nd);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(s[j], 0.5 * (g[j] + g[(j + 7) % 8]), 1e-14);
}

TEST(Nodal, ZeroVelocityIsIdentity) {
  const SpatialGrid grid(12, 1.0, BoundaryKind::periodic);
  const auto g = random_values(12, 4);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid, single_velocity(g));
  for (int i = 0; i < 5; ++i) shift(nd, 0, 0.0, 0.01);
  EXPECT_EQ(nd.offset(0), 0.0);
  EXPECT_EQ(samples(nd), g);
}

TEST(Nodal, ShiftRejectsNonPositiveDt) {
  const SpatialGrid grid(4, 1.0, BoundaryKind::periodic);
  NodalDistribution nd(NodalKind::piecewise_constant, grid, 1);
  EXPECT_THROW(shift(nd, 0, 1.0, 0.0), PreconditionError);
}

TEST(Nodal, TwoShiftsEqualOneDoubleShift) {
  const SpatialGrid grid(20, 1.0, BoundaryKind::periodic);
  const auto g = random_values(20, 5);
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> X(0.0, 1.0);
  for (NodalKind kind : {NodalKind::piecewise_constant, NodalKind::piecewise_linear}) {
    auto a = NodalDistribution::from_cells(kind, grid, single_velocity(g));
    auto b = a;
    shift(a, 0, 3.7, 0.011);
    shift(a, 0, 3.7, 0.011);
    shift(b, 0, 3.7, 0.022);
    for (int i = 0; i < 100; ++i) {
      const double x = X(rng);
      EXPECT_NEAR(evaluate(a, 0, x), evaluate(b, 0, x), 1e-13) << x;
    }
  }
}

TEST(Nodal, EvaluateMatchesShiftedOracle) {
  const std::size_t m = 25;
  const SpatialGrid grid(m, 1.0, BoundaryKind::periodic);
  const auto g = random_values(m, 7);
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> X(0.0, 1.0);
  const double v = -6.3, dt = 0.0071;
  for (NodalKind kind : {NodalKind::piecewise_constant, NodalKind::piecewise_linear}) {
    auto nd = NodalDistribution::from_cells(kind, grid, single_velocity(g));
    for (int n = 1; n <= 40; ++n) {
      shift(nd, 0, v, dt);
      for (int i = 0; i < 20; ++i) {
        const double x = X(rng);
        const double y = x - v * (n * dt);
        const double want = kind == NodalKind::piecewise_constant ? oracle::piecewise_constant(g, 1.0, y)
                                                                  : oracle::piecewise_linear(g, 1.0, y);
        ASSERT_NEAR(evaluate(nd, 0, x), want, 1e-12) << "n=" << n << " x=" << x;
      }
      const auto s = samples(nd);
      for (std::size_t j = 0; j < m; ++j) ASSERT_NEAR(s[j], evaluate(nd, 0, grid.center(j)), 1e-14);
    }
  }
}

TEST(Nodal, EvaluateAtNodeAndMidpoint) {
  const SpatialGrid grid(4, 1.0, BoundaryKind::periodic);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid,
                                          single_velocity({1.0, 3.0, 5.0, 2.0}));
  shift(nd, 0, 1.0, 0.1);
  EXPECT_NEAR(evaluate(nd, 0, nd.node_position(0, 1)), 3.0, 1e-14);
  const double mid = 0.5 * (nd.node_position(0, 0) + nd.node_position(0, 1));
  EXPECT_NEAR(evaluate(nd, 0, mid), 2.0, 1e-14);
  EXPECT_THROW(evaluate(nd, 0, -0.01), DomainError);
  EXPECT_THROW(evaluate(nd, 0, 1.01), DomainError);
}

TEST(Nodal, ConstantIsPreserved) {
  const SpatialGrid grid(9, 2.0, BoundaryKind::periodic);
  for (NodalKind kind : {NodalKind::piecewise_constant, NodalKind::piecewise_linear}) {
    auto nd = NodalDistribution::from_cells(kind, grid, single_velocity(std::vector<double>(9, 0.37)));
    shift(nd, 0, -1.3, 0.123);
    for (double x : {0.0, 0.3, 1.0, 1.77, 2.0}) EXPECT_DOUBLE_EQ(evaluate(nd, 0, x), 0.37);
  }
}

TEST(Nodal, DiscreteMaximumPrinciple) {
  const SpatialGrid grid(30, 1.0, BoundaryKind::periodic);
  const auto g = random_values(30, 9);
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> X(0.0, 1.0);
  for (NodalKind kind : {NodalKind::piecewise_constant, NodalKind::piecewise_linear}) {
    auto nd = NodalDistribution::from_cells(kind, grid, single_velocity(g));
    shift(nd, 0, 0.77, 0.3);
    for (int i = 0; i < 500; ++i) {
      const double f = evaluate(nd, 0, X(rng));
      EXPECT_GE(f, *lo);
      EXPECT_LE(f, *hi);
    }
  }
}

TEST(Nodal, ExtremePoints) {
  const SpatialGrid grid(10, 1.0, BoundaryKind::periodic);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid,
                                          single_velocity(random_values(10, 11)));
  auto xs = locate_extreme_points(nd, 0);
  for (std::size_t j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(xs[j], grid.center(j));

  shift(nd, 0, 1.0, grid.dx() / 3.0);
  xs = locate_extreme_points(nd, 0);
  ASSERT_EQ(xs.size(), 10u);
  for (std::size_t i = 1; i < 10; ++i) EXPECT_NEAR(xs[i] - xs[i - 1], grid.dx(), 1e-14);
  EXPECT_NEAR(xs[0], grid.center(0) + grid.dx() / 3.0, 1e-14);
}

TEST(Nodal, ExtremePointsAfterManyShifts) {
  const SpatialGrid grid(7, 1.0, BoundaryKind::periodic);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid,
                                          single_velocity(random_values(7, 12)));
  const double v = 2.3, dt = 0.013;
  for (int n = 0; n < 1000; ++n) shift(nd, 0, v, dt);
  EXPECT_EQ(nd.step_count(0), 1000);
  EXPECT_EQ(nd.offset(0), std::fmod(1000.0 * (v * dt), 1.0));
  auto xs = locate_extreme_points(nd, 0);
  std::vector<double> want;
  for (std::size_t j = 0; j < 7; ++j) want.push_back(oracle::wrap(grid.center(j) + 1000 * v * dt, 1.0));
  std::sort(want.begin(), want.end());
  for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(xs[j], want[j], 1e-12);
}

TEST(Nodal, OffsetIsClosedFormAfterMillionShifts) {
  const SpatialGrid grid(4, 1.0, BoundaryKind::periodic);
  NodalDistribution nd(NodalKind::piecewise_constant, grid, 1);
  const double v = 13.7, dt = 1.3e-5;
  for (int n = 0; n < 1000000; ++n) nd.shift(0, v, dt);
  EXPECT_EQ(nd.offset(0), std::fmod(1e6 * (v * dt), 1.0));
}

TEST(Nodal, TruncatedStepGoesToExtraDisplacement) {
  const SpatialGrid grid(16, 1.0, BoundaryKind::periodic);
  const auto g = random_values(16, 13);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid, single_velocity(g));
  for (int n = 0; n < 3; ++n) shift(nd, 0, 1.5, 0.01);
  shift(nd, 0, 1.5, 0.004);
  EXPECT_EQ(nd.step_count(0), 3);
  EXPECT_NEAR(nd.offset(0), 1.5 * 0.034, 1e-15);
}

TEST(Outflow, SingleCellShiftDuplicatesEdgeValue) {
  const SpatialGrid grid(6, 1.0, BoundaryKind::outflow);
  const std::vector<double> g{1, 1, 1, 0, 0, 0};
  for (double v : {1.0, -1.0}) {
    auto nd = NodalDistribution::from_cells(NodalKind::piecewise_constant, grid, single_velocity(g));
    shift(nd, 0, v, grid.dx());
    const auto s = samples(nd);
    if (v > 0) EXPECT_EQ(s, (std::vector<double>{1, 1, 1, 1, 0, 0}));
    else EXPECT_EQ(s, (std::vector<double>{1, 1, 0, 0, 0, 0}));
  }
}

TEST(Outflow, ReanchorHelper) {
  std::vector<double> nodes{5, 6, 7, 1, 2, 3, 4};
  // positive velocity: first node moved from 3 to 1, so nodes 1, 2 crossed the right edge
  reanchor_outflow(nodes, 3, 1, 1.0);
  EXPECT_EQ(nodes, (std::vector<double>{5, 1, 1, 1, 2, 3, 4}));
  std::vector<double> back{1, 2, 3, 4, 5};
  // negative velocity: first node moved from 0 to 2, so nodes 0, 1 crossed the left edge
  reanchor_outflow(back, 0, 2, -1.0);
  EXPECT_EQ(back, (std::vector<double>{5, 5, 3, 4, 5}));
}

TEST(Outflow, ConstantBeyondOutermostNodes) {
  const SpatialGrid grid(5, 1.0, BoundaryKind::outflow);
  auto nd = NodalDistribution::from_cells(NodalKind::piecewise_linear, grid,
                                          single_velocity({2, 3, 4, 5, 6}));
  shift(nd, 0, 1.0, 0.05);  // nodes at 0.15, ..., 0.95; left edge gap [0, 0.15)
  EXPECT_DOUBLE_EQ(evaluate(nd, 0, 0.02), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(nd, 0, 0.98), 6.0);
  EXPECT_NEAR(evaluate(nd, 0, 0.25), 2.5, 1e-14);
}

TEST(VanLeer, Examples) {
  const double dx = 0.1;
  EXPECT_NEAR(van_leer_slope(1, 2, 3, dx), 1.0 / dx, 1e-12);
  EXPECT_EQ(van_leer_slope(1, 3, 2, dx), 0.0);
  EXPECT_EQ(van_leer_slope(2, 2, 2, dx), 0.0);
  EXPECT_NEAR(van_leer_slope(0, 1, 4, 1.0), 2.0 * 1 * 3 / 4.0, 1e-15);
}

TEST(VanLeer, BoundOnRandomData) {
  const SpatialGrid grid(50, 1.0, BoundaryKind::periodic);
  CellDistribution f(50, 3);
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double& x : f.data()) x = U(rng);
  const LimitedSlopes s = van_leer_slopes(f, grid);
  for (std::size_t j = 0; j < 50; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      const double dm = f(j, k) - f((j + 49) % 50, k), dp = f((j + 1) % 50, k) - f(j, k);
      if (dm * dp <= 0) EXPECT_EQ(s(j, k), 0.0);
      else EXPECT_LE(std::abs(s(j, k)), 2.0 * std::min(std::abs(dm), std::abs(dp)) / grid.dx() * (1 + 1e-14));
    }
}

TEST(NeighborCell, WrapOrClamp) {
  const SpatialGrid per(5, 1.0, BoundaryKind::periodic), out(5, 1.0, BoundaryKind::outflow);
  EXPECT_EQ(neighbor_cell(per, 0, -1), 4u);
  EXPECT_EQ(neighbor_cell(per, 4, 1), 0u);
  EXPECT_EQ(neighbor_cell(out, 0, -1), 0u);
  EXPECT_EQ(neighbor_cell(out, 4, 1), 4u);
  EXPECT_EQ(neighbor_cell(out, 2, 1), 3u);
}

TEST(FootPoint, Examples) {
  const SpatialGrid grid(4, 1.0, BoundaryKind::periodic);
  const CellDistribution f = single_velocity({0.0, 4.0, 1.0, 7.0});
  const double dx = grid.dx();
  EXPECT_EQ(evaluate_foot_point(f, nullptr, grid, 0, 0.0, 0.1, 2), 1.0);
  EXPECT_NEAR(evaluate_foot_point(f, nullptr, grid, 0, 1.0, dx, 2), 4.0, 1e-15);
  EXPECT_NEAR(evaluate_foot_point(f, nullptr, grid, 0, 1.0, dx / 2, 1), 2.0, 1e-15);
  EXPECT_THROW(evaluate_foot_point(f, nullptr, grid, 0, 1.0, 1.5 * dx, 1), PreconditionError);
}

TEST(FootPoint, MusclUsesCellPolynomial) {
  const SpatialGrid grid(5, 1.0, BoundaryKind::periodic);
  const CellDistribution f = single_velocity({0.0, 1.0, 2.0, 3.0, 4.0});
  const LimitedSlopes s = van_leer_slopes(f, grid);
  const double dx = grid.dx();
  // foot of center 2 at x_2 - 0.3 dx lies in cell 2, slope 1/dx
  EXPECT_NEAR(evaluate_foot_point(f, &s, grid, 0, 1.0, 0.3 * dx, 2), 2.0 - 0.3, 1e-13);
  // foot at x_2 - 0.7 dx lies in cell 1
  EXPECT_NEAR(evaluate_foot_point(f, &s, grid, 0, 1.0, 0.7 * dx, 2), 1.0 + 0.3, 1e-13);
}

TEST(FootPoint, MusclStaysInsideStencil) {
  const SpatialGrid grid(40, 1.0, BoundaryKind::periodic);
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> U(0.0, 1.0), C(-1.0, 1.0);
  CellDistribution f(40, 1);
  for (double& x : f.data()) x = U(rng);
  const LimitedSlopes s = van_leer_slopes(f, grid);
  for (int i = 0; i < 400; ++i) {
    const std::size_t j = i % 40;
    const double d = C(rng);
    const double got = evaluate_foot_point(f, &s, grid, 0, d, grid.dx(), j);
    const double a = f(neighbor_cell(grid, j, -1), 0), b = f(j, 0), c = f(neighbor_cell(grid, j, 1), 0);
    EXPECT_GE(got, std::min({a, b, c}) - 1e-15);
    EXPECT_LE(got, std::max({a, b, c}) + 1e-15);
  }
}

TEST(DepartureAverage, UpwindCoincidesWithFootPoint) {
  const SpatialGrid grid(6, 1.0, BoundaryKind::periodic);
  const CellDistribution f = single_velocity({0.2, 0.9, 0.4, 0.1, 0.8, 0.5});
  for (double d : {-0.9, -0.3, 0.0, 0.45, 1.0})
    for (std::size_t j = 0; j < 6; ++j)
      EXPECT_NEAR(departure_cell_average(f, nullptr, grid, 0, d, grid.dx(), j),
                  evaluate_foot_point(f, nullptr, grid, 0, d, grid.dx(), j), 1e-15);
}

TEST(DepartureAverage, MusclIsConservative) {
  const SpatialGrid grid(32, 1.0, BoundaryKind::periodic);
  std::mt19937 rng(16);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CellDistribution f(32, 1);
  for (double& x : f.data()) x = U(rng);
  const LimitedSlopes s = van_leer_slopes(f, grid);
  double before = 0.0;
  for (double x : f.data()) before += x;
  for (double d : {-0.8, 0.37, 1.0}) {
    double after = 0.0;
    for (std::size_t j = 0; j < 32; ++j) after += departure_cell_average(f, &s, grid, 0, d, grid.dx(), j);
    EXPECT_NEAR(after, before, 1e-13);
  }
}

TEST(DepartureAverage, MatchesQuadratureOfReconstruction) {
  const SpatialGrid grid(10, 1.0, BoundaryKind::periodic);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  CellDistribution f(10, 1);
  for (double& x : f.data()) x = U(rng);
  const LimitedSlopes s = van_leer_slopes(f, grid);
  const double dx = grid.dx();
  auto recon = [&](double x) {
    x = oracle::wrap(x, 1.0);
    const auto c = std::min<std::size_t>(static_cast<std::size_t>(x / dx), 9);
    return f(c, 0) + s(c, 0) * (x - grid.center(c));
  };
  for (double d : {-0.6, 0.25, 0.9}) {
    const double shift = d * dx;
    for (std::size_t j = 0; j < 10; ++j) {
      // midpoint rule on a fine partition of the departure cell
      const int n = 20000;
      double sum = 0.0;
      const double a = grid.center(j) - 0.5 * dx - shift;
      for (int i = 0; i < n; ++i) sum += recon(a + (i + 0.5) * dx / n);
      EXPECT_NEAR(departure_cell_average(f, &s, grid, 0, d, dx, j), sum / n, 1e-6);
    }
  }
}
