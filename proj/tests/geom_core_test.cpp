#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "maxrs/geom_core.hpp"

using namespace maxrs;

TEST(GridCollection, ShiftCountsFromSideAndDelta) {
  const double eps = 0.5;
  const auto gc = make_grid_collection(2, 2 * eps / std::sqrt(2.0), eps * eps);
  EXPECT_EQ(gc.shifts_per_axis(), 4);
  EXPECT_EQ(gc.grid_count(), 16);

  const auto one = make_grid_collection(1, 0.3, 0.3);
  EXPECT_EQ(one.grid_count(), 1);
  EXPECT_EQ(one.offset(0)[0], 0.0);

  const auto cube = make_grid_collection(3, 1.0, 0.25);
  EXPECT_EQ(cube.shifts_per_axis(), 7);
  EXPECT_EQ(cube.grid_count(), 343);
  EXPECT_LE(cube.step(), 0.25 / std::sqrt(3.0));
}

TEST(GridCollection, RejectsBadParameters) {
  EXPECT_THROW(make_grid_collection(0, 1.0, 0.5), ParameterError);
  EXPECT_THROW(make_grid_collection(9, 1.0, 0.5), ParameterError);
  EXPECT_THROW(make_grid_collection(2, -1.0, 0.5), ParameterError);
  EXPECT_THROW(make_grid_collection(2, 1.0, 0.0), ParameterError);
  EXPECT_THROW(make_grid_collection(2, 0.5, 1.0), ParameterError);
}

TEST(GridCollection, OffsetsAreDistinct) {
  const auto gc = make_grid_collection(2, 1.0, 0.3);
  std::set<std::pair<double, double>> seen;
  for (std::int64_t g = 0; g < gc.grid_count(); ++g) {
    const auto c = gc.offset(g);
    seen.insert({c[0], c[1]});
    EXPECT_GE(c[0], 0.0);
    EXPECT_LT(c[0], gc.side());
  }
  EXPECT_EQ(static_cast<std::int64_t>(seen.size()), gc.grid_count());
}

TEST(CellOf, Examples) {
  const auto gc1 = make_grid_collection(1, 2.0, 2.0);
  const auto a = cell_of(gc1, 0, PointD{0.5});
  EXPECT_EQ(a.key.coords[0], 0);
  EXPECT_DOUBLE_EQ(a.center[0], 1.0);

  // s = 1 with two shifts of 0.5 per axis; grid 3 has offset (0.5, 0.5)
  const auto gc2 = make_grid_collection(2, 1.0, std::sqrt(2.0) / 2.0);
  ASSERT_EQ(gc2.shifts_per_axis(), 2);
  const auto b = cell_of(gc2, 3, PointD{0.0, 0.0});
  EXPECT_EQ(b.key.coords[0], -1);
  EXPECT_EQ(b.key.coords[1], -1);
  EXPECT_DOUBLE_EQ(b.center[0], 0.0);
  EXPECT_DOUBLE_EQ(b.center[1], 0.0);
}

TEST(CellOf, HalfOpenCells) {
  const auto gc = make_grid_collection(1, 1.0, 1.0);
  EXPECT_EQ(cell_of(gc, 0, PointD{1.0}).key.coords[0], 1);
  EXPECT_EQ(cell_of(gc, 0, PointD{0.999}).key.coords[0], 0);
  EXPECT_EQ(cell_of(gc, 0, PointD{-1e-12}).key.coords[0], -1);
}

TEST(CellOf, SomeGridIsDeltaNear) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  const auto gc = make_grid_collection(3, 0.4, 0.1);
  for (int trial = 0; trial < 500; ++trial) {
    const PointD p{u(rng), u(rng), u(rng)};
    double best = 1e9;
    for (std::int64_t g = 0; g < gc.grid_count(); ++g) best = std::min(best, distance(p, cell_of(gc, g, p).center));
    EXPECT_LE(best, 0.1);
  }
}

TEST(CellsIntersectingBall, ClosedDistanceContract) {
  const auto gc = make_grid_collection(1, 2.0, 2.0);
  const auto cells = cells_intersecting_ball(gc, 0, WeightedBall{1, PointD{1.0}, 1.0});
  std::set<std::int64_t> got;
  for (const auto& k : cells) got.insert(k.coords[0]);
  // [-2,0] and [2,4] are both exactly at distance 1 from the center
  EXPECT_EQ(got, (std::set<std::int64_t>{-1, 0, 1}));
}

TEST(CellsIntersectingBall, MatchesBruteForcePatch) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const double eps = 0.3;
  const auto gc = make_grid_collection(2, 2 * eps / std::sqrt(2.0), eps * eps);
  for (int trial = 0; trial < 50; ++trial) {
    const WeightedBall b{1, PointD{u(rng), u(rng)}, 1.0};
    const std::int64_t g = trial % gc.grid_count();
    const auto cells = cells_intersecting_ball(gc, g, b);
    std::set<CellKey> got(cells.begin(), cells.end());
    std::set<CellKey> want;
    const auto home = cell_of(gc, g, b.center).key;
    for (std::int64_t i = -10; i <= 10; ++i)
      for (std::int64_t j = -10; j <= 10; ++j) {
        CellKey k = home;
        k.coords[0] += i;
        k.coords[1] += j;
        if (squared_box_distance(gc, k, b.center.data()) <= 1.0) want.insert(k);
      }
    EXPECT_EQ(got, want);
    const double bound = std::pow(std::ceil(2.0 / gc.side()) + 1.0, 2);
    EXPECT_LE(static_cast<double>(got.size()), bound);
  }
}

TEST(SampleOnSphere, OnSphereAndDeterministic) {
  std::mt19937_64 r1(11), r2(11);
  const PointD c{1.0, -2.0, 0.5};
  const auto a = sample_on_sphere(c, 0.7, 200, r1);
  const auto b = sample_on_sphere(c, 0.7, 200, r2);
  ASSERT_EQ(a.size(), 200u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(distance(a[i], c), 0.7, 1e-9);
    EXPECT_EQ(a[i], b[i]);
  }
}

TEST(SampleOnSphere, EmpiricalSymmetry) {
  std::mt19937_64 rng(5);
  const PointD c{0.0, 0.0};
  const auto pts = sample_on_sphere(c, 1.0, 10000, rng);
  double mx = 0, my = 0;
  int upper = 0, diag = 0;
  for (const auto& p : pts) {
    mx += p[0];
    my += p[1];
    upper += p[1] > 0;
    diag += p[0] + 2 * p[1] > 0;
  }
  EXPECT_NEAR(mx / 10000, 0.0, 0.1);
  EXPECT_NEAR(my / 10000, 0.0, 0.1);
  EXPECT_NEAR(upper / 10000.0, 0.5, 0.05);
  EXPECT_NEAR(diag / 10000.0, 0.5, 0.05);
}

TEST(SampleOnSphere, RejectsBadArguments) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_on_sphere(PointD{0.0}, 0.0, 3, rng), ParameterError);
  EXPECT_THROW(sample_on_sphere(PointD{0.0}, 1.0, 0, rng), ParameterError);
}

TEST(CapFraction, TwoDimensionalClosedForm) {
  EXPECT_NEAR(cap_fraction_2d(0.1), 0.45240, 1e-4);
  EXPECT_NEAR(cap_fraction_2d(1e-9), 0.5, 1e-8);
  for (double e = 0.01; e < 0.5; e += 0.01) EXPECT_GE(cap_fraction_2d(e), 0.5 - 2 * e);
  EXPECT_THROW(cap_fraction_2d(0.0), ParameterError);
  EXPECT_THROW(cap_fraction_2d(0.5), ParameterError);
}

TEST(CapFraction, TwoDimensionalMonteCarlo) {
  const double eps = 0.1;
  std::mt19937_64 rng(2);
  const PointD origin{0.0, 0.0};
  const PointD ball{0.0, 1.0 + eps * eps};
  const auto pts = sample_on_sphere(origin, eps, 200000, rng);
  int in = 0;
  for (const auto& p : pts) in += squared_distance(p, ball) <= 1.0;
  EXPECT_NEAR(in / 200000.0, cap_fraction_2d(eps), 5e-3);
}

TEST(CapFraction, HigherDimensionalBound) {
  const double eps = 0.1;
  const double q = cap_plane_height(eps) / eps;
  EXPECT_NEAR(q, 0.14901, 1e-5);
  EXPECT_NEAR(cap_fraction_bound(3, eps), 0.5 - q / 2, 1e-9);
  EXPECT_NEAR(cap_fraction_bound(3, 1e-6), 0.5, 1e-5);
  EXPECT_THROW(cap_fraction_bound(2, eps), ParameterError);

  // the cap cut out by the tangent unit ball is at least the bound
  for (int d : {3, 4, 5}) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(d));
    PointD origin(d), ball(d);
    ball[d - 1] = 1.0 + eps * eps;
    const auto pts = sample_on_sphere(origin, eps, 100000, rng);
    int in = 0;
    for (const auto& p : pts) in += squared_distance(p, ball) <= 1.0;
    EXPECT_GE(in / 100000.0 + 5e-3, cap_fraction_bound(d, eps)) << "d=" << d;
  }
}

TEST(CapIntegral, KnownValues) {
  EXPECT_NEAR(cap_integral(1, 0.3), 0.3, 1e-12);
  // G_3(1) = ∫ (1 - t^2) = 2/3
  EXPECT_NEAR(cap_integral(3, 1.0), 2.0 / 3.0, 1e-9);
  // G_2(1) = ∫ sqrt(1 - t^2) = π/4
  EXPECT_NEAR(cap_integral(2, 1.0), std::acos(-1.0) / 4, 1e-6);
}
