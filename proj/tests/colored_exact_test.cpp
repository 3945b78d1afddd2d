#include <gtest/gtest.h>

#include <random>

#include "maxrs/colored_exact.hpp"
#include "maxrs/oracles.hpp"

using namespace maxrs;
using namespace maxrs::disks;

namespace {

std::vector<ColoredBall> random_colored(std::uint64_t seed, int n, int m, double extent) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<ColoredBall> out;
  for (int i = 0; i < n; ++i)
    out.push_back({static_cast<BallId>(i + 1), PointD{u(rng), u(rng)}, 1 + static_cast<int>(rng() % m)});
  return out;
}

std::vector<ColoredBall> as_balls(const std::vector<Disk>& ds) {
  std::vector<ColoredBall> out;
  for (const auto& d : ds) out.push_back({d.id, PointD{d.x, d.y}, d.color});
  return out;
}

Decomposition decompose(const std::vector<Disk>& ds, Traversal how = Traversal::breadth_first) {
  Decomposition dec = build_decomposition(all_union_boundaries(ds), bounding_box(ds));
  assign_depths(dec, how);
  return dec;
}

}  // namespace

TEST(FirstAlgorithm, SingleDisk) {
  const auto r = colored_first_algorithm({{1, PointD{2.0, 3.0}, 1}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->opt, 1);
  EXPECT_LT(distance(r->point, PointD{2.0, 3.0}), 1.0);
}

TEST(FirstAlgorithm, ThreeDiskExample) {
  const std::vector<ColoredBall> b = {{1, PointD{0.0, 0.0}, 1}, {2, PointD{0.5, 0.0}, 1}, {3, PointD{1.0, 0.0}, 2}};
  const auto r = colored_first_algorithm(b);
  EXPECT_EQ(r->opt, 2);
  EXPECT_EQ(oracle::brute_colored_depth(r->point, b), 2);
}

TEST(FirstAlgorithm, EmptyAndBoxPrecondition) {
  EXPECT_FALSE(colored_first_algorithm({}));
  const auto ds = perturb_disks({{1, PointD{0.0, 0.0}, 1}});
  EXPECT_THROW(build_decomposition(all_union_boundaries(ds), Box{-0.5, -2.0, 2.0, 2.0}), PreconditionError);
}

TEST(FirstAlgorithm, CellDepthsMatchWitnesses) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ds = perturb_disks(random_colored(seed, 12, 3, 3.0));
    const auto dec = decompose(ds);
    ASSERT_LE(dec.arcs.size(), 60u + 30u);
    const auto balls = as_balls(ds);
    std::size_t bad = 0;
    for (const auto& c : dec.cells) {
      if (c.xr - c.xl < 1e-9) continue;
      bad += c.depth != oracle::brute_colored_depth(PointD{c.witness.x, c.witness.y}, balls);
    }
    EXPECT_EQ(bad, 0u) << "seed " << seed;
    EXPECT_EQ(dec.inconsistent_links(), 0u) << "seed " << seed;
  }
}

TEST(FirstAlgorithm, TraversalOrderIrrelevant) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = perturb_disks(random_colored(seed + 50, 30, 4, 4.0));
    const auto a = decompose(ds, Traversal::breadth_first);
    const auto b = decompose(ds, Traversal::depth_first);
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].depth, b.cells[i].depth);
    for (const auto& c : a.cells) EXPECT_GE(c.depth, 0);
  }
}

TEST(FirstAlgorithm, CellCountLinearInArcsAndCrossings) {
  const auto ds = perturb_disks(random_colored(7, 60, 5, 6.0));
  const auto dec = decompose(ds);
  // each vertex closes at most deg+1 cells and opens at most deg+1
  EXPECT_LE(dec.cells.size(), 1 + 2 * dec.vertices.size() + 2 * dec.edges.size());
}

TEST(FirstAlgorithm, RandomMatchesBruteOracle) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto balls = random_colored(seed, 50, 5, 5.0);
    const auto r = colored_first_algorithm(balls);
    const auto want = oracle::brute_colored_maxrs_disks(balls);
    ASSERT_EQ(r->opt, static_cast<int>(want->value)) << "seed " << seed;
    EXPECT_EQ(oracle::brute_colored_depth(r->point, balls), r->opt);
  }
}

TEST(DiscardNonCorner, Examples) {
  const Point2 lo{0.0, 0.0};
  EXPECT_EQ(discard_noncorner_disks({{1, 0.5, 0.5, 1}}, lo).size(), 1u);
  EXPECT_TRUE(discard_noncorner_disks({{1, 0.5, 1.9, 1}}, lo).empty());
  EXPECT_TRUE(discard_noncorner_disks({{1, 4.0, 4.0, 1}}, lo).empty());
  // closed: a corner exactly on the circle keeps the disk
  EXPECT_EQ(discard_noncorner_disks({{1, 0.0, 2.0, 1}}, lo).size(), 1u);
}

TEST(ExactColored, SameColorGivesOne) {
  std::vector<ColoredBall> b;
  for (int i = 0; i < 10; ++i) b.push_back({static_cast<BallId>(i + 1), PointD{0.3 * i, 0.1 * i}, 3});
  EXPECT_EQ(exact_colored_maxrs(b)->opt, 1);
  EXPECT_FALSE(exact_colored_maxrs({}));
}

TEST(ExactColored, PlantedOptimum) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = oracle::make_planted({2, 12, 40, seed, true, 0});
    const auto r = exact_colored_maxrs(inst.colored);
    EXPECT_EQ(r->opt, 12);
    EXPECT_EQ(oracle::brute_colored_depth(r->point, inst.colored), 12);
  }
}

TEST(ExactColored, RandomMatchesBruteOracle) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 20 + static_cast<int>(rng() % 81);
    const int m = 1 + static_cast<int>(rng() % 10);
    const auto balls = random_colored(seed * 31, n, m, 4.0 + 0.05 * n);
    ColoredExactStats st;
    const auto r = exact_colored_maxrs(balls, &st);
    const int want = static_cast<int>(oracle::brute_colored_maxrs_disks(balls)->value);
    ASSERT_EQ(r->opt, want) << "seed " << seed;
    EXPECT_EQ(oracle::brute_colored_depth(r->point, balls), want);
    EXPECT_EQ(colored_first_algorithm(balls)->opt, want);
    EXPECT_LE(st.max_surviving_colors, 4 * want);
    EXPECT_GE(st.evaluated, 1u);
  }
}

TEST(ExactColored, SurvivingColorsBoundedByFourOpt) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto balls = random_colored(seed + 900, 80, 12, 6.0);
    const auto ds = perturb_disks(balls);
    const int opt = exact_colored_maxrs(balls)->opt;
    for (const auto& sp : corner_subproblems(ds)) EXPECT_LE(sp.colors, 4 * opt);
  }
}
