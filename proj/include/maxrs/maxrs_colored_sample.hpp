#pragma once

// (1/2 - eps)-approximate colored MaxRS for unit d-balls: the grid samples of
// the weighted solver, with colored depth counted through a per-sample flag
// while the balls are processed grouped by color.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "cell_sampling.hpp"
#include "geom_core.hpp"

namespace maxrs {

namespace detail {

/// Colored depth of every sample of one cell. `order` lists the balls meeting
/// the cell sorted by color; a sample's flag remembers the last color that
/// counted it, so each color adds at most 1.
inline std::vector<int> flagged_depths(const CellSamples& s, const std::vector<ColoredBall>& balls,
                                       const std::vector<std::uint32_t>& order, std::vector<double>& d2,
                                       std::vector<unsigned char>& inside) {
  std::vector<int> depth(s.t, 0);
  std::vector<int> flag(s.t, -1);
  for (auto j : order) {
    const int color = balls[j].color;
    inside_mask(s, balls[j].center.data(), d2, inside);
    for (std::size_t i = 0; i < s.t; ++i) {
      if (inside[i] && flag[i] != color) {
        flag[i] = color;
        ++depth[i];
      }
    }
  }
  return depth;
}

inline void sort_by_color(std::vector<std::uint32_t>& ids, const std::vector<ColoredBall>& balls) {
  std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (balls[a].color != balls[b].color) return balls[a].color < balls[b].color;
    return a < b;
  });
}

struct ColoredPolicy {
  const std::vector<ColoredBall>& balls;
  std::vector<std::uint32_t> order;
  std::vector<int> colors;
  std::vector<double> d2;
  std::vector<unsigned char> inside;

  double weight(std::size_t) const { return 1.0; }

  double refine(const std::vector<std::uint32_t>& reach) {
    colors.clear();
    for (auto j : reach) colors.push_back(balls[j].color);
    std::sort(colors.begin(), colors.end());
    return static_cast<double>(std::unique(colors.begin(), colors.end()) - colors.begin());
  }

  std::pair<double, std::size_t> evaluate(const PointD&, const CellSamples& s, const std::vector<std::uint32_t>& reach) {
    order = reach;
    sort_by_color(order, balls);
    const auto depth = flagged_depths(s, balls, order, d2, inside);
    const auto it = std::max_element(depth.begin(), depth.end());
    return {static_cast<double>(*it), static_cast<std::size_t>(it - depth.begin())};
  }
};

inline void check_colored(const std::vector<ColoredBall>& balls, int dim) {
  for (const auto& b : balls) {
    validate(b);
    if (b.center.dim() != dim) throw ParameterError("colored ball dimension mismatch");
  }
}

}  // namespace detail

struct ColoredHit {
  PointD point;
  int depth = 0;
  CellKey cell;
  std::size_t index = 0;
};

/// Deepest sample by colored depth over all non-empty cells; samples are the
/// epoch-1 samples of `seed` with t derived from n = |balls|.
inline std::optional<ColoredHit> colored_solve(const std::vector<ColoredBall>& balls, int dim, double eps,
                                               double c_sample, std::uint64_t seed, SearchStats* stats = nullptr) {
  const GridCollection gc = sampling_grids(dim, eps);
  if (balls.empty()) return std::nullopt;
  detail::check_colored(balls, dim);
  std::vector<PointD> centers;
  centers.reserve(balls.size());
  for (const auto& b : balls) centers.push_back(b.center);
  detail::ColoredPolicy policy{balls, {}, {}, {}, {}};
  const auto hit =
      pruned_sample_search(gc, samples_per_cell(c_sample, eps, balls.size()), seed, centers, policy, stats);
  if (!hit) return std::nullopt;
  return ColoredHit{hit->point, static_cast<int>(hit->depth), hit->cell, hit->index};
}

struct ColoredSample {
  CellKey cell;
  std::size_t index = 0;
  PointD point;
  int depth = 0;
};

/// Every sample of every non-empty cell with its flag-based colored depth,
/// processing balls in the given order after a stable sort by color. Meant for
/// small inputs.
inline std::vector<ColoredSample> colored_sample_table(const std::vector<ColoredBall>& balls, int dim, double eps,
                                                       double c_sample, std::uint64_t seed) {
  const GridCollection gc = sampling_grids(dim, eps);
  detail::check_colored(balls, dim);
  std::vector<ColoredSample> out;
  if (balls.empty()) return out;
  const std::size_t t = samples_per_cell(c_sample, eps, balls.size());
  std::set<CellKey> cells;
  for (const auto& b : balls) {
    const WeightedBall wb{b.id, b.center, 1.0};
    for (std::int64_t g = 0; g < gc.grid_count(); ++g)
      for (const auto& key : cells_intersecting_ball(gc, g, wb)) cells.insert(key);
  }
  std::vector<std::uint32_t> order(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return balls[a].color < balls[b].color; });
  std::vector<double> d2;
  std::vector<unsigned char> inside;
  for (const auto& key : cells) {
    const CellSamples s = draw_cell_samples(gc, key, t, seed, 1);
    const auto depth = detail::flagged_depths(s, balls, order, d2, inside);
    for (std::size_t i = 0; i < t; ++i) out.push_back({key, i, s.point(i), depth[i]});
  }
  return out;
}

}  // namespace maxrs
