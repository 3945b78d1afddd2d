#pragma once

// Brute-force ground truth: direct depth scans, exact 2D disk MaxRS by
// candidate enumeration, and planted instances with a known optimum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "geom_core.hpp"

namespace maxrs::oracle {

/// Containment slack used when testing computed circle-intersection points.
inline constexpr double kCandidateSlack = 1e-9;

inline double brute_depth(const PointD& p, const std::vector<WeightedBall>& balls) {
  double s = 0.0;
  for (const auto& b : balls)
    if (in_unit_ball(p.data(), b.center.data(), p.dim())) s += b.weight;
  return s;
}

inline int brute_colored_depth(const PointD& p, const std::vector<ColoredBall>& balls) {
  std::vector<int> colors;
  for (const auto& b : balls)
    if (in_unit_ball(p.data(), b.center.data(), p.dim())) colors.push_back(b.color);
  std::sort(colors.begin(), colors.end());
  return static_cast<int>(std::unique(colors.begin(), colors.end()) - colors.begin());
}

/// Intersection points of the unit circles around a and b (0 or 2 points;
/// tangent circles give the touching point twice).
inline std::vector<PointD> unit_circle_intersections(const PointD& a, const PointD& b) {
  const double dx = b[0] - a[0];
  const double dy = b[1] - a[1];
  const double d2 = dx * dx + dy * dy;
  if (d2 > 4.0 || d2 == 0.0) return {};
  const double d = std::sqrt(d2);
  const double h = std::sqrt(std::max(0.0, 1.0 - d2 / 4.0));
  const double mx = a[0] + dx / 2.0;
  const double my = a[1] + dy / 2.0;
  const double ux = -dy / d;
  const double uy = dx / d;
  return {PointD{mx + h * ux, my + h * uy}, PointD{mx - h * ux, my - h * uy}};
}

struct MaxResult {
  PointD point;
  double value = 0.0;
};

namespace detail {

inline bool near_contains(const PointD& p, const PointD& c) {
  const double r = 1.0 + kCandidateSlack;
  return squared_distance(p, c) <= r * r;
}

// Candidate points of a unit-disk arrangement: centers and pairwise circle
// intersections. score(p, neighbor_indices) evaluates one candidate.
template <class Center, class Score>
std::optional<MaxResult> best_candidate(std::size_t n, Center center, Score score) {
  std::vector<std::vector<std::size_t>> near(n);
  for (std::size_t i = 0; i < n; ++i) {
    near[i].push_back(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (squared_distance(center(i), center(j)) <= 4.0 + 1e-9) {
        near[i].push_back(j);
        near[j].push_back(i);
      }
    }
  }
  std::optional<MaxResult> best;
  auto offer = [&](const PointD& p, std::size_t owner) {
    const double v = score(p, near[owner]);
    if (!best || v > best->value) best = MaxResult{p, v};
  };
  for (std::size_t i = 0; i < n; ++i) {
    offer(center(i), i);
    for (std::size_t j : near[i]) {
      if (j <= i) continue;
      for (const auto& p : unit_circle_intersections(center(i), center(j))) offer(p, i);
    }
  }
  return best;
}

}  // namespace detail

/// Exact weighted MaxRS for unit disks: some center or pairwise circle
/// intersection attains the maximum depth.
inline std::optional<MaxResult> brute_maxrs_disks_2d(const std::vector<WeightedBall>& balls) {
  if (balls.empty()) return std::nullopt;
  for (const auto& b : balls)
    if (b.center.dim() != 2) throw ParameterError("brute_maxrs_disks_2d: disks must be 2-dimensional");
  return detail::best_candidate(
      balls.size(), [&](std::size_t i) -> const PointD& { return balls[i].center; },
      [&](const PointD& p, const std::vector<std::size_t>& near) {
        double s = 0.0;
        for (std::size_t j : near)
          if (detail::near_contains(p, balls[j].center)) s += balls[j].weight;
        return s;
      });
}

inline std::optional<MaxResult> brute_colored_maxrs_disks(const std::vector<ColoredBall>& disks) {
  if (disks.empty()) return std::nullopt;
  for (const auto& b : disks)
    if (b.center.dim() != 2) throw ParameterError("brute_colored_maxrs_disks: disks must be 2-dimensional");
  std::vector<int> colors;
  return detail::best_candidate(
      disks.size(), [&](std::size_t i) -> const PointD& { return disks[i].center; },
      [&](const PointD& p, const std::vector<std::size_t>& near) {
        colors.clear();
        for (std::size_t j : near)
          if (detail::near_contains(p, disks[j].center)) colors.push_back(disks[j].color);
        std::sort(colors.begin(), colors.end());
        return static_cast<double>(std::unique(colors.begin(), colors.end()) - colors.begin());
      });
}

/// Maximum depth over a square lattice of step `step` covering all disks.
inline double grid_scan_maxrs_2d(const std::vector<WeightedBall>& balls, double step) {
  if (balls.empty()) return 0.0;
  double lo[2] = {balls[0].center[0], balls[0].center[1]};
  double hi[2] = {lo[0], lo[1]};
  for (const auto& b : balls)
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], b.center[i]);
      hi[i] = std::max(hi[i], b.center[i]);
    }
  const auto nx = static_cast<std::int64_t>((hi[0] - lo[0] + 2.0) / step) + 1;
  const auto ny = static_cast<std::int64_t>((hi[1] - lo[1] + 2.0) / step) + 1;
  double best = 0.0;
  for (std::int64_t ix = 0; ix <= nx; ++ix)
    for (std::int64_t iy = 0; iy <= ny; ++iy) {
      const PointD p{lo[0] - 1.0 + static_cast<double>(ix) * step, lo[1] - 1.0 + static_cast<double>(iy) * step};
      best = std::max(best, brute_depth(p, balls));
    }
  return best;
}

// ---------------------------------------------------------------------------
// Planted instances
// ---------------------------------------------------------------------------

struct PlantedInstance {
  int dim = 2;
  std::vector<WeightedBall> balls;
  std::vector<ColoredBall> colored;
  PointD q;
  int value = 0;
};

struct PlantedOptions {
  int dim = 2;
  int k = 10;
  int n_decoys = 0;
  std::uint64_t seed = 1;
  bool colored = false;
  /// Decoy colors are drawn from [1, decoy_colors]; 0 means [1, k].
  int decoy_colors = 0;
};

/// k unit balls whose centers lie within 0.9 of a common point q, plus decoys
/// on a jittered lattice (spacing 2.5, jitter 0.2) at distance >= 3 from q.
/// Decoys are pairwise disjoint and disjoint from every planted ball, so the
/// optimum is k, attained at q.
inline PlantedInstance make_planted(const PlantedOptions& opt) {
  if (opt.k < 1) throw ParameterError("make_planted: k must be >= 1");
  if (opt.n_decoys < 0) throw ParameterError("make_planted: n_decoys must be >= 0");
  if (opt.dim < 1 || opt.dim > kMaxDim) throw ParameterError("make_planted: bad dimension");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int d = opt.dim;

  PlantedInstance inst;
  inst.dim = d;
  inst.q = PointD(d);
  for (int i = 0; i < d; ++i) inst.q[i] = 10.0 * unit(rng);
  inst.value = opt.k;

  std::vector<PointD> centers;
  std::vector<int> colors;
  for (int b = 0; b < opt.k; ++b) {
    // uniform in the radius-0.9 ball around q
    PointD c(d);
    double r2;
    do {
      r2 = 0.0;
      for (int i = 0; i < d; ++i) {
        c[i] = unit(rng);
        r2 += c[i] * c[i];
      }
    } while (r2 > 1.0);
    for (int i = 0; i < d; ++i) c[i] = inst.q[i] + 0.9 * c[i];
    centers.push_back(c);
    colors.push_back(b + 1);
  }

  if (opt.n_decoys > 0) {
    const double spacing = 2.5;
    const double jitter = 0.2;
    // Smallest lattice box holding enough admissible sites.
    int half = 1;
    std::vector<PointD> sites;
    while (true) {
      sites.clear();
      Lattice z{};
      for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = -half;
      while (true) {
        PointD s(d);
        for (int i = 0; i < d; ++i) s[i] = inst.q[i] + spacing * static_cast<double>(z[static_cast<std::size_t>(i)]);
        if (distance(s, inst.q) >= 3.0 + jitter) sites.push_back(s);
        int i = 0;
        for (; i < d; ++i) {
          auto& zi = z[static_cast<std::size_t>(i)];
          if (++zi <= half) break;
          zi = -half;
        }
        if (i == d) break;
      }
      if (sites.size() >= 2 * static_cast<std::size_t>(opt.n_decoys)) break;
      ++half;
    }
    std::shuffle(sites.begin(), sites.end(), rng);
    std::uniform_real_distribution<double> jit(-jitter / std::sqrt(static_cast<double>(d)),
                                               jitter / std::sqrt(static_cast<double>(d)));
    const int decoy_colors = opt.decoy_colors > 0 ? opt.decoy_colors : opt.k;
    std::uniform_int_distribution<int> color(1, decoy_colors);
    for (int b = 0; b < opt.n_decoys; ++b) {
      PointD c = sites[static_cast<std::size_t>(b)];
      for (int i = 0; i < d; ++i) c[i] += jit(rng);
      centers.push_back(c);
      colors.push_back(color(rng));
    }
  }

  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto id = static_cast<BallId>(i + 1);
    if (opt.colored) inst.colored.push_back({id, centers[i], colors[i]});
    else inst.balls.push_back({id, centers[i], 1.0});
  }
  return inst;
}

/// Checks the structural guarantee of a planted instance: every planted ball
/// contains q and every decoy is at distance > 2 from every other center.
inline bool certify_planted(const PlantedInstance& inst, int k) {
  std::vector<PointD> centers;
  for (const auto& b : inst.balls) centers.push_back(b.center);
  for (const auto& b : inst.colored) centers.push_back(b.center);
  for (int i = 0; i < k; ++i)
    if (!in_unit_ball(inst.q.data(), centers[static_cast<std::size_t>(i)].data(), inst.dim)) return false;
  for (std::size_t i = static_cast<std::size_t>(k); i < centers.size(); ++i) {
    if (distance(centers[i], inst.q) < 3.0) return false;
    for (std::size_t j = 0; j < centers.size(); ++j)
      if (j != i && squared_distance(centers[i], centers[j]) <= 4.0) return false;
  }
  return true;
}

}  // namespace maxrs::oracle
