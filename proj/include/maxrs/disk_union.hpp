#pragma once

// Boundary of a union of unit disks as x-monotone circular arcs, plus
// circle-circle intersection points between arcs of different colors.
//
// Inputs are put in general position first: centers are snapped to a 2^-30
// lattice, coincident same-color disks are merged, and each center then moves
// by an id-derived offset below 2^-40. Every vertex shared by two arcs is
// computed once from the unordered disk pair, so both arcs carry bitwise equal
// endpoints.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

#include "geom_core.hpp"

namespace maxrs::disks {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

/// A unit disk after perturbation.
struct Disk {
  BallId id = 0;
  double x = 0.0;
  double y = 0.0;
  int color = 1;
};

inline double snap(double v) { return std::nearbyint(std::ldexp(v, 30)) / std::ldexp(1.0, 30); }

/// Snap, merge coincident same-color disks (lowest id kept), then offset.
inline std::vector<Disk> perturb_disks(const std::vector<ColoredBall>& in) {
  std::vector<Disk> snapped;
  snapped.reserve(in.size());
  for (const auto& b : in) {
    validate(b);
    if (b.center.dim() != 2) throw ParameterError("disks must be 2-dimensional");
    snapped.push_back({b.id, snap(b.center[0]), snap(b.center[1]), b.color});
  }
  std::sort(snapped.begin(), snapped.end(), [](const Disk& a, const Disk& b) {
    return std::tie(a.color, a.x, a.y, a.id) < std::tie(b.color, b.x, b.y, b.id);
  });
  std::vector<Disk> out;
  for (const auto& d : snapped) {
    if (!out.empty() && out.back().color == d.color && out.back().x == d.x && out.back().y == d.y) continue;
    out.push_back(d);
  }
  const double scale = std::ldexp(1.0, -41);
  for (auto& d : out) {
    const std::uint64_t h = mix64(d.id ^ 0x6a09e667f3bcc909ULL);
    const double u = static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53);
    const double v = static_cast<double>(mix64(h) >> 11) / static_cast<double>(1ULL << 53);
    d.x += (2.0 * u - 1.0) * scale;
    d.y += (2.0 * v - 1.0) * scale;
  }
  std::sort(out.begin(), out.end(), [](const Disk& a, const Disk& b) { return a.id < b.id; });
  return out;
}

struct CircleRef {
  double cx = 0.0;
  double cy = 0.0;
  BallId id = 0;
};

inline bool canonical_less(const CircleRef& a, const CircleRef& b) {
  return std::tie(a.cx, a.cy, a.id) < std::tie(b.cx, b.cy, b.id);
}

/// Intersection points of two unit circles as (left of a->b, right of a->b).
/// Computed from the canonically ordered pair so swapping the arguments
/// swaps the two points bit-for-bit. Requires 0 < |a - b| < 2.
inline std::pair<Point2, Point2> pair_points(const CircleRef& a, const CircleRef& b) {
  const bool swap = canonical_less(b, a);
  const CircleRef& p = swap ? b : a;
  const CircleRef& q = swap ? a : b;
  const double dx = q.cx - p.cx;
  const double dy = q.cy - p.cy;
  const double d2 = dx * dx + dy * dy;
  const double d = std::sqrt(d2);
  const double h = std::sqrt(std::max(0.0, 1.0 - d2 / 4.0));
  const double mx = p.cx + dx / 2.0;
  const double my = p.cy + dy / 2.0;
  const Point2 left{mx - h * dy / d, my + h * dx / d};
  const Point2 right{mx + h * dy / d, my - h * dx / d};
  return swap ? std::pair{right, left} : std::pair{left, right};
}

/// A counterclockwise arc of a unit circle from `start` through `span` radians.
struct CircleArc {
  CircleRef circle;
  int color = 1;
  double theta_start = 0.0;  // in [0, 2π)
  double span = 0.0;         // in (0, 2π]
  Point2 from;
  Point2 to;
};

/// An x-monotone arc. Upper arcs lie on the upper half of their circle
/// (angles in [0, π]) and have the disk interior below them; lower arcs lie
/// in [π, 2π] with the interior above.
struct ArcSegment {
  CircleRef circle;
  int color = 1;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  bool upper = true;
  Point2 left;
  Point2 right;

  double y_at(double x) const {
    const double t = x - circle.cx;
    const double h = std::sqrt(std::max(0.0, 1.0 - t * t));
    return upper ? circle.cy + h : circle.cy - h;
  }

  /// True when the union interior lies on the upper side of the arc.
  bool interior_above() const { return !upper; }
};

inline Point2 point_at(const CircleRef& c, double theta) {
  return {c.cx + std::cos(theta), c.cy + std::sin(theta)};
}

/// Pieces of `arc` between its extreme-x points (angles 0 and π), left to
/// right along the circle's orientation. An arc containing both extreme
/// points gives three pieces.
inline std::vector<ArcSegment> split_x_monotone(const CircleArc& arc) {
  const double pi = std::numbers::pi;
  const double a0 = arc.theta_start;
  const double a1 = arc.theta_start + arc.span;
  std::vector<double> cuts{a0};
  std::vector<Point2> pts{arc.from};
  for (int k = 0; k <= 4; ++k) {
    const double c = k * pi;
    if (c > a0 && c < a1) {
      cuts.push_back(c);
      pts.push_back(k % 2 == 0 ? Point2{arc.circle.cx + 1.0, arc.circle.cy} : Point2{arc.circle.cx - 1.0, arc.circle.cy});
    }
  }
  cuts.push_back(a1);
  pts.push_back(arc.to);
  std::vector<ArcSegment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = cuts[i];
    double hi = cuts[i + 1];
    if (lo >= kTwoPi) {
      lo -= kTwoPi;
      hi -= kTwoPi;
    }
    const double mid = 0.5 * (lo + hi);
    ArcSegment s;
    s.circle = arc.circle;
    s.color = arc.color;
    s.theta_lo = lo;
    s.theta_hi = hi;
    s.upper = std::sin(mid) > 0.0;
    // counterclockwise motion goes left on the upper half, right on the lower
    if (s.upper) {
      s.left = pts[i + 1];
      s.right = pts[i];
    } else {
      s.left = pts[i];
      s.right = pts[i + 1];
    }
    out.push_back(s);
  }
  return out;
}

inline double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

/// Uncovered arcs of each disk's circle: the boundary of the union of the
/// given same-color disks. O(n^2).
inline std::vector<CircleArc> union_arcs(const std::vector<Disk>& disks) {
  std::vector<CircleArc> out;
  const std::size_t n = disks.size();
  struct Interval {
    double s;
    double e;
    Point2 ps;
    Point2 pe;
  };
  std::vector<Interval> iv;
  for (std::size_t i = 0; i < n; ++i) {
    const CircleRef ci{disks[i].x, disks[i].y, disks[i].id};
    iv.clear();
    bool swallowed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = disks[j].x - disks[i].x;
      const double dy = disks[j].y - disks[i].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 >= 4.0) continue;
      if (d2 == 0.0) {
        // coincident disks: keep only the lowest id
        if (disks[j].id < disks[i].id) swallowed = true;
        continue;
      }
      const CircleRef cj{disks[j].x, disks[j].y, disks[j].id};
      const double phi = std::atan2(dy, dx);
      const double alpha = std::acos(std::sqrt(d2) / 2.0);
      const auto [left, right] = pair_points(ci, cj);
      const double s = normalize_angle(phi - alpha);
      iv.push_back({s, s + 2.0 * alpha, right, left});
    }
    if (swallowed) continue;
    if (iv.empty()) {
      const Point2 east{ci.cx + 1.0, ci.cy};
      out.push_back({ci, disks[i].color, 0.0, kTwoPi, east, east});
      continue;
    }
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.s < b.s; });
    // merge into disjoint blocks on the line, then fold the wrap-around
    std::vector<Interval> blocks;
    for (const auto& x : iv) {
      if (!blocks.empty() && x.s <= blocks.back().e) {
        if (x.e > blocks.back().e) {
          blocks.back().e = x.e;
          blocks.back().pe = x.pe;
        }
      } else {
        blocks.push_back(x);
      }
    }
    bool full = false;
    std::size_t first = 0;
    while (true) {
      Interval& last = blocks.back();
      if (first >= blocks.size() - 1) {
        full = last.e - last.s >= kTwoPi;
        break;
      }
      const Interval& head = blocks[first];
      if (last.e - kTwoPi < head.s) break;
      if (head.e + kTwoPi > last.e) {
        last.e = head.e + kTwoPi;
        last.pe = head.pe;
      }
      ++first;
    }
    if (full) continue;
    const std::size_t m = blocks.size() - first;
    for (std::size_t k = 0; k < m; ++k) {
      const Interval& a = blocks[first + k];
      const Interval& b = blocks[first + (k + 1) % m];
      const double start = normalize_angle(a.e);
      double end = b.s;
      if (k + 1 == m) end += kTwoPi;
      double span = end - a.e;
      if (!(span > 0.0)) continue;
      out.push_back({ci, disks[i].color, start, span, a.pe, b.ps});
    }
  }
  return out;
}

/// x-monotone boundary arcs of the union of same-color disks.
inline std::vector<ArcSegment> union_boundary(const std::vector<Disk>& disks) {
  std::vector<ArcSegment> out;
  for (const auto& arc : union_arcs(disks))
    for (const auto& s : split_x_monotone(arc)) out.push_back(s);
  return out;
}

/// Boundary arcs of every color's union.
inline std::vector<ArcSegment> all_union_boundaries(const std::vector<Disk>& disks) {
  std::map<int, std::vector<Disk>> by_color;
  for (const auto& d : disks) by_color[d.color].push_back(d);
  std::vector<ArcSegment> out;
  for (const auto& [color, group] : by_color)
    for (const auto& s : union_boundary(group)) out.push_back(s);
  return out;
}

struct IntersectionPoint {
  Point2 location;
  std::size_t arc_a = 0;
  std::size_t arc_b = 0;
};

/// Whether a point of the arc's circle lies strictly inside the arc's x-range
/// on its half.
inline bool on_arc(const ArcSegment& s, const Point2& p) {
  if (!(p.x > s.left.x && p.x < s.right.x)) return false;
  return s.upper ? p.y > s.circle.cy : p.y < s.circle.cy;
}

/// All crossings between arcs of different colors, each reported once.
inline std::vector<IntersectionPoint> arc_intersections(const std::vector<ArcSegment>& arcs) {
  std::vector<std::size_t> order(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return arcs[a].left.x < arcs[b].left.x; });
  std::vector<IntersectionPoint> out;
  for (std::size_t u = 0; u < order.size(); ++u) {
    const ArcSegment& a = arcs[order[u]];
    for (std::size_t v = u + 1; v < order.size(); ++v) {
      const ArcSegment& b = arcs[order[v]];
      if (b.left.x > a.right.x) break;
      if (a.color == b.color) continue;
      const double dx = b.circle.cx - a.circle.cx;
      const double dy = b.circle.cy - a.circle.cy;
      const double d2 = dx * dx + dy * dy;
      if (d2 >= 4.0 || d2 == 0.0) continue;
      const auto [p, q] = pair_points(a.circle, b.circle);
      for (const Point2& x : {p, q})
        if (on_arc(a, x) && on_arc(b, x)) out.push_back({x, order[u], order[v]});
    }
  }
  return out;
}

}  // namespace maxrs::disks
