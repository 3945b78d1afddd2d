#pragma once

// Exact colored MaxRS for unit disks.
//
// The arrangement of all colors' union boundaries is cut into pseudo-trapezoids
// by a left-to-right sweep (vertical walls through every vertex). Cells are
// linked across walls (same depth) and across arc pieces (depth changes by one
// depending on which side holds the union interior); a traversal from a cell
// at the left edge of the bounding box assigns every cell its colored depth.
//
// exact_colored_maxrs restricts that computation to small sub-problems: for
// every cell of 36 shifted unit grids only disks containing a cell corner are
// kept, and sub-problems are visited in decreasing order of surviving colors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "disk_union.hpp"
#include "geom_core.hpp"

namespace maxrs {

namespace disks {

struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;
};

/// Centers' bounding box grown by `margin` on every side.
inline Box bounding_box(const std::vector<Disk>& ds, double margin = 3.0) {
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& d : ds) {
    b.xmin = std::min(b.xmin, d.x);
    b.ymin = std::min(b.ymin, d.y);
    b.xmax = std::max(b.xmax, d.x);
    b.ymax = std::max(b.ymax, d.y);
  }
  if (ds.empty()) b = {0.0, 0.0, 0.0, 0.0};
  return {b.xmin - margin, b.ymin - margin, b.xmax + margin, b.ymax + margin};
}

inline constexpr int kBoxBottom = -1;
inline constexpr int kBoxTop = -2;

struct DecompositionCell {
  double xl = 0.0;
  double xr = 0.0;
  int bottom = kBoxBottom;  // edge index or box side
  int top = kBoxTop;
  Point2 witness;
  int depth = -1;
};

/// Piece of an arc between consecutive vertices.
struct Edge {
  std::size_t arc = 0;
  std::size_t left = 0;  // vertex ids
  std::size_t right = 0;
};

/// Adjacency between two cells. For an arc link, `a` lies below the edge,
/// `b` above it and `delta` = depth(b) - depth(a). Wall links join a cell to
/// the one across a vertical wall with delta 0.
struct CellLink {
  std::size_t a = 0;
  std::size_t b = 0;
  int delta = 0;
  int edge = -1;  // -1 for walls
};

enum class Traversal { breadth_first, depth_first };

struct Decomposition {
  Box box;
  std::vector<ArcSegment> arcs;
  std::vector<Point2> vertices;
  std::vector<Edge> edges;
  std::vector<DecompositionCell> cells;
  std::vector<CellLink> links;
  std::size_t crossings = 0;

  double edge_y(int e, double x) const {
    if (e == kBoxBottom) return box.ymin;
    if (e == kBoxTop) return box.ymax;
    return arcs[edges[static_cast<std::size_t>(e)].arc].y_at(x);
  }

  /// Links whose endpoints' depths disagree with the link's delta.
  std::size_t inconsistent_links() const {
    std::size_t bad = 0;
    for (const auto& l : links) bad += cells[l.b].depth - cells[l.a].depth != l.delta;
    return bad;
  }
};

namespace detail {

// direction angle of an edge leaving vertex p to the right
inline double leaving_angle(const ArcSegment& a, const Point2& p) {
  const double ux = p.x - a.circle.cx;
  const double uy = p.y - a.circle.cy;
  return a.upper ? std::atan2(-ux, uy) : std::atan2(ux, -uy);
}

}  // namespace detail

/// Vertical decomposition of the arrangement of `arcs` inside `box`, with
/// cell adjacency. Depths are left unassigned.
inline Decomposition build_decomposition(const std::vector<ArcSegment>& arcs, const Box& box) {
  Decomposition dec;
  dec.box = box;
  dec.arcs = arcs;
  for (const auto& a : arcs) {
    if (!(a.circle.cx - 1.0 > box.xmin && a.circle.cx + 1.0 < box.xmax && a.circle.cy - 1.0 > box.ymin &&
          a.circle.cy + 1.0 < box.ymax))
      throw PreconditionError("bounding box must strictly contain every arc");
  }

  // vertices are identified by bitwise equal coordinates
  std::map<Point2, std::size_t> vid;
  auto vertex = [&](const Point2& p) {
    auto [it, fresh] = vid.try_emplace(p, dec.vertices.size());
    if (fresh) dec.vertices.push_back(p);
    return it->second;
  };
  std::vector<std::vector<Point2>> on_arc(arcs.size());
  const auto cross = arc_intersections(arcs);
  dec.crossings = cross.size();
  for (const auto& c : cross) {
    on_arc[c.arc_a].push_back(c.location);
    on_arc[c.arc_b].push_back(c.location);
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    auto& pts = on_arc[i];
    std::sort(pts.begin(), pts.end());
    std::size_t prev = vertex(arcs[i].left);
    for (const auto& p : pts) {
      const std::size_t v = vertex(p);
      dec.edges.push_back({i, prev, v});
      prev = v;
    }
    dec.edges.push_back({i, prev, vertex(arcs[i].right)});
  }

  const std::size_t nv = dec.vertices.size();
  std::vector<std::vector<std::size_t>> ending(nv), starting(nv);
  for (std::size_t e = 0; e < dec.edges.size(); ++e) {
    ending[dec.edges[e].right].push_back(e);
    starting[dec.edges[e].left].push_back(e);
  }
  // map iteration order is already (x, y) order
  std::vector<std::size_t> order;
  order.reserve(nv);
  for (const auto& [p, v] : vid) order.push_back(v);

  auto& cells = dec.cells;
  auto& links = dec.links;
  cells.push_back({box.xmin, box.xmax, kBoxBottom, kBoxTop, {}, -1});
  std::vector<std::size_t> status;     // edges, bottom to top
  std::vector<std::size_t> gap{0};     // gap[k] is the cell between status[k-1] and status[k]
  auto bound_below = [&](std::size_t k) { return k == 0 ? kBoxBottom : static_cast<int>(status[k - 1]); };
  auto bound_above = [&](std::size_t k) { return k == status.size() ? kBoxTop : static_cast<int>(status[k]); };
  auto crossing = [&](std::size_t e) { return dec.arcs[dec.edges[e].arc].interior_above() ? 1 : -1; };

  for (const std::size_t v : order) {
    const Point2 p = dec.vertices[v];
    const auto& ends = ending[v];
    std::size_t pos = 0;
    std::size_t left_bottom = 0, left_top = 0;
    if (!ends.empty()) {
      std::size_t lo = status.size(), hi = 0;
      for (const std::size_t e : ends) {
        const auto it = std::find(status.begin(), status.end(), e);
        if (it == status.end()) throw std::runtime_error("sweep lost an edge");
        const auto k = static_cast<std::size_t>(it - status.begin());
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
      if (hi - lo + 1 != ends.size()) throw std::runtime_error("edges ending at a vertex are not adjacent");
      pos = lo;
      left_bottom = gap[lo];
      left_top = gap[hi + 1];
      for (std::size_t k = lo; k <= hi + 1; ++k) cells[gap[k]].xr = p.x;
      status.erase(status.begin() + static_cast<std::ptrdiff_t>(lo), status.begin() + static_cast<std::ptrdiff_t>(hi + 1));
      gap.erase(gap.begin() + static_cast<std::ptrdiff_t>(lo), gap.begin() + static_cast<std::ptrdiff_t>(hi + 2));
    } else {
      pos = static_cast<std::size_t>(std::partition_point(status.begin(), status.end(), [&](std::size_t e) {
                                       return dec.arcs[dec.edges[e].arc].y_at(p.x) < p.y;
                                     }) -
                                     status.begin());
      left_bottom = left_top = gap[pos];
      cells[gap[pos]].xr = p.x;
      gap.erase(gap.begin() + static_cast<std::ptrdiff_t>(pos));
    }

    std::vector<std::pair<double, std::size_t>> starts;
    for (const std::size_t e : starting[v]) starts.push_back({detail::leaving_angle(dec.arcs[dec.edges[e].arc], p), e});
    std::sort(starts.begin(), starts.end());
    for (std::size_t i = 0; i < starts.size(); ++i)
      status.insert(status.begin() + static_cast<std::ptrdiff_t>(pos + i), starts[i].second);
    const std::size_t fresh = starts.size() + 1;
    for (std::size_t i = 0; i < fresh; ++i) {
      const std::size_t k = pos + i;
      gap.insert(gap.begin() + static_cast<std::ptrdiff_t>(k), cells.size());
      cells.push_back({p.x, box.xmax, bound_below(k), bound_above(k), {}, -1});
    }
    links.push_back({left_bottom, gap[pos], 0, -1});
    links.push_back({left_top, gap[pos + fresh - 1], 0, -1});
    // arc links from every new cell to the cells across its bounding edges
    if (pos > 0) links.push_back({gap[pos - 1], gap[pos], crossing(status[pos - 1]), static_cast<int>(status[pos - 1])});
    for (std::size_t i = 0; i < fresh; ++i) {
      const std::size_t k = pos + i;
      if (k < status.size()) links.push_back({gap[k], gap[k + 1], crossing(status[k]), static_cast<int>(status[k])});
    }
  }
  if (!status.empty()) throw std::runtime_error("sweep ended with open edges");

  for (auto& c : cells) {
    const double xm = 0.5 * (c.xl + c.xr);
    c.witness = {xm, 0.5 * (dec.edge_y(c.bottom, xm) + dec.edge_y(c.top, xm))};
  }
  return dec;
}

/// Assigns depths by walking links from cell 0 (at the box's left side).
inline void assign_depths(Decomposition& dec, Traversal how = Traversal::breadth_first) {
  const std::size_t n = dec.cells.size();
  std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
  for (const auto& l : dec.links) {
    adj[l.a].push_back({l.b, l.delta});
    adj[l.b].push_back({l.a, -l.delta});
  }
  for (auto& c : dec.cells) c.depth = -1;
  if (n == 0) return;
  std::deque<std::size_t> work{0};
  dec.cells[0].depth = 0;
  while (!work.empty()) {
    std::size_t c;
    if (how == Traversal::breadth_first) {
      c = work.front();
      work.pop_front();
    } else {
      c = work.back();
      work.pop_back();
    }
    for (const auto& [to, delta] : adj[c]) {
      if (dec.cells[to].depth >= 0) continue;
      dec.cells[to].depth = dec.cells[c].depth + delta;
      work.push_back(to);
    }
  }
}

struct DepthResult {
  Point2 point;
  int depth = 0;
};

/// Deepest cell of a depth-assigned decomposition; ties go to the
/// lexicographically smallest witness.
inline DepthResult deepest_cell(const Decomposition& dec) {
  DepthResult best{dec.cells.front().witness, dec.cells.front().depth};
  for (const auto& c : dec.cells) {
    if (c.depth > best.depth || (c.depth == best.depth && c.witness < best.point)) best = {c.witness, c.depth};
  }
  return best;
}

/// Maximum colored depth over the arrangement of union boundaries.
inline DepthResult max_depth_first_algorithm(const std::vector<ArcSegment>& arcs, const Box& box) {
  Decomposition dec = build_decomposition(arcs, box);
  assign_depths(dec);
  return deepest_cell(dec);
}

/// Disks containing at least one corner of the unit square with lower-left
/// corner `lo` (closed containment).
inline std::vector<Disk> discard_noncorner_disks(const std::vector<Disk>& ds, const Point2& lo, double side = 1.0) {
  std::vector<Disk> out;
  for (const auto& d : ds) {
    bool keep = false;
    for (int cx = 0; cx < 2 && !keep; ++cx)
      for (int cy = 0; cy < 2 && !keep; ++cy) {
        const double dx = lo.x + cx * side - d.x;
        const double dy = lo.y + cy * side - d.y;
        keep = dx * dx + dy * dy <= 1.0;
      }
    if (keep) out.push_back(d);
  }
  return out;
}

struct SubProblem {
  CellKey cell;
  std::vector<std::size_t> disks;  // indices into the perturbed disk list
  int colors = 0;
};

/// Non-empty corner sub-problems over the 36 shifted unit grids, sorted by
/// (surviving colors desc, cell asc).
inline std::vector<SubProblem> corner_subproblems(const std::vector<Disk>& ds) {
  const GridCollection gc = make_grid_collection(2, 1.0, 0.25);
  // dense color ids for the distinct-color count
  std::vector<int> palette;
  for (const auto& d : ds) palette.push_back(d.color);
  std::sort(palette.begin(), palette.end());
  palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
  std::vector<std::uint32_t> dense(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i)
    dense[i] = static_cast<std::uint32_t>(std::lower_bound(palette.begin(), palette.end(), ds[i].color) - palette.begin());
  std::vector<std::size_t> stamp(palette.size(), SIZE_MAX);

  struct Entry {
    std::int64_t cx, cy;
    std::uint32_t disk;
    auto operator<=>(const Entry&) const = default;
  };
  std::vector<SubProblem> out;
  std::vector<Entry> entries;
  for (std::int64_t g = 0; g < gc.grid_count(); ++g) {
    const PointD off = gc.offset(g);
    const double ox = off[0];
    const double oy = off[1];
    entries.clear();
    for (std::size_t i = 0; i < ds.size(); ++i) {
      // lattice corners (ox + a, oy + b) within distance 1; each touches 4 cells
      const auto ax = static_cast<std::int64_t>(std::ceil(ds[i].x - 1.0 - ox));
      const auto bx = static_cast<std::int64_t>(std::floor(ds[i].x + 1.0 - ox));
      const auto ay = static_cast<std::int64_t>(std::ceil(ds[i].y - 1.0 - oy));
      const auto by = static_cast<std::int64_t>(std::floor(ds[i].y + 1.0 - oy));
      const std::size_t first = entries.size();
      for (std::int64_t a = ax; a <= bx; ++a)
        for (std::int64_t b = ay; b <= by; ++b) {
          const double dx = ox + static_cast<double>(a) - ds[i].x;
          const double dy = oy + static_cast<double>(b) - ds[i].y;
          if (dx * dx + dy * dy > 1.0) continue;
          for (std::int64_t u = a - 1; u <= a; ++u)
            for (std::int64_t v = b - 1; v <= b; ++v) entries.push_back({u, v, static_cast<std::uint32_t>(i)});
        }
      std::sort(entries.begin() + static_cast<std::ptrdiff_t>(first), entries.end());
      entries.erase(std::unique(entries.begin() + static_cast<std::ptrdiff_t>(first), entries.end()), entries.end());
    }
    std::sort(entries.begin(), entries.end());
    for (std::size_t lo = 0; lo < entries.size();) {
      std::size_t hi = lo;
      SubProblem sp;
      sp.cell.grid = g;
      sp.cell.coords[0] = entries[lo].cx;
      sp.cell.coords[1] = entries[lo].cy;
      const std::size_t tag = out.size();
      while (hi < entries.size() && entries[hi].cx == entries[lo].cx && entries[hi].cy == entries[lo].cy) {
        const std::uint32_t i = entries[hi].disk;
        sp.disks.push_back(i);
        if (stamp[dense[i]] != tag) {
          stamp[dense[i]] = tag;
          ++sp.colors;
        }
        ++hi;
      }
      out.push_back(std::move(sp));
      lo = hi;
    }
  }
  std::sort(out.begin(), out.end(), [](const SubProblem& a, const SubProblem& b) {
    return a.colors != b.colors ? a.colors > b.colors : a.cell < b.cell;
  });
  return out;
}

inline DepthResult solve_disks(const std::vector<Disk>& ds) {
  return max_depth_first_algorithm(all_union_boundaries(ds), bounding_box(ds));
}

}  // namespace disks

struct ColoredExactStats {
  std::size_t subproblems = 0;
  std::size_t evaluated = 0;
  int max_surviving_colors = 0;
};

struct ColoredExactResult {
  PointD point;
  int opt = 0;
};

/// First algorithm on the whole input.
inline std::optional<ColoredExactResult> colored_first_algorithm(const std::vector<ColoredBall>& balls) {
  if (balls.empty()) return std::nullopt;
  const auto r = disks::solve_disks(disks::perturb_disks(balls));
  return ColoredExactResult{PointD{r.point.x, r.point.y}, r.depth};
}

/// Exact colored disk MaxRS through corner sub-problems.
inline std::optional<ColoredExactResult> exact_colored_maxrs(const std::vector<ColoredBall>& balls,
                                                             ColoredExactStats* stats = nullptr) {
  if (balls.empty()) return std::nullopt;
  const auto ds = disks::perturb_disks(balls);
  const auto subs = disks::corner_subproblems(ds);
  ColoredExactStats local;
  local.subproblems = subs.size();
  if (!subs.empty()) local.max_surviving_colors = subs.front().colors;
  std::optional<disks::DepthResult> best;
  std::vector<disks::Disk> part;
  for (const auto& sp : subs) {
    if (best && sp.colors <= best->depth) break;
    part.clear();
    for (const auto i : sp.disks) part.push_back(ds[i]);
    const auto r = disks::solve_disks(part);
    ++local.evaluated;
    if (!best || r.depth > best->depth || (r.depth == best->depth && r.point < best->point)) best = r;
  }
  if (stats) *stats = local;
  return ColoredExactResult{PointD{best->point.x, best->point.y}, best->depth};
}

}  // namespace maxrs
