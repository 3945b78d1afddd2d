#pragma once

// Sample sets on cell circumspheres and the pruned static search shared by
// the weighted and colored (1/2 - eps) solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

#include "geom_core.hpp"
#include "spatial_index.hpp"

namespace maxrs {

/// A ball contributes to every sample of a cell at once when it contains the
/// circumsphere with this much room to spare.
inline constexpr double kFullMargin = 1e-9;
inline constexpr double kReachSlack = 1e-9;

inline void validate_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("eps must be in (0, 1/2)");
}

/// Grids with s = 2 eps / sqrt(d) and Δ = eps^2, so each cell's circumsphere
/// has radius eps.
inline GridCollection sampling_grids(int dim, double eps) {
  validate_eps(eps);
  return GridCollection(dim, 2.0 * eps / std::sqrt(static_cast<double>(dim)), eps * eps);
}

/// t = ceil(c * eps^-2 * ln(max(n, 2))).
inline std::size_t samples_per_cell(double c_sample, double eps, std::size_t n) {
  if (!(c_sample > 0.0)) throw ParameterError("c_sample must be positive");
  const double v = c_sample / (eps * eps) * std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(v)));
}

/// t samples on a cell circumsphere, stored coordinate-major
/// (coords[k * t + i] is coordinate k of sample i).
struct CellSamples {
  int dim = 0;
  std::size_t t = 0;
  std::vector<double> coords;

  PointD point(std::size_t i) const {
    PointD p(dim);
    for (int k = 0; k < dim; ++k) p[k] = coords[static_cast<std::size_t>(k) * t + i];
    return p;
  }
};

inline CellSamples draw_cell_samples(const GridCollection& gc, const CellKey& key, std::size_t t, std::uint64_t seed,
                                     std::uint64_t epoch) {
  const int d = gc.dim();
  const PointD center = gc.cell_center(key);
  std::mt19937_64 rng(cell_seed(seed, epoch, key, d));
  std::vector<double> rows(t * static_cast<std::size_t>(d));
  sample_on_sphere_into(center.data(), d, gc.circumradius(), t, rng, rows.data());
  CellSamples s{d, t, std::vector<double>(rows.size())};
  for (std::size_t i = 0; i < t; ++i)
    for (int k = 0; k < d; ++k) s.coords[static_cast<std::size_t>(k) * t + i] = rows[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
  return s;
}

enum class Reach { none, partial, full };

/// How a unit ball at distance `dist` from a cell center meets its
/// circumsphere of radius rho.
inline Reach classify_reach(double dist, double rho) {
  if (dist + rho <= 1.0 - kFullMargin) return Reach::full;
  if (dist <= 1.0 + rho + kReachSlack) return Reach::partial;
  return Reach::none;
}

namespace detail {

/// inside[i] = 1 iff sample i lies in the closed unit ball around c. Uses the
/// same arithmetic as in_unit_ball so results agree bitwise.
inline void inside_mask(const CellSamples& s, const double* c, std::vector<double>& d2, std::vector<unsigned char>& inside) {
  const std::size_t t = s.t;
  d2.assign(t, 0.0);
  inside.resize(t);
  for (int k = 0; k < s.dim; ++k) {
    const double* x = s.coords.data() + static_cast<std::size_t>(k) * t;
    const double ck = c[k];
    for (std::size_t i = 0; i < t; ++i) {
      const double diff = x[i] - ck;
      d2[i] += diff * diff;
    }
  }
  for (std::size_t i = 0; i < t; ++i) inside[i] = d2[i] <= 1.0 ? 1 : 0;
}

inline void accumulate_inside(const CellSamples& s, const double* c, double w, double* acc, std::vector<double>& d2,
                              std::vector<unsigned char>& inside) {
  inside_mask(s, c, d2, inside);
  for (std::size_t i = 0; i < s.t; ++i) acc[i] += inside[i] ? w : 0.0;
}

inline double box_distance2(const PointD& off, double side, const Lattice& coords, const double* p, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double a = off[i] + static_cast<double>(coords[static_cast<std::size_t>(i)]) * side;
    const double b = a + side;
    double t = 0.0;
    if (p[i] < a) t = a - p[i];
    else if (p[i] > b) t = p[i] - b;
    s += t * t;
  }
  return s;
}

}  // namespace detail

struct SampleHit {
  PointD point;
  double depth = 0.0;
  CellKey cell;
  std::size_t index = 0;
};

/// Lower (grid, cell, sample index) wins among equal depths.
inline bool better_hit(double depth, const CellKey& key, std::size_t index, const std::optional<SampleHit>& best) {
  if (!best) return true;
  if (depth != best->depth) return depth > best->depth;
  if (key != best->cell) return key < best->cell;
  return index < best->index;
}

struct SearchStats {
  std::size_t candidates = 0;
  std::size_t cells_evaluated = 0;
  std::size_t samples_drawn = 0;
};

/// Finds the deepest sample over all non-empty cells (cells whose box is
/// within distance 1 of some center) of the grid family, where each cell holds
/// the epoch-1 samples of `seed`. Cells are visited in decreasing order of an
/// upper bound on their depth and skipped once the bound drops below the best
/// depth found; the result equals the exhaustive argmax.
///
/// Policy provides:
///   double weight(i)                                  bound contribution of ball i
///   double refine(reach)                              tighter bound from the balls reaching a cell
///   std::pair<double, size_t> evaluate(cell, samples, reach)   best depth, lowest index
template <class Policy>
std::optional<SampleHit> pruned_sample_search(const GridCollection& gc, std::size_t t, std::uint64_t seed,
                                              const std::vector<PointD>& centers, Policy& policy,
                                              SearchStats* stats = nullptr) {
  const std::size_t n = centers.size();
  if (n == 0) return std::nullopt;
  const int d = gc.dim();
  const double side = gc.side();
  const double rho = gc.circumradius();
  const double reach = 1.0 + rho + kReachSlack;
  const double reach2 = reach * reach;
  SearchStats local;
  SearchStats& st = stats ? *stats : local;

  CenterIndex<std::uint32_t> index(d, reach);
  for (std::size_t i = 0; i < n; ++i) index.insert(static_cast<std::uint32_t>(i), centers[i].data());
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = policy.weight(i);

  std::optional<SampleHit> best;
  std::vector<std::uint32_t> near;
  auto reaching = [&](const PointD& c) {
    near.clear();
    index.for_each_candidate(c.data(), reach, [&](std::uint32_t j) {
      if (squared_distance(c, centers[j]) <= reach2) near.push_back(j);
    });
    std::sort(near.begin(), near.end());
  };
  // depth <= bound, and an equal depth only wins with a lower key
  auto can_win = [&](double bound, const CellKey& key) {
    return !best || bound > best->depth || (bound == best->depth && key < best->cell);
  };
  auto evaluate = [&](const CellKey& key) {
    const PointD c = gc.cell_center(key);
    reaching(c);
    const double bound = policy.refine(near);
    if (!can_win(bound, key)) return;
    const CellSamples s = draw_cell_samples(gc, key, t, seed, 1);
    ++st.cells_evaluated;
    st.samples_drawn += t;
    const auto [depth, idx] = policy.evaluate(c, s, near);
    if (better_hit(depth, key, idx, best)) best = SampleHit{s.point(idx), depth, key, idx};
  };

  // Probe: cells around the center of greatest depth give an initial lower bound.
  std::size_t star = 0;
  double star_v = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    index.for_each_candidate(centers[i].data(), 1.0, [&](std::uint32_t j) {
      if (in_unit_ball(centers[i].data(), centers[j].data(), d)) v += w[j];
    });
    if (v > star_v) {
      star_v = v;
      star = i;
    }
  }
  const std::int64_t probes = std::min<std::int64_t>(gc.grid_count(), 8);
  for (std::int64_t g = 0; g < probes; ++g) evaluate(cell_of(gc, g, centers[star]).key);
  const double beta = best ? best->depth : 0.0;

  // A cell met by ball i only sees balls within 2 * reach of i, so cells of
  // interest all meet some heavy ball.
  std::unordered_set<Lattice, LatticeHash> owners;
  for (std::size_t i = 0; i < n; ++i) {
    double w2 = 0.0;
    index.for_each_candidate(centers[i].data(), 2.0 * reach, [&](std::uint32_t j) {
      if (squared_distance(centers[i], centers[j]) <= 4.0 * reach2) w2 += w[j];
    });
    if (w2 < beta) continue;
    const Lattice z0 = index.bucket_of(centers[i].data());
    Lattice z = z0;
    for (int k = 0; k < d; ++k) z[static_cast<std::size_t>(k)] -= 1;
    while (true) {
      owners.insert(z);
      int k = 0;
      for (; k < d; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        if (++z[uk] <= z0[uk] + 1) break;
        z[uk] = z0[uk] - 1;
      }
      if (k == d) break;
    }
  }

  struct Candidate {
    double bound;
    CellKey key;
  };
  struct Owner {
    Lattice z;
    std::vector<std::uint32_t> near;
    double cap;  // at least the bound of every cell centered in z
  };
  const double h = index.side();
  const double bucket_radius = h * std::sqrt(static_cast<double>(d));
  std::vector<Owner> owned;
  std::vector<Lattice> owner_order(owners.begin(), owners.end());
  std::sort(owner_order.begin(), owner_order.end());
  for (const Lattice& z : owner_order) {
    PointD bc(d);
    for (int k = 0; k < d; ++k) bc[k] = (static_cast<double>(z[static_cast<std::size_t>(k)]) + 0.5) * h;
    Owner o{z, {}, 0.0};
    index.for_each_candidate(bc.data(), bucket_radius + reach, [&](std::uint32_t j) { o.near.push_back(j); });
    if (o.near.empty()) continue;
    // same summation order as the cell bounds over a superset of
    // nonnegative weights, so rounding cannot push a bound above it
    for (std::uint32_t j : o.near) {
      double gap2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double a = static_cast<double>(z[static_cast<std::size_t>(k)]) * h;
        const double x = centers[j][k];
        const double t = x < a ? a - x : x > a + h ? x - a - h : 0.0;
        gap2 += t * t;
      }
      if (gap2 <= reach2) o.cap += w[j];
    }
    owned.push_back(std::move(o));
  }

  // Grid by grid, so a good hit in an early grid prunes the later ones; the
  // result is the maximum of a total order and does not depend on the order
  // of evaluation.
  std::vector<Candidate> cand;
  std::vector<double> bound;
  std::vector<unsigned char> hit;
  for (std::int64_t g = 0; g < gc.grid_count(); ++g) {
    const PointD off = gc.offset(g);
    cand.clear();
    for (const Owner& o : owned) {
      // a tie needs a lower key, hence a grid no later than the best one
      if (best && (o.cap < best->depth || (o.cap == best->depth && g > best->cell.grid))) continue;
      const Lattice& z = o.z;
      Lattice lo{}, ext{};
      std::size_t vol = 1;
      for (int k = 0; k < d; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double zlo = static_cast<double>(z[uk]) * h;
        lo[uk] = static_cast<std::int64_t>(std::floor((zlo - off[k]) / side - 0.5)) - 1;
        const auto hi = static_cast<std::int64_t>(std::floor((zlo + h - off[k]) / side - 0.5)) + 1;
        ext[uk] = hi - lo[uk] + 1;
        vol *= static_cast<std::size_t>(ext[uk]);
      }
      bound.assign(vol, 0.0);
      hit.assign(vol, 0);
      for (std::uint32_t j : o.near) {
        const double* c = centers[j].data();
        Lattice jlo{}, jhi{};
        bool empty = false;
        for (int k = 0; k < d; ++k) {
          const auto uk = static_cast<std::size_t>(k);
          jlo[uk] = std::max(lo[uk], static_cast<std::int64_t>(std::floor((c[k] - reach - off[k]) / side)));
          jhi[uk] = std::min(lo[uk] + ext[uk] - 1, static_cast<std::int64_t>(std::floor((c[k] + reach - off[k]) / side)));
          if (jhi[uk] < jlo[uk]) empty = true;
        }
        if (empty) continue;
        Lattice m = jlo;
        while (true) {
          double dc = 0.0;
          std::size_t flat = 0;
          for (int k = d - 1; k >= 0; --k) {
            const auto uk = static_cast<std::size_t>(k);
            const double ck = off[k] + (static_cast<double>(m[uk]) + 0.5) * side;
            dc += (ck - c[k]) * (ck - c[k]);
            flat = flat * static_cast<std::size_t>(ext[uk]) + static_cast<std::size_t>(m[uk] - lo[uk]);
          }
          if (dc <= reach2) {
            bound[flat] += w[j];
            if (!hit[flat] && detail::box_distance2(off, side, m, c, d) <= 1.0) hit[flat] = 1;
          }
          int k = 0;
          for (; k < d; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            if (++m[uk] <= jhi[uk]) break;
            m[uk] = jlo[uk];
          }
          if (k == d) break;
        }
      }
      // keep the cells whose center falls in this bucket
      Lattice m = lo;
      for (std::size_t flat_i = 0; flat_i < vol; ++flat_i) {
        if (flat_i > 0) {
          for (int k = 0; k < d; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            if (++m[uk] < lo[uk] + ext[uk]) break;
            m[uk] = lo[uk];
          }
        }
        // flat index was built with axis 0 least significant, matching m's odometer
        if (!hit[flat_i]) continue;
        CellKey key;
        key.grid = g;
        key.coords = m;
        if (!can_win(bound[flat_i], key)) continue;
        const PointD cc = gc.cell_center(key);
        if (index.bucket_of(cc.data()) != z) continue;
        cand.push_back({bound[flat_i], key});
      }
    }
    st.candidates += cand.size();
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.key < b.key;
    });
    for (const auto& cd : cand) {
      // sorted by (bound desc, key asc) within one grid, so the first loser ends the scan
      if (!can_win(cd.bound, cd.key)) break;
      evaluate(cd.key);
    }
  }
  return best;
}

}  // namespace maxrs
