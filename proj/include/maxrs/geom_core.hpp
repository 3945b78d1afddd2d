#pragma once

// Shared geometric primitives: points in R^d, unit balls, families of shifted
// uniform grids, sphere sampling and spherical-cap measures.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxrs {

inline constexpr int kMaxDim = 8;

/// Absolute tolerance for point-on-surface checks.
inline constexpr double kTolGeom = 1e-9;

using BallId = std::uint64_t;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A point of R^d, 1 <= d <= 8, stored inline.
class PointD {
 public:
  PointD() = default;

  explicit PointD(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw ParameterError("PointD: dimension must be in [1, 8]");
  }

  PointD(std::initializer_list<double> coords) : PointD(static_cast<int>(coords.size())) {
    std::copy(coords.begin(), coords.end(), c_.begin());
  }

  static PointD from(const double* coords, int dim) {
    PointD p(dim);
    std::copy(coords, coords + dim, p.c_.begin());
    return p;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const double* data() const { return c_.data(); }
  double* data() { return c_.data(); }

  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(c_[static_cast<std::size_t>(i)])) return false;
    return true;
  }

  friend bool operator==(const PointD& a, const PointD& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double squared_distance(const PointD& a, const PointD& b) {
  return squared_distance(a.data(), b.data(), a.dim());
}

inline double distance(const PointD& a, const PointD& b) { return std::sqrt(squared_distance(a, b)); }

/// Closed unit-ball membership. Every depth computation in the library goes
/// through this predicate so incremental and brute-force depths agree bitwise.
inline bool in_unit_ball(const double* p, const double* center, int dim) {
  return squared_distance(p, center, dim) <= 1.0;
}

struct WeightedBall {
  BallId id = 0;
  PointD center;
  double weight = 1.0;
};

struct ColoredBall {
  BallId id = 0;
  PointD center;
  int color = 1;
};

inline void validate(const WeightedBall& b) {
  if (!b.center.finite()) throw ParameterError("ball center must be finite");
  if (!(b.weight >= 0.0) || !std::isfinite(b.weight)) throw ParameterError("ball weight must be finite and >= 0");
}

inline void validate(const ColoredBall& b) {
  if (!b.center.finite()) throw ParameterError("ball center must be finite");
  if (b.color < 1) throw ParameterError("ball color must be >= 1");
}

// ---------------------------------------------------------------------------
// Shifted grids
// ---------------------------------------------------------------------------

/// Integer lattice coordinates of a cell within one grid.
using Lattice = std::array<std::int64_t, kMaxDim>;

struct CellKey {
  std::int64_t grid = 0;
  Lattice coords{};

  friend bool operator==(const CellKey&, const CellKey&) = default;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(k.grid);
    for (auto c : k.coords) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// The family { G_s(step * z) : z in {0..r-1}^d } of uniform grids with cell
/// side s, where step = s / r <= Δ / sqrt(d). Some grid of the family puts any
/// point within Δ of its cell center.
class GridCollection {
 public:
  GridCollection(int dim, double side, double delta) : dim_(dim), side_(side), delta_(delta) {
    if (dim < 1 || dim > kMaxDim) throw ParameterError("grid collection: dimension must be in [1, 8]");
    if (!(side > 0.0) || !(delta > 0.0) || !std::isfinite(side) || !std::isfinite(delta))
      throw ParameterError("grid collection: s and delta must be positive");
    if (delta > side) throw ParameterError("grid collection: delta must not exceed s");
    const double exact = side * std::sqrt(static_cast<double>(dim)) / delta;
    shifts_ = static_cast<std::int64_t>(std::ceil(exact - 1e-9));
    if (shifts_ < 1) shifts_ = 1;
    step_ = side / static_cast<double>(shifts_);
    count_ = 1;
    for (int i = 0; i < dim; ++i) count_ *= shifts_;
  }

  int dim() const { return dim_; }
  double side() const { return side_; }
  double delta() const { return delta_; }
  /// Shift step actually used, s / r.
  double step() const { return step_; }
  /// Shifts per axis, r.
  std::int64_t shifts_per_axis() const { return shifts_; }
  std::int64_t grid_count() const { return count_; }
  /// Radius of a cell's circumsphere, s * sqrt(d) / 2.
  double circumradius() const { return side_ * std::sqrt(static_cast<double>(dim_)) / 2.0; }

  /// Offset vector c of grid `g` (base-r digits of g, first axis least significant).
  PointD offset(std::int64_t g) const {
    PointD c(dim_);
    for (int i = 0; i < dim_; ++i) {
      c[i] = step_ * static_cast<double>(g % shifts_);
      g /= shifts_;
    }
    return c;
  }

  PointD cell_center(const CellKey& key) const {
    PointD c = offset(key.grid);
    for (int i = 0; i < dim_; ++i)
      c[i] += (static_cast<double>(key.coords[static_cast<std::size_t>(i)]) + 0.5) * side_;
    return c;
  }

  /// Lower corner of the cell box.
  PointD cell_origin(const CellKey& key) const {
    PointD c = offset(key.grid);
    for (int i = 0; i < dim_; ++i) c[i] += static_cast<double>(key.coords[static_cast<std::size_t>(i)]) * side_;
    return c;
  }

 private:
  int dim_;
  double side_;
  double delta_;
  std::int64_t shifts_ = 1;
  double step_ = 0.0;
  std::int64_t count_ = 1;
};

inline GridCollection make_grid_collection(int dim, double side, double delta) {
  return GridCollection(dim, side, delta);
}

struct CellHit {
  CellKey key;
  PointD center;
};

/// The cell of grid `g` containing p, with half-open cells [k s, (k+1) s).
inline CellHit cell_of(const GridCollection& gc, std::int64_t g, const PointD& p) {
  if (p.dim() != gc.dim()) throw ParameterError("cell_of: dimension mismatch");
  if (!p.finite()) throw ParameterError("cell_of: point must be finite");
  if (g < 0 || g >= gc.grid_count()) throw ParameterError("cell_of: grid index out of range");
  const PointD off = gc.offset(g);
  CellKey key;
  key.grid = g;
  for (int i = 0; i < gc.dim(); ++i)
    key.coords[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor((p[i] - off[i]) / gc.side()));
  return {key, gc.cell_center(key)};
}

/// Squared distance from `p` to the closed box of cell `key`.
inline double squared_box_distance(const GridCollection& gc, const CellKey& key, const double* p) {
  const PointD lo = gc.cell_origin(key);
  double s = 0.0;
  for (int i = 0; i < gc.dim(); ++i) {
    const double a = lo[i];
    const double b = a + gc.side();
    double t = 0.0;
    if (p[i] < a) t = a - p[i];
    else if (p[i] > b) t = p[i] - b;
    s += t * t;
  }
  return s;
}

/// Calls fn(key) for every lattice cell of grid `g` in the axis-aligned
/// range covering the ball of radius `radius` around `center`.
template <class Fn>
void for_each_cell_in_range(const GridCollection& gc, std::int64_t g, const double* center, double radius, Fn&& fn) {
  const int d = gc.dim();
  const PointD off = gc.offset(g);
  Lattice lo{}, hi{};
  for (int i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    // a closed box touching the range from below still counts
    lo[ui] = static_cast<std::int64_t>(std::ceil((center[i] - radius - off[i]) / gc.side())) - 1;
    hi[ui] = static_cast<std::int64_t>(std::floor((center[i] + radius - off[i]) / gc.side()));
  }
  CellKey key;
  key.grid = g;
  key.coords = lo;
  while (true) {
    fn(static_cast<const CellKey&>(key));
    int i = 0;
    for (; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (++key.coords[ui] <= hi[ui]) break;
      key.coords[ui] = lo[ui];
    }
    if (i == d) break;
  }
}

/// Cells of grid `g` whose closed box lies within distance 1 of the ball center.
inline std::vector<CellKey> cells_intersecting_ball(const GridCollection& gc, std::int64_t g, const WeightedBall& ball) {
  if (ball.center.dim() != gc.dim()) throw ParameterError("cells_intersecting_ball: dimension mismatch");
  std::vector<CellKey> out;
  for_each_cell_in_range(gc, g, ball.center.data(), 1.0, [&](const CellKey& key) {
    if (squared_box_distance(gc, key, ball.center.data()) <= 1.0) out.push_back(key);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// splitmix64 finalizer; used to derive independent per-cell seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t epoch, const CellKey& key, int dim) {
  std::uint64_t h = mix64(seed ^ mix64(epoch + 0x51ed27ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(key.grid));
  for (int i = 0; i < dim; ++i) h = mix64(h ^ static_cast<std::uint64_t>(key.coords[static_cast<std::size_t>(i)]));
  return h;
}

/// Writes `count` points drawn uniformly from the sphere |x - center| = radius
/// into `out` (row-major, count * dim doubles), normalizing Gaussian vectors.
template <class Rng>
void sample_on_sphere_into(const double* center, int dim, double radius, std::size_t count, Rng& rng, double* out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double g[kMaxDim];
  for (std::size_t k = 0; k < count; ++k) {
    double norm2 = 0.0;
    int attempts = 0;
    do {
      if (++attempts > 64) throw std::runtime_error("sample_on_sphere: degenerate random stream");
      norm2 = 0.0;
      for (int i = 0; i < dim; ++i) {
        g[i] = normal(rng);
        norm2 += g[i] * g[i];
      }
    } while (!(norm2 > 1e-300));
    const double scale = radius / std::sqrt(norm2);
    double* row = out + k * static_cast<std::size_t>(dim);
    for (int i = 0; i < dim; ++i) row[i] = center[i] + g[i] * scale;
  }
}

template <class Rng>
std::vector<PointD> sample_on_sphere(const PointD& center, double radius, std::size_t count, Rng& rng) {
  if (!(radius > 0.0)) throw ParameterError("sample_on_sphere: radius must be positive");
  if (count < 1) throw ParameterError("sample_on_sphere: need at least one sample");
  const int d = center.dim();
  std::vector<double> flat(count * static_cast<std::size_t>(d));
  sample_on_sphere_into(center.data(), d, radius, count, rng, flat.data());
  std::vector<PointD> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(PointD::from(flat.data() + k * static_cast<std::size_t>(d), d));
  return out;
}

// ---------------------------------------------------------------------------
// Spherical caps
// ---------------------------------------------------------------------------

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 50) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// G_k(x) = ∫_0^x (1 - t^2)^((k-1)/2) dt.
inline double cap_integral(int k, double x) {
  if (k == 1) return x;
  const double e = (static_cast<double>(k) - 1.0) / 2.0;
  return adaptive_simpson([e](double t) { return std::pow(std::max(0.0, 1.0 - t * t), e); }, 0.0, x, 1e-10);
}

/// Height b of the hyperplane cutting a radius-ε sphere at the origin where it
/// meets the boundary of a unit ball centered at (0, ..., 0, 1 + ε²).
inline double cap_plane_height(double eps) { return (3.0 * eps * eps + eps * eps * eps * eps) / (2.0 + 2.0 * eps * eps); }

/// Fraction of the radius-ε circle covered by the unit disk tangent to the
/// ε²-disk around its center, (1/π) arccos((3ε + ε³) / (2 + 2ε²)).
inline double cap_fraction_2d(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("cap_fraction_2d: eps must be in (0, 1/2)");
  return std::acos((3.0 * eps + eps * eps * eps) / (2.0 + 2.0 * eps * eps)) / std::numbers::pi;
}

/// Lower bound 1/2 - G_{d-2}(q) / (2 G_{d-2}(1)), q = b/ε, for d >= 3.
inline double cap_fraction_bound(int dim, double eps) {
  if (dim < 3) throw ParameterError("cap_fraction_bound: d must be >= 3 (use cap_fraction_2d)");
  if (dim > kMaxDim) throw ParameterError("cap_fraction_bound: d must be <= 8");
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("cap_fraction_bound: eps must be in (0, 1/2)");
  const double q = cap_plane_height(eps) / eps;
  const int k = dim - 2;
  return 0.5 - cap_integral(k, q) / (2.0 * cap_integral(k, 1.0));
}

}  // namespace maxrs
