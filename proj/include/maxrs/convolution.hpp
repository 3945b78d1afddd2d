#pragma once

// (min,+)-convolution and its reductions to batched 1D interval MaxRS and to
// batched smallest k-enclosing interval (BSEI), as executable pipelines.
//
// All routines are templated on the value type; integer inputs make every
// pipeline bit-exact.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "geom_core.hpp"

namespace maxrs::conv {

template <class T>
using Sequence = std::vector<T>;

template <class T>
void require_same_length(const Sequence<T>& a, const Sequence<T>& b) {
  if (a.size() != b.size()) throw ParameterError("sequences must have equal length");
  if (a.empty()) throw ParameterError("sequences must be nonempty");
}

/// C_k = min_{i+j=k} (A_i + B_j) for k in [0, n-1].
template <class T>
Sequence<T> minplus_bruteforce(const Sequence<T>& a, const Sequence<T>& b) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  Sequence<T> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    T best = a[0] + b[k];
    for (std::size_t i = 1; i <= k; ++i) best = std::min(best, a[i] + b[k - i]);
    c[k] = best;
  }
  return c;
}

/// Partition {0..n-1} into ceil(n/m) consecutive blocks of size <= m.
inline std::vector<std::vector<std::size_t>> partition_mask(std::size_t n, std::size_t m) {
  if (m < 1 || m > n) throw ParameterError("partition_mask: need 1 <= m <= n");
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t lo = 0; lo < n; lo += m) {
    std::vector<std::size_t> s;
    for (std::size_t i = lo; i < std::min(n, lo + m); ++i) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

template <class T>
std::pair<Sequence<T>, Sequence<T>> masked_min_to_max(const Sequence<T>& d, const Sequence<T>& e) {
  Sequence<T> a(d.size()), b(e.size());
  for (std::size_t i = 0; i < d.size(); ++i) a[i] = -d[i];
  for (std::size_t i = 0; i < e.size(); ++i) b[i] = -e[i];
  return {std::move(a), std::move(b)};
}

template <class T>
struct Shifted {
  Sequence<T> a;
  Sequence<T> b;
  T delta{};  // amount subtracted; 0 when both inputs are already nonnegative
};

template <class T>
Shifted<T> shift_to_positive(const Sequence<T>& a, const Sequence<T>& b) {
  T lo = std::min(*std::min_element(a.begin(), a.end()), *std::min_element(b.begin(), b.end()));
  Shifted<T> out{a, b, T{}};
  if (lo >= T{}) return out;
  out.delta = lo;
  for (auto& x : out.a) x -= lo;
  for (auto& x : out.b) x -= lo;
  return out;
}

// ---------------------------------------------------------------------------
// Batched 1D MaxRS
// ---------------------------------------------------------------------------

template <class T>
struct WeightedPoint1D {
  double x = 0.0;
  T w{};
};

template <class T>
struct Batched1DInstance {
  std::vector<WeightedPoint1D<T>> points;
  std::vector<double> lengths;
  /// k_s for each length, L_s = 2n - 1 - k_s.
  std::vector<std::size_t> ks;
  std::size_t n = 0;
};

/// 4n-point instance: A_i at x=i with a -A_i guard at i-0.5, B_j at
/// x=2n-1-j with a -B_j guard at 2n-1-j+0.5, one length 2n-1-k per k in M.
template <class T>
Batched1DInstance<T> build_batched_instance(const Sequence<T>& a, const Sequence<T>& b,
                                            const std::vector<std::size_t>& mask) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] < T{} || b[i] < T{}) throw PreconditionError("build_batched_instance: inputs must be nonnegative");
  Batched1DInstance<T> inst;
  inst.n = n;
  const double offset = static_cast<double>(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    inst.points.push_back({x, a[i]});
    inst.points.push_back({x - 0.5, -a[i]});
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double x = offset - static_cast<double>(j);
    inst.points.push_back({x, b[j]});
    inst.points.push_back({x + 0.5, -b[j]});
  }
  for (std::size_t k : mask) {
    if (k >= n) throw ParameterError("build_batched_instance: mask index out of range");
    inst.ks.push_back(k);
    inst.lengths.push_back(offset - static_cast<double>(k));
  }
  return inst;
}

/// Total weight of points in the closed interval [lo, hi].
template <class T>
T interval_weight(const std::vector<WeightedPoint1D<T>>& pts, double lo, double hi) {
  T s{};
  for (const auto& p : pts)
    if (p.x >= lo && p.x <= hi) s += p.w;
  return s;
}

namespace detail {

template <class T>
struct SortedPoints {
  std::vector<double> xs;
  std::vector<T> prefix;  // prefix[i] = sum of weights of the first i points

  explicit SortedPoints(std::vector<WeightedPoint1D<T>> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& u, const auto& v) { return u.x < v.x; });
    prefix.push_back(T{});
    for (const auto& p : pts) {
      xs.push_back(p.x);
      prefix.push_back(prefix.back() + p.w);
    }
  }

  T weight(double lo, double hi) const {
    const auto l = std::lower_bound(xs.begin(), xs.end(), lo) - xs.begin();
    const auto r = std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin();
    if (r <= l) return T{};
    return prefix[static_cast<std::size_t>(r)] - prefix[static_cast<std::size_t>(l)];
  }
};

}  // namespace detail

/// Maximum total weight of a closed interval of length L over all placements,
/// one value per length. The covered set only changes at left endpoints p and
/// p - L, so those values, the open gaps between them and the placements past
/// either end cover every distinct coverage.
template <class T>
std::vector<T> solve_batched_1d(const Batched1DInstance<T>& inst) {
  const detail::SortedPoints<T> sp(inst.points);
  std::vector<T> out;
  out.reserve(inst.lengths.size());
  for (double len : inst.lengths) {
    if (sp.xs.empty()) {
      out.push_back(T{});
      continue;
    }
    // (lo, hi) intervals for each critical placement
    std::vector<std::pair<double, double>> cand;
    std::vector<double> starts;
    for (double x : sp.xs) {
      cand.push_back({x, x + len});
      cand.push_back({x - len, x});
      starts.push_back(x);
      starts.push_back(x - len);
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
      const double m = 0.5 * (starts[i] + starts[i + 1]);
      cand.push_back({m, m + len});
    }
    T best = T{};  // a placement beyond every point covers nothing
    for (const auto& [lo, hi] : cand) best = std::max(best, sp.weight(lo, hi));
    out.push_back(best);
  }
  return out;
}

/// Full chain: mask partition, negation to (max,+), shift to nonnegative,
/// batched 1D MaxRS per mask, then undo. Both sequences are lifted by
/// H = max element before building so that a single unpaired point can never
/// beat a paired interval.
template <class T>
Sequence<T> minplus_via_batched(const Sequence<T>& a, const Sequence<T>& b, std::size_t m) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  auto [na, nb] = masked_min_to_max(a, b);
  auto sh = shift_to_positive(na, nb);
  const T lift = std::max(*std::max_element(sh.a.begin(), sh.a.end()), *std::max_element(sh.b.begin(), sh.b.end()));
  for (auto& x : sh.a) x += lift;
  for (auto& x : sh.b) x += lift;

  Sequence<T> c(n);
  for (const auto& mask : partition_mask(n, m)) {
    const auto inst = build_batched_instance(sh.a, sh.b, mask);
    const auto w = solve_batched_1d(inst);
    for (std::size_t s = 0; s < mask.size(); ++s) {
      const T maxplus = w[s] - lift - lift + sh.delta + sh.delta;
      c[mask[s]] = -maxplus;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Monotone sequences and BSEI
// ---------------------------------------------------------------------------

template <class T>
struct Monotone {
  Sequence<T> d;
  Sequence<T> e;
  T delta{};
};

/// D_i = A_i - i*Δ', E_i = B_i - i*Δ' with Δ' = max(1 + largest consecutive
/// increase, 1); both outputs strictly decreasing. n = 1 passes through.
template <class T>
Monotone<T> make_monotone(const Sequence<T>& a, const Sequence<T>& b) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  if (n == 1) return {a, b, T{}};
  T inc = a[1] - a[0];
  for (std::size_t i = 1; i < n; ++i) inc = std::max({inc, a[i] - a[i - 1], b[i] - b[i - 1]});
  const T delta = std::max(T(1) + inc, T(1));
  Monotone<T> out{a, b, delta};
  for (std::size_t i = 0; i < n; ++i) {
    out.d[i] -= static_cast<T>(i) * delta;
    out.e[i] -= static_cast<T>(i) * delta;
  }
  return out;
}

/// P_i = -D_i + (D_{n-1} - 1), P_{n+i} = E_{n-1-i} + (1 - E_{n-1}).
template <class T>
Sequence<T> build_bsei_instance(const Sequence<T>& d, const Sequence<T>& e) {
  require_same_length(d, e);
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i)
    if (!(d[i] < d[i - 1]) || !(e[i] < e[i - 1]))
      throw PreconditionError("build_bsei_instance: sequences must be strictly decreasing");
  Sequence<T> p(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = -d[i] + (d[n - 1] - T(1));
    p[n + i] = e[n - 1 - i] + (T(1) - e[n - 1]);
  }
  return p;
}

/// G[k-1] = smallest (last - first) over windows of k consecutive sorted points.
template <class T>
Sequence<T> solve_bsei(Sequence<T> points) {
  if (points.empty()) throw ParameterError("solve_bsei: need at least one point");
  std::sort(points.begin(), points.end());
  const std::size_t n = points.size();
  Sequence<T> g(n);
  for (std::size_t k = 1; k <= n; ++k) {
    T best = points[k - 1] - points[0];
    for (std::size_t i = 1; i + k <= n; ++i) best = std::min(best, points[i + k - 1] - points[i]);
    g[k - 1] = best;
  }
  return g;
}

template <class T>
Sequence<T> minplus_via_bsei(const Sequence<T>& a, const Sequence<T>& b) {
  require_same_length(a, b);
  const std::size_t n = a.size();
  const auto mono = make_monotone(a, b);
  const auto g = solve_bsei(build_bsei_instance(mono.d, mono.e));
  Sequence<T> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const T f = g[2 * n - k - 1] + mono.d[n - 1] + mono.e[n - 1] - T(2);
    c[k] = f + static_cast<T>(k) * mono.delta;
  }
  return c;
}

}  // namespace maxrs::conv
