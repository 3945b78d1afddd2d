#pragma once

// Uniform bucket hash over ball centers, used to find every ball whose center
// lies within a given radius of a query point.

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "geom_core.hpp"

namespace maxrs {

struct LatticeHash {
  std::size_t operator()(const Lattice& z) const noexcept {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (auto c : z) h = mix64(h ^ static_cast<std::uint64_t>(c));
    return static_cast<std::size_t>(h);
  }
};

template <class Id>
class CenterIndex {
 public:
  CenterIndex(int dim, double side) : dim_(dim), side_(side) {}

  int dim() const { return dim_; }
  double side() const { return side_; }

  Lattice bucket_of(const double* p) const {
    Lattice z{};
    for (int i = 0; i < dim_; ++i) z[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(p[i] / side_));
    return z;
  }

  void insert(Id id, const double* p) { buckets_[bucket_of(p)].push_back(id); }

  void erase(Id id, const double* p) {
    auto it = buckets_.find(bucket_of(p));
    if (it == buckets_.end()) return;
    auto& v = it->second;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == id) {
        v[i] = v.back();
        v.pop_back();
        break;
      }
    }
    if (v.empty()) buckets_.erase(it);
  }

  void clear() { buckets_.clear(); }

  /// Calls fn(id) for every stored id whose bucket may hold a center within
  /// `radius` of p. Callers filter by exact distance.
  template <class Fn>
  void for_each_candidate(const double* p, double radius, Fn&& fn) const {
    Lattice lo{}, hi{};
    for (int i = 0; i < dim_; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      lo[ui] = static_cast<std::int64_t>(std::floor((p[i] - radius) / side_));
      hi[ui] = static_cast<std::int64_t>(std::floor((p[i] + radius) / side_));
    }
    Lattice z = lo;
    while (true) {
      auto it = buckets_.find(z);
      if (it != buckets_.end())
        for (Id id : it->second) fn(id);
      int i = 0;
      for (; i < dim_; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (++z[ui] <= hi[ui]) break;
        z[ui] = lo[ui];
      }
      if (i == dim_) break;
    }
  }

  template <class Fn>
  void for_each_in_bucket(const Lattice& z, Fn&& fn) const {
    auto it = buckets_.find(z);
    if (it != buckets_.end())
      for (Id id : it->second) fn(id);
  }

  template <class Fn>
  void for_each_bucket(Fn&& fn) const {
    for (const auto& [z, ids] : buckets_) fn(z, ids);
  }

 private:
  int dim_;
  double side_;
  std::unordered_map<Lattice, std::vector<Id>, LatticeHash> buckets_;
};

}  // namespace maxrs
