#pragma once

// Dynamic (1/2 - eps)-approximate MaxRS for weighted unit d-balls, and the
// static solver with the same output.
//
// Every cell met by a stored ball carries t random points on its
// circumsphere; the answer is the deepest stored sample. The structure runs in
// epochs: once the ball count leaves [n_j / 2, 2 n_j] all samples are redrawn
// with t derived from the new count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cell_sampling.hpp"
#include "geom_core.hpp"
#include "spatial_index.hpp"

namespace maxrs {

struct DynamicStats {
  std::uint64_t rebuilds = 0;
  std::uint64_t updates = 0;
  std::uint64_t cell_visits = 0;
  std::uint64_t sample_checks = 0;
  std::uint64_t samples_drawn = 0;
};

class DynamicMaxRS {
 public:
  DynamicMaxRS(int dim, double eps, double c_sample = 4.0, std::uint64_t seed = 1)
      : dim_(dim),
        eps_(eps),
        c_sample_(c_sample),
        seed_(seed),
        grids_(sampling_grids(dim, eps)),
        rho_(grids_.circumradius()),
        reach_(1.0 + rho_ + kReachSlack),
        index_(dim, 1.0 + rho_ + kReachSlack) {
    if (!(c_sample > 0.0)) throw ParameterError("c_sample must be positive");
  }

  int dim() const { return dim_; }
  double eps() const { return eps_; }
  std::uint64_t seed() const { return seed_; }
  const GridCollection& grids() const { return grids_; }
  std::size_t size() const { return balls_.size(); }
  bool contains(BallId id) const { return balls_.count(id) != 0; }
  std::uint64_t epoch() const { return epoch_; }
  /// Ball count at the start of the current epoch.
  std::size_t epoch_base() const { return base_n_; }
  std::size_t samples_per_cell() const { return t_; }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t sample_count() const { return cells_.size() * t_; }
  const DynamicStats& stats() const { return stats_; }

  std::vector<WeightedBall> balls() const {
    std::vector<WeightedBall> out;
    out.reserve(balls_.size());
    for (const auto& [id, b] : balls_) out.push_back(b);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
  }

  void insert(const WeightedBall& ball) {
    check_ball(ball);
    if (balls_.count(ball.id)) throw PreconditionError("insert: duplicate ball id");
    ++stats_.updates;
    if (balls_.size() + 1 > 2 * base_n_) {
      store(ball);
      rebuild();
      return;
    }
    const double* c = ball.center.data();
    for (std::int64_t g = 0; g < grids_.grid_count(); ++g) {
      const PointD off = grids_.offset(g);
      for_each_cell_in_range(grids_, g, c, reach_, [&](const CellKey& key) {
        ++stats_.cell_visits;
        // a met cell always has its center within reach, so skip the lookup otherwise
        const Reach reach = reach_of(key, c);
        if (reach == Reach::none) return;
        const bool hits = detail::box_distance2(off, grids_.side(), key.coords, c, dim_) <= 1.0;
        auto it = cells_.find(key);
        if (it == cells_.end()) {
          if (!hits) return;
          it = open_cell(key, true);
        }
        if (hits) ++it->second.hits;
        const bool dirty = contribute(it->second, reach, ball, ball.weight);
        rerank(key, it->second, dirty);
      });
    }
    store(ball);
    prune_ranking();
  }

  void erase(BallId id) {
    auto found = balls_.find(id);
    if (found == balls_.end()) throw PreconditionError("erase: unknown ball id");
    ++stats_.updates;
    const WeightedBall ball = found->second;
    index_.erase(id, ball.center.data());
    balls_.erase(found);
    if (2 * balls_.size() < base_n_) {
      rebuild();
      return;
    }
    const double* c = ball.center.data();
    for (std::int64_t g = 0; g < grids_.grid_count(); ++g) {
      const PointD off = grids_.offset(g);
      for_each_cell_in_range(grids_, g, c, reach_, [&](const CellKey& key) {
        ++stats_.cell_visits;
        const Reach reach = reach_of(key, c);
        if (reach == Reach::none) return;
        auto it = cells_.find(key);
        if (it == cells_.end()) return;
        const bool dirty = contribute(it->second, reach, ball, -ball.weight);
        if (detail::box_distance2(off, grids_.side(), key.coords, c, dim_) <= 1.0 && --it->second.hits == 0) {
          cells_.erase(it);
          return;
        }
        rerank(key, it->second, dirty);
      });
    }
    prune_ranking();
  }

  /// Loads `balls` into an empty structure as a single epoch.
  void bulk_load(const std::vector<WeightedBall>& balls) {
    if (!balls_.empty()) throw PreconditionError("bulk_load: structure must be empty");
    for (const auto& b : balls) {
      check_ball(b);
      if (balls_.count(b.id)) throw PreconditionError("bulk_load: duplicate ball id");
      store(b);
    }
    stats_.updates += balls.size();
    rebuild();
  }

  /// Deepest stored sample, or nullopt when no ball is stored.
  std::optional<SampleHit> query() const {
    if (ranking_.empty()) return std::nullopt;
    const CellKey& key = ranking_.front().key;
    const Cell& cell = cells_.at(key);
    return SampleHit{sample_point(cell, cell.best_index), cell.base + cell.partial[cell.best_index], key,
                     cell.best_index};
  }

  /// fn(key, index, point, depth) for every stored sample.
  template <class Fn>
  void for_each_sample(Fn&& fn) const {
    for (const auto& [key, cell] : cells_)
      for (std::size_t i = 0; i < t_; ++i) fn(key, i, sample_point(cell, i), cell.base + cell.partial[i]);
  }

  /// Discards all samples and starts a new epoch sized to the current count.
  ///
  /// Works cell by cell: every cell is produced once, by the index bucket
  /// holding its center, and evaluated against the balls of that bucket's
  /// neighbourhood.
  void rebuild() {
    ++epoch_;
    ++stats_.rebuilds;
    cells_.clear();
    ranking_.clear();
    base_n_ = balls_.size();
    t_ = base_n_ == 0 ? 0 : maxrs::samples_per_cell(c_sample_, eps_, base_n_);
    if (balls_.empty()) return;

    std::vector<Lattice> active;
    {
      std::unordered_map<Lattice, char, LatticeHash> seen;
      index_.for_each_bucket([&](const Lattice& z, const std::vector<BallId>&) {
        for_each_neighbor(z, [&](const Lattice& y) { seen.emplace(y, 0); });
      });
      for (const auto& [z, unused] : seen) active.push_back(z);
      std::sort(active.begin(), active.end());
    }

    const double bucket = index_.side();
    const double side = grids_.side();
    std::vector<double> cand_xyz, cand_w, part_xyz, part_w, d2;
    for (const Lattice& q : active) {
      cand_xyz.clear();
      cand_w.clear();
      std::vector<const WeightedBall*> cand;
      for_each_neighbor(q, [&](const Lattice& y) {
        index_.for_each_in_bucket(y, [&](BallId id) { cand.push_back(&balls_.at(id)); });
      });
      if (cand.empty()) continue;
      for (std::int64_t g = 0; g < grids_.grid_count(); ++g) {
        const PointD off = grids_.offset(g);
        Lattice lo{}, hi{};
        for (int i = 0; i < dim_; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          const double qa = static_cast<double>(q[ui]) * bucket;
          lo[ui] = static_cast<std::int64_t>(std::floor((qa - off[i]) / side - 0.5)) - 1;
          hi[ui] = static_cast<std::int64_t>(std::ceil((qa + bucket - off[i]) / side - 0.5)) + 1;
        }
        CellKey key;
        key.grid = g;
        key.coords = lo;
        while (true) {
          const PointD center = grids_.cell_center(key);
          if (index_.bucket_of(center.data()) == q) evaluate_new_cell(key, off, center, cand, part_xyz, part_w, d2);
          int i = 0;
          for (; i < dim_; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            if (++key.coords[ui] <= hi[ui]) break;
            key.coords[ui] = lo[ui];
          }
          if (i == dim_) break;
        }
      }
    }
    for (auto& [key, cell] : cells_) rerank(key, cell, true);
    prune_ranking();
  }

 private:
  struct Cell {
    CellSamples samples;
    std::vector<double> partial;
    double base = 0.0;
    int hits = 0;
    std::size_t best_index = 0;
    double ranked = std::numeric_limits<double>::quiet_NaN();
  };

  // Lazy max-heap over (depth desc, key asc). An entry is live while its cell
  // exists and still has that depth; stale entries are popped after every
  // update so the front is always live.
  struct RankEntry {
    double depth;
    CellKey key;
  };
  struct WorseRank {
    bool operator()(const RankEntry& a, const RankEntry& b) const {
      if (a.depth != b.depth) return a.depth < b.depth;
      return b.key < a.key;
    }
  };

  void check_ball(const WeightedBall& b) const {
    validate(b);
    if (b.center.dim() != dim_) throw ParameterError("ball dimension does not match structure");
  }

  void store(const WeightedBall& b) {
    balls_.emplace(b.id, b);
    index_.insert(b.id, b.center.data());
  }

  PointD sample_point(const Cell& cell, std::size_t i) const { return cell.samples.point(i); }

  std::unordered_map<CellKey, Cell, CellKeyHash>::iterator open_cell(const CellKey& key, bool fill) {
    Cell cell;
    cell.samples = draw_cell_samples(grids_, key, t_, seed_, epoch_);
    cell.partial.assign(t_, 0.0);
    stats_.samples_drawn += t_;
    auto it = cells_.emplace(key, std::move(cell)).first;
    if (fill) {
      const PointD center = grids_.cell_center(key);
      index_.for_each_candidate(center.data(), reach_, [&](BallId id) {
        const WeightedBall& b = balls_.at(id);
        contribute(it->second, reach_of(key, b.center.data()), b, b.weight);
      });
    }
    return it;
  }

  template <class Fn>
  void for_each_neighbor(const Lattice& z, Fn&& fn) const {
    Lattice y = z;
    for (int i = 0; i < dim_; ++i) y[static_cast<std::size_t>(i)] -= 1;
    while (true) {
      fn(static_cast<const Lattice&>(y));
      int i = 0;
      for (; i < dim_; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        if (++y[ui] <= z[ui] + 1) break;
        y[ui] = z[ui] - 1;
      }
      if (i == dim_) break;
    }
  }

  // Creates the cell if some candidate meets it, with its samples' depths
  // summed over all candidates.
  void evaluate_new_cell(const CellKey& key, const PointD& off, const PointD& center,
                         const std::vector<const WeightedBall*>& cand, std::vector<double>& part_xyz,
                         std::vector<double>& part_w, std::vector<double>& d2) {
    stats_.cell_visits += cand.size();
    int hits = 0;
    double base = 0.0;
    part_w.clear();
    std::vector<const WeightedBall*>& part = scratch_;
    part.clear();
    for (const WeightedBall* b : cand) {
      const double* c = b->center.data();
      const Reach r = classify_reach(std::sqrt(squared_distance(center.data(), c, dim_)), rho_);
      if (r == Reach::none) continue;
      if (detail::box_distance2(off, grids_.side(), key.coords, c, dim_) <= 1.0) ++hits;
      if (r == Reach::full) base += b->weight;
      else part.push_back(b);
    }
    if (hits == 0) return;
    Cell cell;
    cell.samples = draw_cell_samples(grids_, key, t_, seed_, epoch_);
    cell.partial.assign(t_, 0.0);
    cell.base = base;
    cell.hits = hits;
    stats_.samples_drawn += t_;
    const std::size_t m = part.size();
    if (m > 0) {
      stats_.sample_checks += t_ * m;
      part_xyz.resize(static_cast<std::size_t>(dim_) * m);
      part_w.resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        part_w[j] = part[j]->weight;
        for (int k = 0; k < dim_; ++k) part_xyz[static_cast<std::size_t>(k) * m + j] = part[j]->center[k];
      }
      d2.resize(m);
      for (std::size_t i = 0; i < t_; ++i) {
        std::fill(d2.begin(), d2.end(), 0.0);
        for (int k = 0; k < dim_; ++k) {
          const double x = cell.samples.coords[static_cast<std::size_t>(k) * t_ + i];
          const double* pk = part_xyz.data() + static_cast<std::size_t>(k) * m;
          for (std::size_t j = 0; j < m; ++j) {
            const double diff = x - pk[j];
            d2[j] += diff * diff;
          }
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += d2[j] <= 1.0 ? part_w[j] : 0.0;
        cell.partial[i] = acc;
      }
    }
    cells_.emplace(key, std::move(cell));
  }

  Reach reach_of(const CellKey& key, const double* c) const {
    const PointD center = grids_.cell_center(key);
    return classify_reach(std::sqrt(squared_distance(center.data(), c, dim_)), rho_);
  }

  /// Adds w to the depth of every sample of `cell` inside `ball`; returns
  /// whether per-sample depths changed unevenly.
  bool contribute(Cell& cell, Reach reach, const WeightedBall& ball, double w) {
    switch (reach) {
      case Reach::full:
        cell.base += w;
        return false;
      case Reach::partial:
        stats_.sample_checks += t_;
        detail::accumulate_inside(cell.samples, ball.center.data(), w, cell.partial.data(), d2_, inside_);
        return true;
      case Reach::none:
        return false;
    }
    return false;
  }

  void rerank(const CellKey& key, Cell& cell, bool dirty) {
    if (dirty) {
      std::size_t bi = 0;
      for (std::size_t i = 1; i < t_; ++i)
        if (cell.partial[i] > cell.partial[bi]) bi = i;
      cell.best_index = bi;
    }
    const double depth = cell.base + cell.partial[cell.best_index];
    if (depth == cell.ranked) return;
    cell.ranked = depth;
    ranking_.push_back({depth, key});
    std::push_heap(ranking_.begin(), ranking_.end(), WorseRank{});
  }

  bool live(const RankEntry& e) const {
    const auto it = cells_.find(e.key);
    return it != cells_.end() && it->second.ranked == e.depth;
  }

  void prune_ranking() {
    if (ranking_.size() > 4 * cells_.size() + 1024) {
      ranking_.clear();
      for (const auto& [key, cell] : cells_) ranking_.push_back({cell.ranked, key});
      std::make_heap(ranking_.begin(), ranking_.end(), WorseRank{});
    }
    while (!ranking_.empty() && !live(ranking_.front())) {
      std::pop_heap(ranking_.begin(), ranking_.end(), WorseRank{});
      ranking_.pop_back();
    }
  }

  int dim_;
  double eps_;
  double c_sample_;
  std::uint64_t seed_;
  GridCollection grids_;
  double rho_;
  double reach_;
  std::unordered_map<BallId, WeightedBall> balls_;
  CenterIndex<BallId> index_;
  std::unordered_map<CellKey, Cell, CellKeyHash> cells_;
  std::vector<RankEntry> ranking_;
  std::uint64_t epoch_ = 0;
  std::size_t base_n_ = 0;
  std::size_t t_ = 0;
  DynamicStats stats_;
  std::vector<double> d2_;
  std::vector<unsigned char> inside_;
  std::vector<const WeightedBall*> scratch_;
};

namespace detail {

struct WeightedPolicy {
  const std::vector<WeightedBall>& balls;
  double rho;
  std::vector<double> acc;
  std::vector<double> d2;
  std::vector<unsigned char> inside;

  double weight(std::size_t i) const { return balls[i].weight; }

  double refine(const std::vector<std::uint32_t>& reach) const {
    double s = 0.0;
    for (auto j : reach) s += balls[j].weight;
    return s;
  }

  std::pair<double, std::size_t> evaluate(const PointD& center, const CellSamples& s,
                                          const std::vector<std::uint32_t>& reach) {
    acc.assign(s.t, 0.0);
    double base = 0.0;
    for (auto j : reach) {
      const auto& b = balls[j];
      switch (classify_reach(distance(center, b.center), rho)) {
        case Reach::full:
          base += b.weight;
          break;
        case Reach::partial:
          accumulate_inside(s, b.center.data(), b.weight, acc.data(), d2, inside);
          break;
        case Reach::none:
          break;
      }
    }
    std::size_t bi = 0;
    for (std::size_t i = 1; i < s.t; ++i)
      if (acc[i] > acc[bi]) bi = i;
    return {base + acc[bi], bi};
  }
};

}  // namespace detail

/// Same answer as bulk-loading `balls` into a DynamicMaxRS with this seed and
/// querying once, without materializing cells that cannot hold the maximum.
inline std::optional<SampleHit> static_solve(const std::vector<WeightedBall>& balls, int dim, double eps,
                                             std::uint64_t seed, double c_sample = 4.0, SearchStats* stats = nullptr) {
  const GridCollection gc = sampling_grids(dim, eps);
  if (balls.empty()) return std::nullopt;
  std::vector<PointD> centers;
  centers.reserve(balls.size());
  for (const auto& b : balls) {
    validate(b);
    if (b.center.dim() != dim) throw ParameterError("static_solve: ball dimension mismatch");
    centers.push_back(b.center);
  }
  detail::WeightedPolicy policy{balls, gc.circumradius(), {}, {}, {}};
  return pruned_sample_search(gc, samples_per_cell(c_sample, eps, balls.size()), seed, centers, policy, stats);
}

}  // namespace maxrs
