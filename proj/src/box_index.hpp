#pragma once

#include "catlas/dimension_cover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <vector>

namespace catlas::detail {

// Floating-point copy of a box, used for bucketing and as a prefilter for the exact tests.
struct DBox {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
};

inline DBox to_dbox(const Box& b) {
  DBox out;
  for (int k = 0; k < b.dim() && k < 3; ++k) {
    out.lo[k] = to_double(b.lo[k]);
    out.hi[k] = to_double(b.hi[k]);
  }
  return out;
}

// Values this close to a decision boundary are re-checked exactly. Coordinates are O(1).
inline constexpr double kAmbiguous = 1e-9;

inline bool near_integer(double v, bool periodic) {
  return periodic ? std::abs(v - std::round(v)) < kAmbiguous : std::abs(v) < kAmbiguous;
}

// 1: interiors intersect, 0: they do not, -1: undecided in floating point.
inline int intersect_hint(const DBox& a, const DBox& b, int d, bool periodic) {
  for (int k = 0; k < d; ++k) {
    double u = a.lo[k] - b.hi[k];
    double v = a.hi[k] - b.lo[k];
    if (near_integer(u, periodic) || near_integer(v, periodic)) return -1;
    if (periodic) {
      if (std::floor(u) + 1 > std::ceil(v) - 1) return 0;
    } else if (!(u < 0 && v > 0)) {
      return 0;
    }
  }
  return 1;
}

// 1: inner inside outer, 0: not inside, -1: undecided.
inline int contains_hint(const DBox& outer, const DBox& inner, int d, bool periodic) {
  for (int k = 0; k < d; ++k) {
    double u = outer.lo[k] - inner.lo[k];
    if (near_integer(u, periodic)) return -1;
    if (!periodic && u > 0) return 0;
    double n = periodic ? std::ceil(u) : 0.0;
    double slack = outer.hi[k] - (inner.hi[k] + n);
    if (std::abs(slack) < kAmbiguous) return -1;
    if (slack < 0) return 0;
  }
  return 1;
}

inline bool fast_intersect(const Box& a, const DBox& da, const Box& b, const DBox& db,
                           const std::optional<Rational>& period) {
  int h = intersect_hint(da, db, a.dim(), period.has_value());
  return h >= 0 ? h == 1 : boxes_intersect(a, b, period);
}

inline bool fast_contains(const Box& outer, const DBox& dout, const Box& inner, const DBox& din,
                          const std::optional<Rational>& period) {
  int h = contains_hint(dout, din, outer.dim(), period.has_value());
  return h >= 0 ? h == 1 : box_contains(outer, inner, period);
}

// Uniform bucket grid keyed by the lower corner of each stored box. Stored boxes must not be
// larger than a cell; queries are padded so candidate lists are supersets.
class BoxIndex {
 public:
  BoxIndex(int d, double cell, const std::optional<Rational>& period = {}) : d_(d), cell_(cell) {
    if (period) {
      periodic_ = true;
      cells_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(to_double(*period) / cell_)));
      cell_ = to_double(*period) / static_cast<double>(cells_);
    }
  }

  void insert(const DBox& b, int id) {
    ids_.push_back(id);
    std::array<std::int64_t, 3> c{};
    for (int k = 0; k < d_; ++k) c[k] = static_cast<std::int64_t>(std::floor(b.lo[k] / cell_));
    buckets_[key(c)].push_back(id);
  }

  // Appends candidate ids; may contain duplicates.
  void query(const DBox& b, std::vector<int>& out) const {
    // Large query boxes scan the stored ids instead of walking empty cells.
    if (cell_count(b) > static_cast<double>(ids_.size())) {
      out.insert(out.end(), ids_.begin(), ids_.end());
      return;
    }
    for_each_cell(b, [&](std::uint64_t key) {
      auto it = buckets_.find(key);
      if (it != buckets_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    });
  }

 private:
  void cell_range(const DBox& b, std::array<std::int64_t, 3>& lo, std::array<std::int64_t, 3>& hi) const {
    for (int k = 0; k < d_; ++k) {
      lo[k] = static_cast<std::int64_t>(std::floor(b.lo[k] / cell_)) - 2;
      hi[k] = static_cast<std::int64_t>(std::floor(b.hi[k] / cell_)) + 1;
      if (periodic_ && hi[k] - lo[k] + 1 >= cells_) {
        lo[k] = 0;
        hi[k] = cells_ - 1;
      }
    }
  }

  double cell_count(const DBox& b) const {
    std::array<std::int64_t, 3> lo{}, hi{};
    cell_range(b, lo, hi);
    double n = 1.0;
    for (int k = 0; k < d_; ++k) n *= static_cast<double>(hi[k] - lo[k] + 1);
    return n;
  }

  std::uint64_t key(const std::array<std::int64_t, 3>& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int k = 0; k < d_; ++k) {
      std::int64_t v = c[k];
      if (periodic_) v = ((v % cells_) + cells_) % cells_;
      h = (h ^ static_cast<std::uint64_t>(v + (1ll << 40))) * 1099511628211ull;
    }
    return h;
  }

  template <class F>
  void for_each_cell(const DBox& b, F&& fn) const {
    std::array<std::int64_t, 3> lo{}, hi{};
    cell_range(b, lo, hi);
    std::array<std::int64_t, 3> c = lo;
    while (true) {
      fn(key(c));
      int k = 0;
      while (k < d_ && ++c[k] > hi[k]) {
        c[k] = lo[k];
        ++k;
      }
      if (k == d_) break;
    }
  }

  int d_;
  double cell_;
  bool periodic_ = false;
  std::int64_t cells_ = 0;
  std::vector<int> ids_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

// One BoxIndex per power-of-two size class, so boxes of very different sizes share no buckets.
class MultiIndex {
 public:
  MultiIndex(int d, const std::optional<Rational>& period = {}) : d_(d), period_(period) {}

  int level_of(const DBox& b) const {
    double side = 0.0;
    for (int k = 0; k < d_; ++k) side = std::max(side, b.hi[k] - b.lo[k]);
    return static_cast<int>(std::ceil(std::log2(std::max(side, 1e-300))));
  }

  void insert(const DBox& b, int id) {
    int level = level_of(b);
    auto it = levels_.find(level);
    if (it == levels_.end()) it = levels_.emplace(level, BoxIndex(d_, std::ldexp(1.0, level), period_)).first;
    it->second.insert(b, id);
  }

  // Candidates among stored boxes at least as large as b (by size class). Every intersecting
  // pair is found by querying with the smaller box of the pair.
  std::vector<int> query_larger(const DBox& b) const { return query_from(level_of(b), b); }

  std::vector<int> query(const DBox& b) const { return query_from(std::numeric_limits<int>::min(), b); }

 private:
  std::vector<int> query_from(int min_level, const DBox& b) const {
    std::vector<int> out;
    for (auto it = levels_.lower_bound(min_level); it != levels_.end(); ++it) it->second.query(b, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  int d_;
  std::optional<Rational> period_;
  std::map<int, BoxIndex> levels_;
};

}  // namespace catlas::detail
