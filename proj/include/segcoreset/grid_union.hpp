#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "segcoreset/geometry.hpp"
#include "segcoreset/random.hpp"
#include "segcoreset/seg_coreset.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

// Union of the grids {s(i/E) : i = 0..E} over a list of segments, all points
// sharing one weight. Point g is grid point g % (E+1) of segment g / (E+1).
//
// Under the squared distance, the points of one segment that share a nearest
// center form a contiguous index range, and sums of weights, coordinates and
// squared distances over such a range have closed forms. The functions below
// use that to run k-means++, Lloyd and sensitivity sampling in time independent
// of E.
class GridUnion {
 public:
  GridUnion() = default;
  GridUnion(std::vector<Segment> segments, std::int64_t eps_prime, double weight)
      : segments_(std::move(segments)), eps_prime_(eps_prime), weight_(weight) {
    if (eps_prime_ < 1) throw InvalidInput("grid count must be >= 1");
    if (!(weight_ >= 0.0) || !std::isfinite(weight_)) throw InvalidInput("grid weight must be finite and >= 0");
    for (const auto& s : segments_)
      if (s.dim() != segments_.front().dim()) throw InvalidInput("segments differ in dimension");
  }

  const std::vector<Segment>& segments() const { return segments_; }
  std::int64_t eps_prime() const { return eps_prime_; }
  std::size_t per_segment() const { return static_cast<std::size_t>(eps_prime_) + 1; }
  std::size_t size() const { return segments_.size() * per_segment(); }
  std::size_t dim() const { return segments_.empty() ? 0 : segments_.front().dim(); }
  double weight(std::size_t) const { return weight_; }
  double uniform_weight() const { return weight_; }
  double total_weight() const { return weight_ * static_cast<double>(size()); }
  bool empty() const { return segments_.empty(); }

  double parameter(std::int64_t i) const { return static_cast<double>(i) / static_cast<double>(eps_prime_); }

  void load(std::size_t g, std::span<double> out) const {
    const std::size_t s = g / per_segment();
    const std::size_t i = g % per_segment();
    segments_[s].point_at(parameter(static_cast<std::int64_t>(i)), out);
  }

  WeightedPointSet materialize() const {
    WeightedPointSet out(std::max<std::size_t>(dim(), 1));
    out.reserve(size());
    Vec p(dim());
    for (std::size_t g = 0; g < size(); ++g) {
      load(g, p);
      out.push_back(p, weight_);
    }
    return out;
  }

 private:
  std::vector<Segment> segments_;
  std::int64_t eps_prime_ = 1;
  double weight_ = 1.0;
};

// A maximal index range [first, last] of one segment's grid served by one center.
struct GridRange {
  std::size_t segment = 0;
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::size_t center = 0;
  double count = 0.0;  // last - first + 1
  double cost = 0.0;   // sum of w(c)^2 * |p - c|^2 over the range, unit point weight
};

namespace grid_detail {

struct CenterQuadratics {
  std::vector<LineQuadratic> lq;
  std::vector<double> w2;

  double value(std::size_t c, double t) const { return w2[c] * lq[c](t); }
};

inline CenterQuadratics quadratics(const Segment& s, const CenterSet& q) {
  CenterQuadratics out;
  out.lq.reserve(q.size());
  out.w2.reserve(q.size());
  for (std::size_t c = 0; c < q.size(); ++c) {
    out.lq.push_back(line_quadratic(s, q.center(c)));
    out.w2.push_back(q.weight(c) * q.weight(c));
  }
  return out;
}

inline std::size_t argmin_at(const CenterQuadratics& cq, double t) {
  std::size_t arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cq.lq.size(); ++c) {
    const double v = cq.value(c, t);
    if (v < best) {
      best = v;
      arg = c;
    }
  }
  return arg;
}

// Sum over i in [first, last] of f(i/E) for f = A (t + shift)^2 + perp.
inline double range_sum(const LineQuadratic& f, std::int64_t first, std::int64_t last, double inv_e) {
  const double n = static_cast<double>(last - first + 1);
  const double mid = 0.5 * static_cast<double>(first + last) * inv_e + f.shift;
  const double spread = (n * n - 1.0) / 12.0 * inv_e * inv_e;
  return n * (f.A * (mid * mid + spread) + f.perp);
}

}  // namespace grid_detail

// Nearest-center index ranges of every segment in the union, in segment and
// index order. Costs use unit point weight; multiply by the union weight.
inline std::vector<GridRange> grid_ranges(const GridUnion& grid, const CenterSet& q) {
  require_same_dim(q.dim(), grid.dim(), "grid vs centers");
  const std::int64_t e = grid.eps_prime();
  const double inv_e = 1.0 / static_cast<double>(e);
  std::vector<GridRange> out;
  out.reserve(grid.segments().size() * std::min<std::size_t>(q.size(), 4));
  std::vector<GridRange> local;
  for (std::size_t si = 0; si < grid.segments().size(); ++si) {
    const Segment& s = grid.segments()[si];
    const auto cq = grid_detail::quadratics(s, q);
    local.clear();
    const auto bps = segment_breakpoints(q, s);
    std::int64_t start = 0;
    std::vector<std::int64_t> bounds;
    for (double t : bps) {
      const auto b = static_cast<std::int64_t>(std::ceil(t * static_cast<double>(e)));
      if (b > start && b <= e) bounds.push_back(b);
    }
    bounds.push_back(e + 1);
    for (std::int64_t b : bounds) {
      if (b <= start) continue;
      const std::int64_t last = b - 1;
      const double mid = 0.5 * static_cast<double>(start + last) * inv_e;
      const std::size_t c = grid_detail::argmin_at(cq, mid);
      if (!local.empty() && local.back().center == c) {
        local.back().last = last;
      } else {
        local.push_back({si, start, last, c, 0.0, 0.0});
      }
      start = b;
    }
    // Rounding the real breakpoints to indices can misplace a boundary by one;
    // settle each boundary against direct comparisons.
    for (std::size_t j = 0; j + 1 < local.size(); ++j) {
      GridRange& left = local[j];
      GridRange& right = local[j + 1];
      while (left.last > left.first &&
             cq.value(right.center, left.last * inv_e) < cq.value(left.center, left.last * inv_e)) {
        --left.last;
        --right.first;
      }
      while (right.first < right.last &&
             cq.value(left.center, right.first * inv_e) < cq.value(right.center, right.first * inv_e)) {
        ++left.last;
        ++right.first;
      }
    }
    for (GridRange& r : local) {
      r.count = static_cast<double>(r.last - r.first + 1);
      r.cost = cq.w2[r.center] * grid_detail::range_sum(cq.lq[r.center], r.first, r.last, inv_e);
      out.push_back(r);
    }
  }
  return out;
}

// Weighted squared-distance cost of the whole union against q.
inline double grid_cost(const GridUnion& grid, const CenterSet& q) {
  double total = 0.0;
  for (const auto& r : grid_ranges(grid, q)) total += r.cost;
  return total * grid.uniform_weight();
}

// Index in [r.first, r.last] drawn with probability proportional to the
// squared distance to r.center; `target` is uniform in [0, r.cost).
inline std::int64_t grid_sample_in_range(const GridUnion& grid, const CenterSet& q, const GridRange& r,
                                         double target) {
  const double inv_e = 1.0 / static_cast<double>(grid.eps_prime());
  const LineQuadratic f = line_quadratic(grid.segments()[r.segment], q.center(r.center));
  const double w2 = q.weight(r.center) * q.weight(r.center);
  std::int64_t lo = r.first;
  std::int64_t hi = r.last;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (w2 * grid_detail::range_sum(f, r.first, mid, inv_e) > target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

inline std::size_t grid_global_index(const GridUnion& grid, std::size_t segment, std::int64_t i) {
  return segment * grid.per_segment() + static_cast<std::size_t>(i);
}

}  // namespace segcoreset
