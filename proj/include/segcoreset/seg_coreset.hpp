#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include "segcoreset/geometry.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

inline constexpr std::int64_t kMaxGridCount = (std::int64_t{1} << 31) - 2;

// ceil(multiplier * k * (20k)^(r+1) / epsilon). The ceiling ignores a relative
// excess of 1e-12 so that decimal epsilons such as 0.1 hit the exact integer.
inline std::int64_t grid_count(std::size_t k, double epsilon, double r, double multiplier = 4.0) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be > 0");
  const long double kk = static_cast<long double>(k);
  const long double raw = multiplier * kk * std::pow(20.0L * kk, static_cast<long double>(r) + 1.0L) / epsilon;
  if (!std::isfinite(static_cast<double>(raw)) || raw > static_cast<long double>(kMaxGridCount))
    throw OverflowError("grid count exceeds 2^31-2 for k=" + std::to_string(k) + ", epsilon=" + std::to_string(epsilon));
  const long double c = std::ceil(raw - raw * 1e-12L);
  return static_cast<std::int64_t>(std::max(1.0L, c));
}

inline void check_epsilon(double epsilon, bool allow_unsafe = false) {
  if (allow_unsafe ? !(epsilon > 0.0 && epsilon < 1.0) : !(epsilon > 0.0 && epsilon <= 0.1))
    throw InvalidInput("epsilon must lie in (0, 1/10]");
}

// Lazy view of the grid {s(i/E) : i = 0..E}, every point with the same weight.
class SegmentGrid {
 public:
  SegmentGrid(Segment s, std::int64_t eps_prime, double weight)
      : segment_(std::move(s)), eps_prime_(eps_prime), weight_(weight) {
    if (eps_prime_ < 1) throw InvalidInput("grid count must be >= 1");
  }

  const Segment& segment() const { return segment_; }
  std::int64_t eps_prime() const { return eps_prime_; }
  std::size_t size() const { return static_cast<std::size_t>(eps_prime_) + 1; }
  std::size_t dim() const { return segment_.dim(); }
  double weight(std::size_t) const { return weight_; }
  double uniform_weight() const { return weight_; }
  double parameter(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(eps_prime_); }
  void load(std::size_t i, std::span<double> out) const { segment_.point_at(parameter(i), out); }

  WeightedPointSet materialize() const {
    WeightedPointSet out(dim());
    out.reserve(size());
    Vec p(dim());
    for (std::size_t i = 0; i < size(); ++i) {
      load(i, p);
      out.push_back(p, weight_);
    }
    return out;
  }

  // Weighted sum of lifted distances. Runs in O(k) per grid point by
  // evaluating each center's squared distance as a quadratic in the parameter.
  double cost(const CenterSet& q, const LipSpec& lip) const {
    require_same_dim(q.dim(), dim(), "grid vs centers");
    std::vector<LineQuadratic> lq;
    std::vector<double> w2;
    for (std::size_t c = 0; c < q.size(); ++c) {
      lq.push_back(line_quadratic(segment_, q.center(c)));
      w2.push_back(q.weight(c) * q.weight(c));
    }
    const double inv = 1.0 / static_cast<double>(eps_prime_);
    double total = 0.0;
    const std::size_t n = size();
    const bool squared = lip.is_squared();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * inv;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < lq.size(); ++c) {
        const LineQuadratic& f = lq[c];
        const double y = x + f.shift;
        const double v = w2[c] * (f.A * y * y + f.perp);
        best = v < best ? v : best;
      }
      total += squared ? best : lip.of_squared(best);
    }
    return total * weight_;
  }

 private:
  Segment segment_;
  std::int64_t eps_prime_;
  double weight_;
};

struct SegCoresetOutput {
  WeightedPointSet points;
  std::int64_t eps_prime = 0;
};

// Grid view of the per-segment coreset, for callers that cannot afford to
// materialize eps_prime + 1 points.
inline SegmentGrid seg_coreset_grid(const Segment& s, std::size_t k, double epsilon, const LipSpec& lip,
                                    bool allow_unsafe_eps = false) {
  check_epsilon(epsilon, allow_unsafe_eps);
  const std::int64_t e = grid_count(k, epsilon, lip.r);
  return SegmentGrid(s, e, 1.0 / static_cast<double>(e));
}

// Deterministic coreset of one segment: eps_prime + 1 evenly spaced points,
// endpoints included, each of weight 1/eps_prime.
inline SegCoresetOutput seg_coreset(const Segment& s, std::size_t k, double epsilon, const LipSpec& lip,
                                    bool allow_unsafe_eps = false) {
  const SegmentGrid grid = seg_coreset_grid(s, k, epsilon, lip, allow_unsafe_eps);
  return {grid.materialize(), grid.eps_prime()};
}

inline double coreset_cost(const WeightedPointSet& points, const CenterSet& q, const LipSpec& lip) {
  if (points.empty()) return 0.0;
  require_same_dim(q.dim(), points.dim(), "coreset vs centers");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double w = points.weight(i);
    if (w == 0.0) continue;
    total += w * lifted_distance(q, lip, points.point(i));
  }
  return total;
}

inline double coreset_cost(const SegCoresetOutput& out, const CenterSet& q, const LipSpec& lip) {
  return coreset_cost(out.points, q, lip);
}

inline double coreset_cost(const SegmentGrid& grid, const CenterSet& q, const LipSpec& lip) {
  return grid.cost(q, lip);
}

}  // namespace segcoreset
