#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "segcoreset/geometry.hpp"
#include "segcoreset/grid_union.hpp"
#include "segcoreset/random.hpp"
#include "segcoreset/seg_coreset.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

struct SolveResult {
  CenterSet centers;  // unit center weights
  double cost = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> cost_history;  // cost before each Lloyd update, then the final cost
};

struct LloydOptions {
  int max_iter = 100;
  double tol = 1e-6;
};

inline std::size_t repetitions_for(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::log2(1.0 + static_cast<double>(n))));
}

// Weighted sum of squared distances to the nearest center.
inline double kmeans_cost(const WeightedPointSet& points, const CenterSet& centers) {
  return coreset_cost(points, CenterSet::unit(centers.dim(), centers.coords()), LipSpec::squared());
}

namespace solver_detail {

inline std::size_t pick_by_mass(std::span<const double> mass, double total, Rng& rng) {
  double target = rng.uniform() * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    last_positive = i;
    if (target < mass[i]) return i;
    target -= mass[i];
  }
  return last_positive;
}

}  // namespace solver_detail

// D^2 seeding: the first center is drawn proportional to weight, every later
// one proportional to weight times squared distance to the chosen centers.
inline CenterSet kmeanspp_seed(const WeightedPointSet& points, std::size_t k, Rng& rng) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (points.empty()) throw InvalidInput("k-means++ needs at least one point");
  const double total_w = points.total_weight();
  if (!(total_w > 0.0)) throw InvalidInput("k-means++ needs positive total weight");
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  Vec coords;
  coords.reserve(k * d);

  std::size_t first = solver_detail::pick_by_mass(points.weights(), total_w, rng);
  coords.insert(coords.end(), points.point(first).begin(), points.point(first).end());

  std::vector<double> mass(n);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    std::span<const double> last{coords.data() + (c - 1) * d, d};
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.point(i), last));
      mass[i] = points.weight(i) * nearest[i];
      total += mass[i];
    }
    const std::size_t pick =
        total > 0.0 ? solver_detail::pick_by_mass(mass, total, rng) : solver_detail::pick_by_mass(points.weights(), total_w, rng);
    coords.insert(coords.end(), points.point(pick).begin(), points.point(pick).end());
  }
  return CenterSet::unit(d, std::move(coords));
}

inline CenterSet kmeanspp_seed(const WeightedPointSet& points, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  return kmeanspp_seed(points, k, rng);
}

// Weighted Lloyd iterations for the squared objective. An empty cluster is
// moved to the point with the largest weighted squared distance.
inline SolveResult lloyd(const WeightedPointSet& points, const CenterSet& init, LloydOptions opt = {}) {
  if (points.empty()) throw InvalidInput("lloyd needs at least one point");
  require_same_dim(points.dim(), init.dim(), "points vs centers");
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  const std::size_t k = init.size();
  Vec centers = init.coords();
  std::vector<std::size_t> assign(n);
  std::vector<double> dist(n);
  SolveResult res;

  auto assign_all = [&]() {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double v = squared_distance(points.point(i), {centers.data() + c * d, d});
        if (v < best) {
          best = v;
          arg = c;
        }
      }
      assign[i] = arg;
      dist[i] = best;
      cost += points.weight(i) * best;
    }
    return cost;
  };

  double cost = assign_all();
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::isfinite(prev) && (prev - cost) <= opt.tol * prev) break;
    res.cost_history.push_back(cost);
    Vec sums(k * d, 0.0);
    Vec mass(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = points.weight(i);
      if (w == 0.0) continue;
      mass[assign[i]] += w;
      const auto p = points.point(i);
      for (std::size_t j = 0; j < d; ++j) sums[assign[i] * d + j] += w * p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (mass[c] > 0.0) {
        for (std::size_t j = 0; j < d; ++j) centers[c * d + j] = sums[c * d + j] / mass[c];
        continue;
      }
      std::size_t far = 0;
      double far_v = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = points.weight(i) * dist[i];
        if (v > far_v) {
          far_v = v;
          far = i;
        }
      }
      std::copy_n(points.point(far).data(), d, centers.data() + c * d);
      dist[far] = 0.0;
    }
    ++res.iterations;
    prev = cost;
    cost = assign_all();
  }
  res.cost_history.push_back(cost);
  res.centers = CenterSet::unit(d, std::move(centers));
  res.cost = cost;
  return res;
}

// Best of `reps` seeded k-means++ + Lloyd runs.
inline SolveResult solve_points(const WeightedPointSet& points, std::size_t k, std::uint64_t seed, std::size_t reps = 0,
                                LloydOptions opt = {}) {
  if (reps == 0) reps = std::max<std::size_t>(1, repetitions_for(points.size()));
  Rng rng(seed);
  SolveResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < reps; ++r) {
    SolveResult cur = lloyd(points, kmeanspp_seed(points, k, rng), opt);
    if (cur.cost < best.cost) best = std::move(cur);
  }
  best.seed = seed;
  return best;
}

// ---- The same solver on a union of segment grids, without materializing it.

inline CenterSet kmeanspp_seed(const GridUnion& grid, std::size_t k, Rng& rng) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (grid.empty()) throw InvalidInput("k-means++ needs at least one point");
  if (!(grid.uniform_weight() > 0.0)) throw InvalidInput("k-means++ needs positive total weight");
  const std::size_t d = grid.dim();
  Vec coords;
  coords.reserve(k * d);
  Vec p(d);
  grid.load(rng.index(grid.size()), p);
  coords.insert(coords.end(), p.begin(), p.end());
  for (std::size_t c = 1; c < k; ++c) {
    const CenterSet chosen = CenterSet::unit(d, coords);
    const auto ranges = grid_ranges(grid, chosen);
    double total = 0.0;
    for (const auto& r : ranges) total += r.cost;
    if (!(total > 0.0)) {
      grid.load(rng.index(grid.size()), p);
    } else {
      double target = rng.uniform() * total;
      std::size_t pick = ranges.size() - 1;
      for (std::size_t j = 0; j < ranges.size(); ++j) {
        if (ranges[j].cost <= 0.0) continue;
        pick = j;
        if (target < ranges[j].cost) break;
        target -= ranges[j].cost;
      }
      const GridRange& r = ranges[pick];
      target = std::min(target, std::nextafter(r.cost, 0.0));
      const std::int64_t i = grid_sample_in_range(grid, chosen, r, target);
      grid.load(grid_global_index(grid, r.segment, i), p);
    }
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return CenterSet::unit(d, std::move(coords));
}

inline SolveResult lloyd(const GridUnion& grid, const CenterSet& init, LloydOptions opt = {}) {
  if (grid.empty()) throw InvalidInput("lloyd needs at least one point");
  require_same_dim(grid.dim(), init.dim(), "grid vs centers");
  const std::size_t d = grid.dim();
  const std::size_t k = init.size();
  const double w = grid.uniform_weight();
  const double inv_e = 1.0 / static_cast<double>(grid.eps_prime());
  Vec centers = init.coords();
  SolveResult res;

  std::vector<GridRange> ranges;
  auto assign_all = [&]() {
    ranges = grid_ranges(grid, CenterSet::unit(d, centers));
    double cost = 0.0;
    for (const auto& r : ranges) cost += r.cost;
    return cost * w;
  };

  double cost = assign_all();
  double prev = std::numeric_limits<double>::infinity();
  Vec p(d);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (std::isfinite(prev) && (prev - cost) <= opt.tol * prev) break;
    res.cost_history.push_back(cost);
    Vec sums(k * d, 0.0);
    Vec mass(k, 0.0);
    for (const auto& r : ranges) {
      const Segment& s = grid.segments()[r.segment];
      const double tmid = 0.5 * static_cast<double>(r.first + r.last) * inv_e;
      mass[r.center] += r.count;
      for (std::size_t j = 0; j < d; ++j)
        sums[r.center * d + j] += r.count * (s.offset()[j] + s.direction()[j] * tmid);
    }
    std::vector<std::pair<std::size_t, std::int64_t>> taken;
    for (std::size_t c = 0; c < k; ++c) {
      if (mass[c] > 0.0) {
        for (std::size_t j = 0; j < d; ++j) centers[c * d + j] = sums[c * d + j] / mass[c];
        continue;
      }
      // The squared distance is convex along a range, so the farthest point
      // of each range is one of its ends.
      double far_v = -1.0;
      std::pair<std::size_t, std::int64_t> far{0, 0};
      const CenterSet current = CenterSet::unit(d, centers);
      for (const auto& r : ranges) {
        const LineQuadratic f = line_quadratic(grid.segments()[r.segment], current.center(r.center));
        for (std::int64_t idx : {r.first, r.last}) {
          if (std::find(taken.begin(), taken.end(), std::pair{r.segment, idx}) != taken.end()) continue;
          const double v = f(static_cast<double>(idx) * inv_e);
          if (v > far_v) {
            far_v = v;
            far = {r.segment, idx};
          }
        }
      }
      taken.push_back(far);
      grid.load(grid_global_index(grid, far.first, far.second), p);
      std::copy(p.begin(), p.end(), centers.begin() + static_cast<std::ptrdiff_t>(c * d));
    }
    ++res.iterations;
    prev = cost;
    cost = assign_all();
  }
  res.cost_history.push_back(cost);
  res.centers = CenterSet::unit(d, std::move(centers));
  res.cost = cost;
  return res;
}

inline SolveResult solve_grid(const GridUnion& grid, std::size_t k, std::uint64_t seed, std::size_t reps,
                              LloydOptions opt = {}) {
  reps = std::max<std::size_t>(reps, 1);
  Rng rng(seed);
  SolveResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < reps; ++r) {
    SolveResult cur = lloyd(grid, kmeanspp_seed(grid, k, rng), opt);
    if (cur.cost < best.cost) best = std::move(cur);
  }
  best.seed = seed;
  return best;
}

// k-means of a set of segments: per-segment deterministic grids for the
// squared distance, ceil(log2(1+n)) seeded k-means++ runs refined by Lloyd on
// their union, best run returned. Cost is the coreset cost of the union.
inline SolveResult solve_segments(std::span<const Segment> segments, std::size_t k, const CoresetParams& params,
                                  std::uint64_t seed, LloydOptions opt = {}) {
  if (segments.empty()) throw InvalidInput("solve_segments needs at least one segment");
  check_epsilon(params.epsilon, params.allow_unsafe_eps);
  const std::int64_t e = grid_count(k, params.epsilon, 2.0);
  const GridUnion grid(std::vector<Segment>(segments.begin(), segments.end()), e, 1.0 / static_cast<double>(e));
  return solve_grid(grid, k, seed, repetitions_for(segments.size()), opt);
}

}  // namespace segcoreset
