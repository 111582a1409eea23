#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "segcoreset/geometry.hpp"
#include "segcoreset/grid_union.hpp"
#include "segcoreset/random.hpp"
#include "segcoreset/solver.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

// Anything that exposes indexed weighted points: WeightedPointSet, SegmentGrid, GridUnion.
template <class S>
concept PointSource = requires(const S& s, std::size_t i, std::span<double> out) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.dim() } -> std::convertible_to<std::size_t>;
  { s.weight(i) } -> std::convertible_to<double>;
  s.load(i, out);
};

struct SensitivityProfile {
  std::vector<double> sensitivities;  // per point; left empty by the grid fast path
  double total = 0.0;
  double cost = 0.0;                  // cost of the input against the bicriteria centers
  std::vector<double> cluster_weight;
};

struct PointCoresetOutput {
  WeightedPointSet sample;  // duplicate draws merged
  std::uint64_t seed = 0;
  SensitivityProfile profile;
  std::uint64_t draws = 0;  // m, the number of i.i.d. draws
  bool identity = false;    // m >= |P|: the input was returned unchanged
};

// m = ceil(c (k+1)^kappa ln^2|P| / eps^2 (d* + ln(1/delta))).
inline std::uint64_t sample_size(std::size_t n, std::size_t dim, const CoresetParams& params) {
  const double ln_n = std::log(static_cast<double>(std::max<std::size_t>(n, 1)));
  const double kk = std::pow(static_cast<double>(params.k) + 1.0, params.k_exponent);
  const double m = params.sample_constant * kk * ln_n * ln_n / (params.epsilon * params.epsilon) *
                   (static_cast<double>(params.dstar(dim)) + std::log(1.0 / params.delta));
  if (!std::isfinite(m) || m > 9.0e18) throw OverflowError("sample size overflows 64 bits");
  return static_cast<std::uint64_t>(std::ceil(m));
}

namespace coreset_detail {

template <PointSource Source>
WeightedPointSet copy_all(const Source& source) {
  if constexpr (std::same_as<Source, WeightedPointSet>) {
    return source;
  } else {
    WeightedPointSet out(std::max<std::size_t>(source.dim(), 1));
    out.reserve(source.size());
    Vec p(source.dim());
    for (std::size_t i = 0; i < source.size(); ++i) {
      source.load(i, p);
      out.push_back(p, source.weight(i));
    }
    return out;
  }
}

// Merges sorted draw indices into weighted points.
template <PointSource Source, class WeightOf>
WeightedPointSet merge_draws(const Source& source, std::vector<std::uint64_t>& draws, WeightOf weight_of) {
  std::sort(draws.begin(), draws.end());
  WeightedPointSet out(std::max<std::size_t>(source.dim(), 1));
  Vec p(source.dim());
  for (std::size_t i = 0; i < draws.size();) {
    std::size_t j = i;
    while (j < draws.size() && draws[j] == draws[i]) ++j;
    source.load(draws[i], p);
    out.push_back(p, static_cast<double>(j - i) * weight_of(draws[i]));
    i = j;
  }
  return out;
}

}  // namespace coreset_detail

// k centers by lip-aware k-means++ seeding (each next center drawn with
// probability proportional to w(p) * D(B, p)), best of ceil(log2(1+|P|))
// repetitions by weighted cost.
template <PointSource Source>
CenterSet bicriteria(const Source& points, std::size_t k, const LipSpec& lip, std::uint64_t seed) {
  const std::size_t n = points.size();
  if (n == 0) throw InvalidInput("bicriteria needs at least one point");
  if (k < 1) throw InvalidInput("k must be >= 1");
  const std::size_t d = points.dim();
  const std::size_t reps = std::max<std::size_t>(1, repetitions_for(n));
  Rng rng(seed);

  std::vector<double> wprefix(n);
  double total_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total_w += points.weight(i);
    wprefix[i] = total_w;
  }
  if (!(total_w > 0.0)) throw InvalidInput("bicriteria needs positive total weight");
  auto by_weight = [&]() {
    const double t = rng.uniform() * total_w;
    return static_cast<std::size_t>(std::upper_bound(wprefix.begin(), wprefix.end(), t) - wprefix.begin());
  };

  std::vector<double> nearest(n);
  std::vector<double> mass(n);
  Vec p(d);
  Vec best_coords;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t rep = 0; rep < reps; ++rep) {
    Vec coords(d);
    points.load(std::min(by_weight(), n - 1), coords);
    std::fill(nearest.begin(), nearest.end(), std::numeric_limits<double>::infinity());
    double cost = 0.0;
    for (std::size_t c = 0;; ++c) {
      std::span<const double> last{coords.data() + c * d, d};
      cost = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        points.load(i, p);
        nearest[i] = std::min(nearest[i], squared_distance(p, last));
        cost += points.weight(i) * lip.of_squared(nearest[i]);
        mass[i] = cost;
      }
      if (c + 1 == k) break;
      std::size_t pick;
      if (cost > 0.0) {
        const double t = rng.uniform() * cost;
        pick = static_cast<std::size_t>(std::upper_bound(mass.begin(), mass.end(), t) - mass.begin());
      } else {
        pick = by_weight();
      }
      coords.resize(coords.size() + d);
      points.load(std::min(pick, n - 1), {coords.data() + (c + 1) * d, d});
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_coords = std::move(coords);
    }
  }
  return CenterSet::unit(d, std::move(best_coords));
}

// Grid unions under the squared distance use the closed-form seeding.
inline CenterSet bicriteria(const GridUnion& grid, std::size_t k, const LipSpec& lip, std::uint64_t seed) {
  if (!lip.is_squared()) return bicriteria<GridUnion>(grid, k, lip, seed);
  if (grid.empty()) throw InvalidInput("bicriteria needs at least one point");
  const std::size_t reps = std::max<std::size_t>(1, repetitions_for(grid.size()));
  Rng rng(seed);
  CenterSet best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t rep = 0; rep < reps; ++rep) {
    CenterSet c = kmeanspp_seed(grid, k, rng);
    const double cost = grid_cost(grid, c);
    if (cost < best_cost) {
      best_cost = cost;
      best = std::move(c);
    }
  }
  return best;
}

// sens(p) = w(p) D(B,p) / cost(P,B) + w(p) / weight(cluster(p)). When the cost
// is zero every point gets 1/|P|.
template <PointSource Source>
SensitivityProfile compute_sensitivities(const Source& points, const CenterSet& centers, const LipSpec& lip) {
  const std::size_t n = points.size();
  if (n == 0) throw InvalidInput("sensitivities need at least one point");
  require_same_dim(points.dim(), centers.dim(), "points vs centers");
  SensitivityProfile prof;
  prof.sensitivities.resize(n);
  prof.cluster_weight.assign(centers.size(), 0.0);
  std::vector<std::uint32_t> cluster(n);
  Vec p(points.dim());
  for (std::size_t i = 0; i < n; ++i) {
    points.load(i, p);
    const std::size_t c = nearest_center(centers, p);
    cluster[i] = static_cast<std::uint32_t>(c);
    const double w = points.weight(i);
    const double dist = lifted_distance(centers, lip, p);
    prof.sensitivities[i] = w * dist;  // cost share numerator, normalized below
    prof.cost += w * dist;
    prof.cluster_weight[c] += w;
  }
  if (!(prof.cost > 0.0)) {
    std::fill(prof.sensitivities.begin(), prof.sensitivities.end(), 1.0 / static_cast<double>(n));
    prof.total = 1.0;
    return prof;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = points.weight(i);
    const double cw = prof.cluster_weight[cluster[i]];
    double s = prof.sensitivities[i] / prof.cost;
    if (cw > 0.0) s += w / cw;
    prof.sensitivities[i] = s;
    total += s;
  }
  prof.total = total;
  return prof;
}

// Sensitivity sampling: m i.i.d. draws proportional to sensitivity, weight
// w(p) * total / (m * sens(p)) per draw, duplicates merged. When m >= |P| the
// input is returned unchanged.
template <PointSource Source>
PointCoresetOutput core_set(const Source& points, const CoresetParams& params, const LipSpec& lip, std::uint64_t seed) {
  params.validate();
  const std::size_t n = points.size();
  if (n == 0) throw InvalidInput("core_set needs at least one point");
  PointCoresetOutput out;
  out.seed = seed;
  out.draws = sample_size(n, points.dim(), params);
  if (out.draws >= n) {
    out.identity = true;
    out.draws = n;
    out.sample = coreset_detail::copy_all(points);
    return out;
  }
  const CenterSet centers = bicriteria(points, params.k, lip, derive_seed(seed, 1));
  out.profile = compute_sensitivities(points, centers, lip);
  const auto& sens = out.profile.sensitivities;

  std::vector<double> prefix(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += sens[i];
    prefix[i] = acc;
  }
  Rng rng(derive_seed(seed, 2));
  std::vector<std::uint64_t> draws(out.draws);
  for (auto& dr : draws) {
    const double t = rng.uniform() * acc;
    dr = std::min<std::uint64_t>(n - 1, std::upper_bound(prefix.begin(), prefix.end(), t) - prefix.begin());
  }
  const double m = static_cast<double>(out.draws);
  const double total = out.profile.total;
  out.sample = coreset_detail::merge_draws(
      points, draws, [&](std::uint64_t i) { return points.weight(i) * total / (m * sens[i]); });
  return out;
}

// Grid unions under the squared distance: sensitivities are sampled through the
// nearest-center ranges without touching every point. A draw is, with
// probability 1/T, proportional to cost, and otherwise uniform inside a
// uniformly chosen nonempty cluster, where T = 1 + #nonempty clusters.
inline PointCoresetOutput core_set(const GridUnion& grid, const CoresetParams& params, const LipSpec& lip,
                                   std::uint64_t seed) {
  if (!lip.is_squared()) return core_set<GridUnion>(grid, params, lip, seed);
  params.validate();
  const std::size_t n = grid.size();
  if (n == 0) throw InvalidInput("core_set needs at least one point");
  PointCoresetOutput out;
  out.seed = seed;
  out.draws = sample_size(n, grid.dim(), params);
  if (out.draws >= n) {
    out.identity = true;
    out.draws = n;
    out.sample = grid.materialize();
    return out;
  }
  const double w = grid.uniform_weight();
  const CenterSet centers = bicriteria(grid, params.k, lip, derive_seed(seed, 1));
  const auto ranges = grid_ranges(grid, centers);
  SensitivityProfile& prof = out.profile;
  prof.cluster_weight.assign(centers.size(), 0.0);
  double raw_cost = 0.0;
  for (const auto& r : ranges) {
    raw_cost += r.cost;
    prof.cluster_weight[r.center] += w * r.count;
  }
  prof.cost = raw_cost * w;
  const double m = static_cast<double>(out.draws);
  Rng rng(derive_seed(seed, 2));
  std::vector<std::uint64_t> draws(out.draws);

  if (!(prof.cost > 0.0)) {
    prof.total = 1.0;
    for (auto& dr : draws) dr = rng.index(n);
    out.sample = coreset_detail::merge_draws(grid, draws, [&](std::uint64_t) { return w * static_cast<double>(n) / m; });
    return out;
  }

  std::vector<std::size_t> nonempty;
  for (std::size_t c = 0; c < centers.size(); ++c)
    if (prof.cluster_weight[c] > 0.0) nonempty.push_back(c);
  prof.total = 1.0 + static_cast<double>(nonempty.size());

  std::vector<double> cost_prefix(ranges.size());
  std::vector<std::vector<std::size_t>> members(centers.size());
  std::vector<std::vector<double>> count_prefix(centers.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < ranges.size(); ++j) {
    acc += ranges[j].cost;
    cost_prefix[j] = acc;
    const std::size_t c = ranges[j].center;
    members[c].push_back(j);
    count_prefix[c].push_back((count_prefix[c].empty() ? 0.0 : count_prefix[c].back()) + ranges[j].count);
  }

  std::vector<std::uint32_t> range_of(draws.size());
  for (std::size_t di = 0; di < draws.size(); ++di) {
    const double u = rng.uniform() * prof.total;
    std::size_t rj;
    std::int64_t idx;
    if (u < 1.0) {
      const double t = rng.uniform() * acc;
      rj = std::min<std::size_t>(ranges.size() - 1,
                                 std::upper_bound(cost_prefix.begin(), cost_prefix.end(), t) - cost_prefix.begin());
      while (ranges[rj].cost <= 0.0 && rj > 0) --rj;
      const double base = rj == 0 ? 0.0 : cost_prefix[rj - 1];
      const double target = std::clamp(t - base, 0.0, std::nextafter(ranges[rj].cost, 0.0));
      idx = grid_sample_in_range(grid, centers, ranges[rj], target);
    } else {
      const std::size_t c = nonempty[std::min<std::size_t>(nonempty.size() - 1, static_cast<std::size_t>(u - 1.0))];
      const auto& cp = count_prefix[c];
      const double t = rng.uniform() * cp.back();
      const std::size_t mj = std::min<std::size_t>(cp.size() - 1, std::upper_bound(cp.begin(), cp.end(), t) - cp.begin());
      rj = members[c][mj];
      idx = ranges[rj].first + static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(ranges[rj].count)));
    }
    draws[di] = grid_global_index(grid, ranges[rj].segment, idx);
    range_of[di] = static_cast<std::uint32_t>(rj);
  }

  // Sensitivity of a drawn point from its range's center.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> tagged(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) tagged[i] = {draws[i], range_of[i]};
  std::sort(tagged.begin(), tagged.end());
  const double inv_e = 1.0 / static_cast<double>(grid.eps_prime());
  WeightedPointSet sample(grid.dim());
  Vec p(grid.dim());
  for (std::size_t i = 0; i < tagged.size();) {
    std::size_t j = i;
    while (j < tagged.size() && tagged[j].first == tagged[i].first) ++j;
    const GridRange& r = ranges[tagged[i].second];
    const auto local = static_cast<std::int64_t>(tagged[i].first % grid.per_segment());
    const LineQuadratic f = line_quadratic(grid.segments()[r.segment], centers.center(r.center));
    const double dist = f(static_cast<double>(local) * inv_e);
    const double s = w * dist / prof.cost + w / prof.cluster_weight[r.center];
    grid.load(tagged[i].first, p);
    sample.push_back(p, static_cast<double>(j - i) * w * prof.total / (m * s));
    i = j;
  }
  out.sample = std::move(sample);
  return out;
}

}  // namespace segcoreset
