#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "segcoreset/grid_union.hpp"
#include "segcoreset/point_coreset.hpp"
#include "segcoreset/random.hpp"
#include "segcoreset/seg_coreset.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

// Box center + sum_j s_j * half_extent_j * axis_j, s_j in [-1, 1]. Axes are
// the rows of a d x d orthonormal matrix.
struct OrientedBox {
  Vec center;
  Vec axes;
  Vec half_extents;

  std::size_t dim() const { return center.size(); }
  double volume() const {
    double v = 1.0;
    for (double h : half_extents) v *= 2.0 * h;
    return v;
  }
  void sample(Rng& rng, std::span<double> out) const {
    const std::size_t d = dim();
    std::copy(center.begin(), center.end(), out.begin());
    for (std::size_t j = 0; j < d; ++j) {
      const double s = (2.0 * rng.uniform() - 1.0) * half_extents[j];
      for (std::size_t i = 0; i < d; ++i) out[i] += s * axes[j * d + i];
    }
  }

  static OrientedBox axis_aligned(std::span<const double> lo, std::span<const double> hi) {
    require_same_dim(lo.size(), hi.size(), "box corners");
    const std::size_t d = lo.size();
    OrientedBox b;
    b.center.resize(d);
    b.half_extents.resize(d);
    b.axes.assign(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      b.center[i] = 0.5 * (lo[i] + hi[i]);
      b.half_extents[i] = 0.5 * (hi[i] - lo[i]);
      b.axes[i * d + i] = 1.0;
    }
    return b;
  }
};

// A convex set given by a membership oracle and a bounding box.
struct ConvexBody {
  std::function<bool(std::span<const double>)> contains;
  OrientedBox box;

  std::size_t dim() const { return box.dim(); }

  void validate() const {
    if (!contains) throw InvalidInput("convex body needs a membership oracle");
    const std::size_t d = box.dim();
    if (d == 0 || box.half_extents.size() != d || box.axes.size() != d * d)
      throw InvalidInput("bounding box shape does not match its dimension");
    if (!(box.volume() > 0.0) || !std::isfinite(box.volume())) throw InvalidInput("bounding box volume must be > 0");
  }

  static ConvexBody box_body(std::span<const double> lo, std::span<const double> hi) {
    Vec l(lo.begin(), lo.end());
    Vec h(hi.begin(), hi.end());
    ConvexBody b;
    b.box = OrientedBox::axis_aligned(l, h);
    b.contains = [l, h](std::span<const double> p) {
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] < l[i] || p[i] > h[i]) return false;
      return true;
    };
    return b;
  }

  static ConvexBody ball(std::span<const double> center, double radius) {
    if (!(radius > 0.0)) throw InvalidInput("ball radius must be > 0");
    Vec lo(center.begin(), center.end());
    Vec hi(center.begin(), center.end());
    for (auto& x : lo) x -= radius;
    for (auto& x : hi) x += radius;
    ConvexBody b;
    b.box = OrientedBox::axis_aligned(lo, hi);
    Vec c(center.begin(), center.end());
    const double r2 = radius * radius;
    b.contains = [c, r2](std::span<const double> p) { return squared_distance(p, c) <= r2; };
    return b;
  }

  // Principal axes as rows of an orthonormal matrix, with their semi-axis lengths.
  static ConvexBody ellipsoid(std::span<const double> center, std::span<const double> axes,
                              std::span<const double> semi_axes) {
    const std::size_t d = center.size();
    if (axes.size() != d * d || semi_axes.size() != d) throw InvalidInput("ellipsoid axes do not match its dimension");
    for (double s : semi_axes)
      if (!(s > 0.0)) throw InvalidInput("ellipsoid semi-axes must be > 0");
    ConvexBody b;
    b.box.center.assign(center.begin(), center.end());
    b.box.axes.assign(axes.begin(), axes.end());
    b.box.half_extents.assign(semi_axes.begin(), semi_axes.end());
    Vec c = b.box.center;
    Vec ax = b.box.axes;
    Vec sa = b.box.half_extents;
    b.contains = [c, ax, sa, d](std::span<const double> p) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double proj = 0.0;
        for (std::size_t i = 0; i < d; ++i) proj += (p[i] - c[i]) * ax[j * d + i];
        proj /= sa[j];
        acc += proj * proj;
      }
      return acc <= 1.0;
    };
    return b;
  }

  // {x : A x <= b}, A row-major with one row per half-space. The box is the
  // axis-aligned hull of the given vertices.
  static ConvexBody polytope(std::span<const double> a, std::span<const double> rhs,
                             const std::vector<Vec>& vertices) {
    if (vertices.empty()) throw InvalidInput("polytope needs its vertices for a bounding box");
    const std::size_t d = vertices.front().size();
    if (a.size() != rhs.size() * d) throw InvalidInput("half-space matrix does not match its dimension");
    Vec lo = vertices.front();
    Vec hi = vertices.front();
    for (const auto& v : vertices) {
      require_same_dim(v.size(), d, "polytope vertex");
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
    ConvexBody b;
    b.box = OrientedBox::axis_aligned(lo, hi);
    Vec av(a.begin(), a.end());
    Vec bv(rhs.begin(), rhs.end());
    b.contains = [av, bv, d](std::span<const double> p) {
      for (std::size_t r = 0; r < bv.size(); ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += av[r * d + i] * p[i];
        if (s > bv[r] + 1e-12) return false;
      }
      return true;
    };
    return b;
  }
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineReport {
  WeightedPointSet coreset;
  std::uint64_t intermediate_size = 0;
  std::uint64_t final_size = 0;  // number of draws m, or the intermediate size for the identity branch
  std::int64_t eps_prime = 0;    // final weight divisor for segments
  std::int64_t seg_eps_prime = 0;
  bool identity = false;
  std::uint64_t seed = 0;
  std::vector<StageTiming> timings;
  // Convex bodies only.
  double lambda = 0.0;
  std::vector<double> acceptance_rate;
  std::vector<double> volume_estimate;
};

namespace pipeline_detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline CoresetParams reduced(const CoresetParams& params, double eps_div, double delta_div) {
  CoresetParams p = params;
  p.epsilon = params.epsilon / eps_div;
  p.delta = params.delta / delta_div;
  return p;
}

}  // namespace pipeline_detail

// Segments -> per-segment grids at epsilon/2 (unit weights) -> sensitivity
// sampling at epsilon/4 -> weights divided by ceil(8k(20k)^(r+1)/epsilon).
inline PipelineReport coreset_of_segments(std::span<const Segment> segments, const CoresetParams& params,
                                          const LipSpec& lip, std::uint64_t seed) {
  params.validate();
  if (segments.empty()) throw InvalidInput("coreset_of_segments needs at least one segment");
  pipeline_detail::Stopwatch sw;
  PipelineReport rep;
  rep.seed = seed;
  rep.seg_eps_prime = grid_count(params.k, params.epsilon / 2.0, lip.r);
  const GridUnion grid(std::vector<Segment>(segments.begin(), segments.end()), rep.seg_eps_prime, 1.0);
  rep.intermediate_size = grid.size();
  rep.timings.push_back({"seg_coreset", sw.lap()});

  PointCoresetOutput reduced = core_set(grid, pipeline_detail::reduced(params, 4.0, 1.0), lip, seed);
  rep.timings.push_back({"core_set", sw.lap()});

  rep.eps_prime = grid_count(params.k, params.epsilon, lip.r, 8.0);
  rep.identity = reduced.identity;
  rep.final_size = reduced.draws;
  rep.coreset = std::move(reduced.sample);
  for (double& w : rep.coreset.mutable_weights()) w /= static_cast<double>(rep.eps_prime);
  rep.timings.push_back({"reweight", sw.lap()});
  return rep;
}

// lambda = c* d* (t+1) / eps^2 (k ln(t+1) + ln(2/delta)), t = (20k)^(d(r+1)).
inline double convex_lambda(std::size_t d, const CoresetParams& params, const LipSpec& lip) {
  const double ln_t = static_cast<double>(d) * (lip.r + 1.0) * std::log(20.0 * static_cast<double>(params.k));
  const double ln_t1 = ln_t + std::log1p(std::exp(-ln_t));  // ln(t + 1)
  const double rest = params.convex_constant * static_cast<double>(params.dstar(d)) /
                      (params.epsilon * params.epsilon) *
                      (static_cast<double>(params.k) * ln_t1 + std::log(2.0 / params.delta));
  const double ln_lambda = ln_t1 + std::log(rest);
  if (!std::isfinite(ln_lambda) || ln_lambda > std::log(static_cast<double>(kMaxGridCount)))
    throw OverflowError("per-body sample count exceeds 2^31-2; lower the convex constant c*");
  return std::exp(ln_lambda);
}

struct ConvexSample {
  WeightedPointSet points;
  std::uint64_t trials = 0;
  double volume = 0.0;
};

// Rejection sampling of `count` members of one body, each weighted by the
// estimated body volume over `count`.
inline ConvexSample sample_body(const ConvexBody& body, std::uint64_t count, std::uint64_t seed) {
  body.validate();
  Rng rng(seed);
  const std::size_t d = body.dim();
  ConvexSample out;
  out.points = WeightedPointSet(d);
  out.points.reserve(count);
  Vec p(d);
  const double stall_limit = 1e6 * static_cast<double>(count);
  double streak = 0.0;
  Vec coords;
  coords.reserve(count * d);
  std::uint64_t accepted = 0;
  while (accepted < count) {
    body.box.sample(rng, p);
    ++out.trials;
    if (body.contains(p)) {
      coords.insert(coords.end(), p.begin(), p.end());
      ++accepted;
      streak = 0.0;
    } else if (++streak >= stall_limit) {
      throw Error("rejection sampling stalled: " + std::to_string(out.trials) +
                  " trials without acceptance; check the bounding box and membership oracle");
    }
  }
  out.volume = body.box.volume() * static_cast<double>(accepted) / static_cast<double>(out.trials);
  out.points = WeightedPointSet(d, std::move(coords), Vec(count, out.volume / static_cast<double>(count)));
  return out;
}

// Convex bodies -> lambda uniform members per body -> sensitivity sampling at
// (epsilon/4, delta/2). Each member carries volume/lambda so the weighted sum
// estimates the volume integral of the lifted distance.
inline PipelineReport coreset_of_convex(std::span<const ConvexBody> bodies, const CoresetParams& params,
                                        const LipSpec& lip, std::uint64_t seed, unsigned threads = 1) {
  params.validate();
  if (bodies.empty()) throw InvalidInput("coreset_of_convex needs at least one body");
  const std::size_t d = bodies.front().dim();
  if (d < 2) throw InvalidInput("convex coresets need dimension d >= 2");
  for (const auto& b : bodies) {
    b.validate();
    require_same_dim(b.dim(), d, "convex bodies");
  }
  pipeline_detail::Stopwatch sw;
  PipelineReport rep;
  rep.seed = seed;
  rep.lambda = convex_lambda(d, params, lip);
  const auto count = static_cast<std::uint64_t>(std::ceil(rep.lambda));

  std::vector<ConvexSample> samples(bodies.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(bodies.size())));
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < bodies.size(); i += threads)
            samples[i] = sample_body(bodies[i], count, derive_seed(seed, 1000 + i));
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  WeightedPointSet all(d);
  for (const auto& s : samples) {
    all.append(s.points);
    rep.acceptance_rate.push_back(static_cast<double>(count) / static_cast<double>(s.trials));
    rep.volume_estimate.push_back(s.volume);
  }
  rep.intermediate_size = all.size();
  rep.timings.push_back({"rejection_sampling", sw.lap()});

  PointCoresetOutput reduced = core_set(all, pipeline_detail::reduced(params, 4.0, 2.0), lip, seed);
  rep.timings.push_back({"core_set", sw.lap()});
  rep.identity = reduced.identity;
  rep.final_size = reduced.draws;
  rep.coreset = std::move(reduced.sample);
  return rep;
}

}  // namespace segcoreset
