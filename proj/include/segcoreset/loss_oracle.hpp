#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "segcoreset/geometry.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

struct DenseLoss {
  double total = 0.0;       // sum of w * D with w = 1/(points_per_segment - 1)
  double mse = 0.0;         // unweighted sum of D divided by the number of points
  std::size_t points = 0;
};

// Uniform grid of points_per_segment points per segment, endpoints included.
// Points are generated on the fly, nothing is materialized.
inline DenseLoss dense_loss_report(std::span<const Segment> segments, const CenterSet& q, const LipSpec& lip,
                                   std::size_t points_per_segment) {
  if (points_per_segment < 2) throw InvalidInput("dense loss needs at least 2 points per segment");
  DenseLoss out;
  if (segments.empty()) return out;
  const double step = 1.0 / static_cast<double>(points_per_segment - 1);
  Vec p(q.dim());
  double raw = 0.0;
  for (const Segment& s : segments) {
    require_same_dim(q.dim(), s.dim(), "segment vs centers");
    double seg_sum = 0.0;
    for (std::size_t i = 0; i < points_per_segment; ++i) {
      s.point_at(static_cast<double>(i) * step, p);
      seg_sum += lifted_distance(q, lip, p);
    }
    raw += seg_sum;
  }
  out.points = segments.size() * points_per_segment;
  out.total = raw * step;
  out.mse = raw / static_cast<double>(out.points);
  return out;
}

inline double dense_loss(std::span<const Segment> segments, const CenterSet& q, const LipSpec& lip,
                         std::size_t points_per_segment) {
  return dense_loss_report(segments, q, lip, points_per_segment).total;
}

inline double dense_mse(std::span<const Segment> segments, const CenterSet& q, const LipSpec& lip,
                        std::size_t points_per_segment) {
  return dense_loss_report(segments, q, lip, points_per_segment).mse;
}

namespace detail {

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

inline double adaptive_simpson(const std::function<double(double)>& f, const SimpsonPanel& p, double tol,
                               int depth, int max_depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h = p.b - p.a;
  const double left = h / 12.0 * (p.fa + 4.0 * flm + p.fm);
  const double right = h / 12.0 * (p.fm + 4.0 * frm + p.fb);
  const double diff = left + right - p.whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth >= max_depth) throw NonConvergence("adaptive quadrature exceeded the subdivision depth limit");
  return adaptive_simpson(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1, max_depth) +
         adaptive_simpson(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction. The interval is first cut into
// `panels` equal pieces; tol is split evenly between them.
inline double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                                 int panels = 16, int max_depth = 60) {
  if (!(tol > 0.0)) throw InvalidInput("quadrature tolerance must be > 0");
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + h * i;
    const double hi = i + 1 == panels ? b : a + h * (i + 1);
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::adaptive_simpson(f, {lo, hi, flo, fm, fhi, whole}, tol / panels, 0, max_depth);
  }
  return total;
}

inline double quadrature_loss(const Segment& s, const CenterSet& q, const LipSpec& lip, double tol) {
  require_same_dim(q.dim(), s.dim(), "segment vs centers");
  Vec p(s.dim());
  return adaptive_integrate(
      [&](double x) {
        s.point_at(x, p);
        return lifted_distance(q, lip, p);
      },
      0.0, 1.0, tol);
}

// loss of a single segment: closed form where available, else the dense grid.
inline double segment_loss(const CenterSet& q, const LipSpec& lip, const Segment& s,
                           std::size_t fallback_points = 100'001) {
  if (exact_loss_supported(lip)) return segment_loss_exact(q, lip, s);
  const Segment one[] = {s};
  return dense_loss(one, q, lip, fallback_points);
}

inline double set_loss(const CenterSet& q, const LipSpec& lip, std::span<const Segment> segments,
                       std::size_t fallback_points = 100'001) {
  double total = 0.0;
  for (const Segment& s : segments) total += segment_loss(q, lip, s, fallback_points);
  return total;
}

}  // namespace segcoreset
