#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "segcoreset/types.hpp"

namespace segcoreset {

// min over centers c of lip(w(c) * ||c - p||).
inline double lifted_distance(const CenterSet& q, const LipSpec& lip, std::span<const double> p) {
  require_same_dim(q.dim(), p.size(), "query point vs centers");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < q.size(); ++c) {
    const double w = q.weight(c);
    best = std::min(best, w * w * squared_distance(q.center(c), p));
  }
  return lip.of_squared(best);
}

// Index of the center attaining the lifted distance; ties go to the lower index.
inline std::size_t nearest_center(const CenterSet& q, std::span<const double> p) {
  std::size_t arg = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < q.size(); ++c) {
    const double w = q.weight(c);
    const double v = w * w * squared_distance(q.center(c), p);
    if (v < best) {
      best = v;
      arg = c;
    }
  }
  return arg;
}

// Squared distance from segment(x) to one center, written as
// A (x + shift)^2 + perp, with A = |v|^2 and perp the squared distance from the
// center to the supporting line.
struct LineQuadratic {
  double A = 0.0;
  double B = 0.0;  // coefficient form A x^2 + B x + C
  double C = 0.0;
  double shift = 0.0;
  double perp = 0.0;

  double operator()(double x) const {
    const double y = x + shift;
    return A * y * y + perp;
  }
};

inline LineQuadratic line_quadratic(const Segment& s, std::span<const double> center) {
  const auto& u = s.offset();
  const auto& v = s.direction();
  const std::size_t d = s.dim();
  LineQuadratic lq;
  double wv = 0.0;
  double ww = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double w = u[i] - center[i];
    wv += w * v[i];
    ww += w * w;
    vv += v[i] * v[i];
  }
  lq.A = vv;
  lq.B = 2.0 * wv;
  lq.C = ww;
  if (vv > 0.0) {
    lq.shift = wv / vv;
    double perp = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double t = (u[i] - center[i]) - lq.shift * v[i];
      perp += t * t;
    }
    lq.perp = perp;
  } else {
    lq.shift = 0.0;
    lq.perp = ww;
  }
  return lq;
}

namespace detail {

constexpr double kDiscriminantTol = 1e-12;

// Real roots of a x^2 + b x + c inside (0, 1).
inline void roots_in_unit_interval(double a, double b, double c, std::vector<double>& out) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return;  // identical functions
  a /= scale;
  b /= scale;
  c /= scale;
  auto keep = [&](double x) {
    if (x > 0.0 && x < 1.0 && std::isfinite(x)) out.push_back(x);
  };
  if (std::abs(a) < 1e-14) {
    if (std::abs(b) > 1e-14) keep(-c / b);
    return;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -kDiscriminantTol) return;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double qv = -0.5 * (b + std::copysign(sq, b));
  if (qv != 0.0) {
    keep(qv / a);
    keep(c / qv);
  } else {
    keep(-b / (2.0 * a));
  }
}

// Antiderivative of sqrt(y^2 + h2) in y.
inline double sqrt_quadratic_antiderivative(double y, double h2) {
  const double r = std::sqrt(y * y + h2);
  if (h2 <= 0.0) return 0.5 * y * std::abs(y);
  return 0.5 * (y * r + h2 * std::asinh(y / std::sqrt(h2)));
}

}  // namespace detail

// Parameters in (0,1) where the weighted-nearest center along s may change.
inline std::vector<double> segment_breakpoints(const CenterSet& q, const Segment& s) {
  require_same_dim(q.dim(), s.dim(), "segment vs centers");
  std::vector<LineQuadratic> lq;
  lq.reserve(q.size());
  for (std::size_t c = 0; c < q.size(); ++c) lq.push_back(line_quadratic(s, q.center(c)));
  std::vector<double> xs;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double wi = q.weight(i) * q.weight(i);
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      const double wj = q.weight(j) * q.weight(j);
      detail::roots_in_unit_interval((wi - wj) * lq[i].A, wi * lq[i].B - wj * lq[j].B,
                                     wi * lq[i].C - wj * lq[j].C, xs);
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

inline bool exact_loss_supported(const LipSpec& lip) {
  return lip.kind == LipSpec::Kind::identity || (lip.kind == LipSpec::Kind::power && (lip.r == 1.0 || lip.r == 2.0));
}

// Closed-form integral over [0,1] of the lifted distance along s.
// Supported for the identity and squared transforms only.
inline double segment_loss_exact(const CenterSet& q, const LipSpec& lip, const Segment& s) {
  if (!exact_loss_supported(lip))
    throw UnsupportedOperation("closed-form segment loss is only available for identity and power(2); use dense_loss");
  require_same_dim(q.dim(), s.dim(), "segment vs centers");
  const bool squared = lip.kind == LipSpec::Kind::power && lip.r == 2.0;

  if (s.degenerate()) return lifted_distance(q, lip, s.offset());

  std::vector<LineQuadratic> lq;
  lq.reserve(q.size());
  for (std::size_t c = 0; c < q.size(); ++c) lq.push_back(line_quadratic(s, q.center(c)));

  std::vector<double> cuts{0.0};
  const auto bps = segment_breakpoints(q, s);
  cuts.insert(cuts.end(), bps.begin(), bps.end());
  cuts.push_back(1.0);

  double total = 0.0;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double x0 = cuts[piece];
    const double x1 = cuts[piece + 1];
    if (!(x1 > x0)) continue;
    const double mid = 0.5 * (x0 + x1);
    std::size_t arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < q.size(); ++c) {
      const double w = q.weight(c);
      const double v = w * w * lq[c](mid);
      if (v < best) {
        best = v;
        arg = c;
      }
    }
    const LineQuadratic& f = lq[arg];
    const double w = q.weight(arg);
    const double a = x1 + f.shift;
    const double b = x0 + f.shift;
    if (squared) {
      // w^2 * [A (a^3 - b^3) / 3 + perp (x1 - x0)]
      const double cube_diff = (a - b) * (a * a + a * b + b * b);
      total += w * w * (f.A * cube_diff / 3.0 + f.perp * (x1 - x0));
    } else {
      const double h2 = f.perp / f.A;
      total += w * std::sqrt(f.A) *
               (detail::sqrt_quadratic_antiderivative(a, h2) - detail::sqrt_quadratic_antiderivative(b, h2));
    }
  }
  return total;
}

}  // namespace segcoreset
