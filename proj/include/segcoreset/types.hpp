#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace segcoreset {

// Error hierarchy. Every rejected input throws one of these.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidInput : Error {
  using Error::Error;
};
struct UnsupportedOperation : Error {
  using Error::Error;
};
struct OverflowError : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

// Affine map x -> u + v*x on [0,1].
class Segment {
 public:
  Segment() = default;
  Segment(Vec u, Vec v) : u_(std::move(u)), v_(std::move(v)) {
    if (u_.empty()) throw InvalidInput("segment dimension must be >= 1");
    if (u_.size() != v_.size()) throw InvalidInput("segment offset and direction differ in dimension");
  }

  static Segment from_endpoints(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidInput("segment endpoints differ in dimension");
    Vec v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = b[i] - a[i];
    return Segment(Vec(a.begin(), a.end()), std::move(v));
  }

  std::size_t dim() const { return u_.size(); }
  const Vec& offset() const { return u_; }
  const Vec& direction() const { return v_; }
  Vec start() const { return u_; }
  Vec end() const { return point_at(1.0); }
  double length() const { return norm(v_); }
  bool degenerate() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; });
  }

  void point_at(double x, std::span<double> out) const {
    for (std::size_t i = 0; i < u_.size(); ++i) out[i] = u_[i] + v_[i] * x;
  }
  Vec point_at(double x) const {
    Vec p(u_.size());
    point_at(x, p);
    return p;
  }

  friend bool operator==(const Segment&, const Segment&) = default;

 private:
  Vec u_;
  Vec v_;
};

// Finite points with nonnegative weights, stored row-major.
class WeightedPointSet {
 public:
  WeightedPointSet() = default;
  explicit WeightedPointSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw InvalidInput("point dimension must be >= 1");
  }
  WeightedPointSet(std::size_t dim, Vec coords, Vec weights)
      : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
    if (dim == 0) throw InvalidInput("point dimension must be >= 1");
    if (coords_.size() != dim_ * weights_.size())
      throw InvalidInput("coordinate count does not match weights");
    for (double w : weights_)
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be finite and >= 0");
  }

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return weights_.empty(); }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  void load(std::size_t i, std::span<double> out) const {
    std::copy_n(coords_.data() + i * dim_, dim_, out.data());
  }
  double weight(std::size_t i) const { return weights_[i]; }

  const Vec& coords() const { return coords_; }
  const Vec& weights() const { return weights_; }
  Vec& mutable_weights() { return weights_; }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  void reserve(std::size_t n) {
    coords_.reserve(n * dim_);
    weights_.reserve(n);
  }

  void push_back(std::span<const double> p, double w) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw InvalidInput("point dimension mismatch");
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be finite and >= 0");
    coords_.insert(coords_.end(), p.begin(), p.end());
    weights_.push_back(w);
  }

  void append(const WeightedPointSet& other) {
    if (other.empty()) return;
    if (dim_ == 0) dim_ = other.dim_;
    if (other.dim_ != dim_) throw InvalidInput("point dimension mismatch");
    coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
    weights_.insert(weights_.end(), other.weights_.begin(), other.weights_.end());
  }

  friend bool operator==(const WeightedPointSet&, const WeightedPointSet&) = default;

 private:
  std::size_t dim_ = 0;
  Vec coords_;
  Vec weights_;
};

// The query object (C, w): k centers with per-center weights.
class CenterSet {
 public:
  CenterSet() = default;
  CenterSet(std::size_t dim, Vec coords, Vec weights)
      : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
    if (dim_ == 0) throw InvalidInput("center dimension must be >= 1");
    if (weights_.empty()) throw InvalidInput("a center set needs k >= 1 centers");
    if (coords_.size() != dim_ * weights_.size())
      throw InvalidInput("center coordinate count does not match weights");
    for (double w : weights_)
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("center weights must be finite and >= 0");
  }

  // Unit center weights.
  static CenterSet unit(std::size_t dim, Vec coords) {
    const std::size_t k = dim == 0 ? 0 : coords.size() / dim;
    return CenterSet(dim, std::move(coords), Vec(k, 1.0));
  }
  static CenterSet from_points(const std::vector<Vec>& pts, Vec weights = {}) {
    if (pts.empty()) throw InvalidInput("a center set needs k >= 1 centers");
    Vec coords;
    for (const auto& p : pts) {
      if (p.size() != pts.front().size()) throw InvalidInput("center dimension mismatch");
      coords.insert(coords.end(), p.begin(), p.end());
    }
    if (weights.empty()) weights.assign(pts.size(), 1.0);
    return CenterSet(pts.front().size(), std::move(coords), std::move(weights));
  }

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const double> center(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double weight(std::size_t i) const { return weights_[i]; }
  const Vec& coords() const { return coords_; }
  const Vec& weights() const { return weights_; }

  friend bool operator==(const CenterSet&, const CenterSet&) = default;

 private:
  std::size_t dim_ = 0;
  Vec coords_;
  Vec weights_;
};

// Distance transform applied to w(c)*||c - p||.
struct LipSpec {
  enum class Kind { identity, power, huber };

  Kind kind = Kind::identity;
  double r = 1.0;          // log-Lipschitz order
  double threshold = 1.0;  // huber only
  int eval_cost_t = 1;     // bookkeeping

  static LipSpec identity() { return {Kind::identity, 1.0, 1.0, 1}; }
  static LipSpec power(double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("power lip needs a finite r >= 0");
    return {Kind::power, r, 1.0, 1};
  }
  static LipSpec squared() { return power(2.0); }
  // Quadratic below the threshold, so the order is 2.
  static LipSpec huber(double threshold) {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw InvalidInput("huber threshold must be > 0");
    return {Kind::huber, 2.0, threshold, 1};
  }

  bool is_squared() const { return kind == Kind::power && r == 2.0; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::identity:
        return x;
      case Kind::power:
        if (r == 2.0) return x * x;
        if (r == 1.0) return x;
        if (r == 0.0) return 1.0;
        return std::pow(x, r);
      case Kind::huber:
        return x <= threshold ? 0.5 * x * x : threshold * (x - 0.5 * threshold);
    }
    return x;
  }

  // lip applied to sqrt(sq); avoids the square root for the squared kind.
  double of_squared(double sq) const {
    if (kind == Kind::power && r == 2.0) return sq;
    return (*this)(std::sqrt(sq));
  }

  std::string name() const {
    switch (kind) {
      case Kind::identity:
        return "identity";
      case Kind::power:
        return "power(" + std::to_string(r) + ")";
      case Kind::huber:
        return "huber(" + std::to_string(threshold) + ")";
    }
    return "unknown";
  }
};

// Default stand-in for the VC-dimension of the lifted-distance ball ranges.
inline std::uint64_t default_vc_dim(std::size_t k, std::size_t d) { return 10u * k * (d + 1); }

struct CoresetParams {
  std::size_t k = 1;
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t vc_dim_dstar = 0;  // 0: derive default_vc_dim(k, d) from the data dimension
  double sample_constant = 1.0;    // c in the sample-size formula
  double k_exponent = 1.0;         // kappa in (k+1)^kappa
  double convex_constant = 1.0;    // c* in the per-body sample count
  bool allow_unsafe_eps = false;   // skip the (0, 1/10] range check

  std::uint64_t dstar(std::size_t d) const { return vc_dim_dstar != 0 ? vc_dim_dstar : default_vc_dim(k, d); }

  void validate() const {
    if (k < 1) throw InvalidInput("k must be >= 1");
    if (!allow_unsafe_eps) {
      if (!(epsilon > 0.0 && epsilon <= 0.1)) throw InvalidInput("epsilon must lie in (0, 1/10]");
      if (!(delta > 0.0 && delta <= 0.1)) throw InvalidInput("delta must lie in (0, 1/10]");
    } else {
      if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("epsilon must lie in (0, 1)");
      if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    }
    if (!(sample_constant > 0.0) || !(k_exponent >= 0.0) || !(convex_constant > 0.0))
      throw InvalidInput("sampling constants must be positive");
  }
};

inline void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidInput(std::string("dimension mismatch: ") + what);
}

}  // namespace segcoreset
