#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "segcoreset/data_io.hpp"
#include "segcoreset/grid_union.hpp"
#include "segcoreset/random.hpp"
#include "segcoreset/solver.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

struct FrameDims {
  double width = 0.0;
  double height = 0.0;
};

inline constexpr std::size_t kTrackSubsample = 1000;
inline constexpr std::int64_t kTrackGridIntervals = 9;  // 10 points at i/9

inline std::array<double, 2> angle_features(double dx, double dy, FrameDims dims) {
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return {0.0, 0.0};
  const double to_deg = 180.0 / std::numbers::pi;
  const double theta1 = std::acos(std::clamp(dy / len, -1.0, 1.0)) * to_deg;
  const double theta2 = std::acos(std::clamp(dx / len, -1.0, 1.0)) * to_deg;
  const double s = std::max(dims.width, dims.height) / 180.0;
  return {theta1 * s, theta2 * s};
}

// 4-D segment (x1, y1, f) -> (x2, y2, f) where f holds the direction's angles
// to (0,1) and (1,0), scaled so 180 degrees maps to the largest frame side.
inline Segment featurize(const MotionVectorRecord& mv, FrameDims dims) {
  if (!(dims.width > 0.0) || !(dims.height > 0.0)) throw InvalidInput("frame dimensions must be positive");
  const auto f = angle_features(mv.x2 - mv.x1, mv.y2 - mv.y1, dims);
  const double a[] = {mv.x1, mv.y1, f[0], f[1]};
  const double b[] = {mv.x2, mv.y2, f[0], f[1]};
  return Segment::from_endpoints(a, b);
}

struct WindowTrack {
  std::array<double, 2> mean_start{0.0, 0.0};
  std::array<double, 2> mean_end{0.0, 0.0};
  std::vector<std::size_t> cluster_sizes;
  std::size_t largest = 0;       // index of the largest cluster
  std::size_t used = 0;          // vectors after subsampling
  std::vector<std::size_t> chosen;  // indices into the window's vectors

  double largest_size() const { return cluster_sizes.empty() ? 0.0 : static_cast<double>(cluster_sizes[largest]); }
  std::array<double, 2> displacement() const { return {mean_end[0] - mean_start[0], mean_end[1] - mean_start[1]}; }
};

// Distinct indices, uniformly without replacement, in draw order.
inline std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (m >= n) return idx;
  for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
  idx.resize(m);
  return idx;
}

inline WindowTrack track_window(std::span<const MotionVectorRecord> vectors, std::size_t k, FrameDims dims,
                                std::uint64_t seed) {
  if (k < 2) throw InvalidInput("tracking needs k >= 2");
  if (vectors.empty()) throw InvalidInput("track_window needs a nonempty window");
  Rng rng(derive_seed(seed, 0));
  WindowTrack out;
  out.chosen = subsample_indices(vectors.size(), kTrackSubsample, rng);
  out.used = out.chosen.size();

  std::vector<Segment> segs;
  segs.reserve(out.used);
  for (std::size_t i : out.chosen) segs.push_back(featurize(vectors[i], dims));
  const GridUnion grid(segs, kTrackGridIntervals, 1.0 / static_cast<double>(kTrackGridIntervals));
  const SolveResult sol = solve_grid(grid, k, derive_seed(seed, 1), repetitions_for(segs.size()));

  // The 10-point grid mean of a segment is its midpoint.
  const std::size_t kk = sol.centers.size();
  out.cluster_sizes.assign(kk, 0);
  std::vector<std::size_t> label(segs.size());
  Vec mid(4);
  for (std::size_t j = 0; j < segs.size(); ++j) {
    segs[j].point_at(0.5, mid);
    label[j] = nearest_center(sol.centers, mid);
    ++out.cluster_sizes[label[j]];
  }
  out.largest = 0;
  for (std::size_t c = 1; c < kk; ++c)
    if (out.cluster_sizes[c] > out.cluster_sizes[out.largest]) out.largest = c;

  double n = 0.0;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    if (label[j] != out.largest) continue;
    const auto& mv = vectors[out.chosen[j]];
    out.mean_start[0] += mv.x1;
    out.mean_start[1] += mv.y1;
    out.mean_end[0] += mv.x2;
    out.mean_end[1] += mv.y2;
    n += 1.0;
  }
  for (auto* a : {&out.mean_start, &out.mean_end})
    for (double& x : *a) x /= n;
  return out;
}

struct TrackEntry {
  std::int64_t window = 0;
  std::array<double, 2> mean_start{0.0, 0.0};
  std::array<double, 2> mean_end{0.0, 0.0};
  std::size_t largest_cluster_size = 0;
  std::size_t vectors = 0;  // vectors in the window before subsampling
  bool held = false;        // empty window, previous value repeated

  std::array<double, 2> displacement() const { return {mean_end[0] - mean_start[0], mean_end[1] - mean_start[1]}; }
};

struct TrackerStats {
  std::size_t vectors = 0;
  std::size_t frames = 0;
  std::size_t windows = 0;
  double seconds = 0.0;

  double vectors_per_second() const { return seconds > 0.0 ? static_cast<double>(vectors) / seconds : 0.0; }
  double frames_per_second() const { return seconds > 0.0 ? static_cast<double>(frames) / seconds : 0.0; }
};

struct TrackState {
  std::vector<MotionVectorRecord> window;  // vectors of the last processed window
  std::vector<TrackEntry> track;
  FrameDims frame_dims;
  TrackerStats stats;
};

// Non-overlapping windows of `window_len` frames; window w covers frames
// [w * window_len, (w + 1) * window_len).
inline TrackState run_tracker(std::span<const MotionVectorRecord> records, std::size_t k, FrameDims dims,
                              std::size_t window_len, std::uint64_t seed) {
  if (window_len < 1) throw InvalidInput("window length must be >= 1");
  if (!(dims.width > 0.0) || !(dims.height > 0.0)) throw InvalidInput("frame dimensions must be positive");
  if (k < 2) throw InvalidInput("tracking needs k >= 2");
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].frame < records[i - 1].frame) throw InvalidInput("motion vectors must be sorted by frame");

  const auto t0 = std::chrono::steady_clock::now();
  TrackState state;
  state.frame_dims = dims;
  if (records.empty()) return state;
  const auto wl = static_cast<std::int64_t>(window_len);
  const std::int64_t last_window = records.back().frame / wl;
  std::size_t pos = 0;
  TrackEntry prev;
  prev.held = true;
  for (std::int64_t w = 0; w <= last_window; ++w) {
    const std::size_t begin = pos;
    while (pos < records.size() && records[pos].frame / wl == w) ++pos;
    TrackEntry e;
    e.window = w;
    e.vectors = pos - begin;
    if (pos == begin) {
      e = prev;
      e.window = w;
      e.vectors = 0;
      e.held = true;
    } else {
      const auto win = records.subspan(begin, pos - begin);
      const WindowTrack t = track_window(win, k, dims, derive_seed(seed, static_cast<std::uint64_t>(w)));
      e.mean_start = t.mean_start;
      e.mean_end = t.mean_end;
      e.largest_cluster_size = static_cast<std::size_t>(t.largest_size());
      e.held = false;
      state.window.assign(win.begin(), win.end());
      prev = e;
    }
    state.track.push_back(e);
  }
  state.stats.vectors = records.size();
  state.stats.frames = static_cast<std::size_t>(records.back().frame - records.front().frame + 1);
  state.stats.windows = state.track.size();
  state.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return state;
}

// Track CSV `window,start_x,start_y,end_x,end_y,largest_cluster_size`.
inline void write_track_csv(std::ostream& out, std::span<const TrackEntry> track) {
  out << "window,start_x,start_y,end_x,end_y,largest_cluster_size\n";
  for (const auto& e : track)
    out << e.window << ',' << io_detail::format_double(e.mean_start[0]) << ','
        << io_detail::format_double(e.mean_start[1]) << ',' << io_detail::format_double(e.mean_end[0]) << ','
        << io_detail::format_double(e.mean_end[1]) << ',' << e.largest_cluster_size << '\n';
}

inline void save_track_csv(const std::string& path, std::span<const TrackEntry> track) {
  auto out = io_detail::open_out(path);
  write_track_csv(out, track);
  io_detail::finish(out, path);
}

}  // namespace segcoreset
