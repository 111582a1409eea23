#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

using namespace segcoreset;

namespace {

const FrameDims kDims{1280.0, 720.0};

MotionVectorRecord mv(std::int64_t f, double x1, double y1, double dx, double dy) {
  return {f, x1, y1, x1 + dx, y1 + dy};
}

}  // namespace

TEST(Featurize, AngleArithmetic) {
  const double s = 1280.0 / 180.0;
  const Segment up = featurize(mv(0, 10, 20, 0, 1), {720.0, 1280.0});
  EXPECT_NEAR(up.start()[2], 0.0, 1e-9);
  EXPECT_NEAR(up.start()[3], 640.0, 1e-9);
  const Segment right = featurize(mv(0, 10, 20, 1, 0), kDims);
  EXPECT_NEAR(right.start()[2], 90.0 * s, 1e-9);
  EXPECT_NEAR(right.start()[3], 0.0, 1e-9);
  const Segment still = featurize(mv(0, 10, 20, 0, 0), kDims);
  EXPECT_EQ(still.start()[2], 0.0);
  EXPECT_EQ(still.start()[3], 0.0);
}

TEST(Featurize, SegmentShape) {
  const Segment s = featurize(mv(0, 10, 20, 3, -4), kDims);
  EXPECT_EQ(s.dim(), 4u);
  EXPECT_EQ(s.start()[0], 10.0);
  EXPECT_EQ(s.end()[1], 16.0);
  EXPECT_EQ(s.direction()[2], 0.0);
  EXPECT_EQ(s.direction()[3], 0.0);
  // Reversal maps each angle to 180 - angle.
  const Segment r = featurize(mv(0, 13, 16, -3, 4), kDims);
  const double full = 180.0 * 1280.0 / 180.0;
  EXPECT_NEAR(s.start()[2] + r.start()[2], full, 1e-9);
  EXPECT_NEAR(s.start()[3] + r.start()[3], full, 1e-9);
  EXPECT_THROW(featurize(mv(0, 0, 0, 1, 1), {0.0, 10.0}), InvalidInput);
}

TEST(TrackWindow, PureTranslation) {
  Rng rng(1);
  std::vector<MotionVectorRecord> w;
  for (int i = 0; i < 500; ++i) w.push_back(mv(i % 10, rng.uniform(0, 1000), rng.uniform(0, 700), 5, 0));
  const WindowTrack t = track_window(w, 2, kDims, 3);
  EXPECT_NEAR(t.displacement()[0], 5.0, 1e-9);
  EXPECT_NEAR(t.displacement()[1], 0.0, 1e-9);
  EXPECT_EQ(t.used, 500u);
}

TEST(TrackWindow, SubsamplesToOneThousandDistinct) {
  Rng rng(2);
  std::vector<MotionVectorRecord> w;
  for (int i = 0; i < 2000; ++i) w.push_back(mv(0, rng.uniform(0, 1000), rng.uniform(0, 700), 5, 0));
  const WindowTrack t = track_window(w, 2, kDims, 4);
  EXPECT_EQ(t.used, 1000u);
  const std::set<std::size_t> distinct(t.chosen.begin(), t.chosen.end());
  EXPECT_EQ(distinct.size(), 1000u);
  std::size_t total = 0;
  for (auto c : t.cluster_sizes) total += c;
  EXPECT_EQ(total, 1000u);
}

TEST(TrackWindow, MeansAreConvexCombinations) {
  Rng rng(3);
  std::vector<MotionVectorRecord> w;
  for (int i = 0; i < 300; ++i)
    w.push_back(mv(0, rng.uniform(100, 200), rng.uniform(300, 400), rng.uniform(-8, 8), rng.uniform(-8, 8)));
  const WindowTrack t = track_window(w, 3, kDims, 5);
  EXPECT_GE(t.mean_start[0], 100.0);
  EXPECT_LE(t.mean_start[0], 200.0);
  EXPECT_GE(t.mean_end[1], 292.0);
  EXPECT_LE(t.mean_end[1], 408.0);
  for (std::size_t c = 0; c < t.cluster_sizes.size(); ++c)
    EXPECT_LE(t.cluster_sizes[c], t.cluster_sizes[t.largest]);
}

TEST(TrackWindow, RejectsBadInput) {
  std::vector<MotionVectorRecord> w = {mv(0, 1, 1, 1, 1)};
  EXPECT_THROW(track_window(w, 1, kDims, 1), InvalidInput);
  EXPECT_THROW(track_window(std::span<const MotionVectorRecord>{}, 2, kDims, 1), InvalidInput);
}

TEST(TrackWindow, CoherentMotionWithNoise) {
  MotionStreamConfig cfg;
  cfg.frames = 10;
  cfg.vectors_per_frame = 200;
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto recs = gen_motion_stream(cfg, seed);
    const WindowTrack t = track_window(recs, 2, kDims, seed);
    if (std::hypot(t.displacement()[0] - 5.0, t.displacement()[1]) <= 0.5) ++good;
  }
  EXPECT_GE(good, 19);
}

TEST(RunTracker, ConstantMotionPiecewiseConstantTrack) {
  MotionStreamConfig cfg;
  cfg.frames = 400;
  cfg.vectors_per_frame = 50;
  cfg.coherent_fraction = 1.0;
  const auto recs = gen_motion_stream(cfg, 7);
  const TrackState st = run_tracker(recs, 2, kDims, 10, 7);
  ASSERT_EQ(st.track.size(), 40u);
  for (const auto& e : st.track) {
    EXPECT_NEAR(e.displacement()[0], 5.0, 1e-9);
    EXPECT_NEAR(e.displacement()[1], 0.0, 1e-9);
    EXPECT_FALSE(e.held);
  }
  EXPECT_EQ(st.stats.vectors, recs.size());
  EXPECT_EQ(st.stats.frames, 400u);
  EXPECT_GT(st.stats.vectors_per_second(), 0.0);
}

TEST(RunTracker, EmptyWindowHoldsPrevious) {
  std::vector<MotionVectorRecord> recs;
  for (int f : {0, 1, 2, 25, 26}) recs.push_back(mv(f, 10.0 * f, 5, 5, 0));
  const TrackState st = run_tracker(recs, 2, kDims, 10, 1);
  ASSERT_EQ(st.track.size(), 3u);
  EXPECT_TRUE(st.track[1].held);
  EXPECT_EQ(st.track[1].mean_start, st.track[0].mean_start);
  EXPECT_EQ(st.track[1].mean_end, st.track[0].mean_end);
  EXPECT_EQ(st.track[1].window, 1);
  EXPECT_FALSE(st.track[2].held);
}

TEST(RunTracker, FixedSeedIdenticalTrace) {
  MotionStreamConfig cfg;
  cfg.frames = 60;
  const auto recs = gen_motion_stream(cfg, 2);
  const TrackState a = run_tracker(recs, 2, kDims, 10, 9);
  const TrackState b = run_tracker(recs, 2, kDims, 10, 9);
  ASSERT_EQ(a.track.size(), b.track.size());
  for (std::size_t i = 0; i < a.track.size(); ++i) {
    EXPECT_EQ(a.track[i].mean_start, b.track[i].mean_start);
    EXPECT_EQ(a.track[i].mean_end, b.track[i].mean_end);
    EXPECT_EQ(a.track[i].largest_cluster_size, b.track[i].largest_cluster_size);
  }
}

TEST(RunTracker, RejectsUnsortedFrames) {
  std::vector<MotionVectorRecord> recs = {mv(3, 0, 0, 1, 0), mv(1, 0, 0, 1, 0)};
  EXPECT_THROW(run_tracker(recs, 2, kDims, 10, 1), InvalidInput);
}

TEST(TrackCsv, Layout) {
  TrackEntry e;
  e.window = 2;
  e.mean_start = {1.5, 2.0};
  e.mean_end = {6.5, 2.0};
  e.largest_cluster_size = 700;
  std::stringstream ss;
  const std::vector<TrackEntry> t = {e};
  write_track_csv(ss, t);
  EXPECT_EQ(ss.str(), "window,start_x,start_y,end_x,end_y,largest_cluster_size\n2,1.5,2,6.5,2,700\n");
}
