// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Sub-checks are listed under their line.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "test_support.hpp"

using namespace segcoreset;
using tu::random_centers;
using tu::random_segment;
using tu::rel_err;
using tu::seg2;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + note);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Runs body(i) for i in [0, n) on all hardware threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
}

CoresetParams params(std::size_t k, double eps, double delta) {
  CoresetParams p;
  p.k = k;
  p.epsilon = eps;
  p.delta = delta;
  p.allow_unsafe_eps = eps > 0.1 || delta > 0.1;
  return p;
}

// 1. Per-segment grid guarantee ------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(1001);
  int failures = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + rng.index(10);
    const std::size_t k = 1 + rng.index(4);
    const LipSpec lip = trial % 2 == 0 ? LipSpec::identity() : LipSpec::power(2);
    const double eps = trial % 4 < 2 ? 0.1 : 0.05;
    const Segment s = random_segment(rng, d);
    const CenterSet q = random_centers(rng, k, d, 0.5, 2.0);
    const double exact = segment_loss_exact(q, lip, s);
    const double approx = seg_coreset_grid(s, k, eps, lip).cost(q, lip);
    const double ratio = std::abs(approx - exact) / (eps * exact);
    worst = std::max(worst, ratio);
    failures += ratio > 1.0;
  }
  const double secs = since(t0);
  o.check(failures == 0, fmt("500 trials, %d violations, worst |err|/(eps*loss) = %.3g", failures, worst));
  o.check(secs < 300.0, fmt("runtime %.1f s < 300 s", secs));
  return o;
}

// 2. Pipeline guarantee ---------------------------------------------------

struct PipelineTrial {
  int good_seeds = 0;
  double worst = 0.0;
  std::uint64_t final_size = 0, intermediate = 0;
  bool identity = false;
};

PipelineTrial pipeline_trial(const std::vector<Segment>& L, const CoresetParams& p, const LipSpec& lip) {
  const std::size_t d = L.front().dim();
  std::vector<CenterSet> queries;
  Rng qrng(2002);
  for (int i = 0; i < 100; ++i) queries.push_back(random_centers(qrng, p.k, d, 0.5, 2.0));
  std::vector<double> exact;
  for (const auto& q : queries) exact.push_back(set_loss(q, lip, L));

  PipelineTrial out;
  std::vector<double> worst(100, 0.0);
  std::vector<int> good(100, 0);
  std::vector<PipelineReport> reps(100);
  parallel_for(100, [&](std::size_t seed) {
    const PipelineReport rep = coreset_of_segments(L, p, lip, seed);
    double w = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i)
      w = std::max(w, rel_err(coreset_cost(rep.coreset, queries[i], lip), exact[i]));
    worst[seed] = w;
    good[seed] = w <= p.epsilon;
    reps[seed].final_size = rep.final_size;
    reps[seed].intermediate_size = rep.intermediate_size;
    reps[seed].identity = rep.identity;
  });
  for (int s = 0; s < 100; ++s) {
    out.good_seeds += good[s];
    out.worst = std::max(out.worst, worst[s]);
  }
  out.final_size = reps[0].final_size;
  out.intermediate = reps[0].intermediate_size;
  out.identity = reps[0].identity;
  return out;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<Segment> L = gen_synthetic(20, 2, 2020);
  const LipSpec lip = LipSpec::identity();
  CoresetParams p = params(2, 0.25, 0.1);

  const PipelineTrial def = pipeline_trial(L, p, lip);
  o.check(def.good_seeds >= 90, fmt("default constants (c = 1): %d/100 seeds good, worst rel err %.4f, "
                                    "identity branch %s (m %llu vs %llu points)",
                                    def.good_seeds, def.worst, def.identity ? "yes" : "no",
                                    static_cast<unsigned long long>(def.final_size),
                                    static_cast<unsigned long long>(def.intermediate)));

  // Shrink c until m is about 1% of the intermediate set so the sampling
  // branch is exercised as well.
  CoresetParams quarter = p;
  quarter.epsilon = p.epsilon / 4.0;
  const double m1 = static_cast<double>(sample_size(def.intermediate, 2, quarter));
  p.sample_constant = 0.01 * static_cast<double>(def.intermediate) / m1;
  const PipelineTrial samp = pipeline_trial(L, p, lip);
  o.check(!samp.identity && samp.good_seeds >= 90,
          fmt("sampling branch (c = %.3g, m = %llu): %d/100 seeds good, worst rel err %.4f", p.sample_constant,
              static_cast<unsigned long long>(samp.final_size), samp.good_seeds, samp.worst));
  const double secs = since(t0);
  o.check(secs < 600.0, fmt("runtime %.1f s < 600 s", secs));
  return o;
}

// 3. Sensitivity and grid bounds ------------------------------------------

std::size_t count_extrema(const std::vector<double>& f, double tol) {
  int last_dir = 0;
  std::size_t extrema = 0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double diff = f[i] - f[i - 1];
    const int dir = diff > tol ? 1 : (diff < -tol ? -1 : 0);
    if (dir == 0) continue;
    if (last_dir != 0 && dir != last_dir) ++extrema;
    last_dir = dir;
  }
  return extrema;
}

Outcome criterion3() {
  Outcome o;
  {
    double sum = 0.0;
    for (int i = 1; i <= 100; ++i) sum += static_cast<double>(i) * i;
    const double ratio = 10000.0 / sum;
    o.check(sum == 338350.0 && std::abs(ratio - 0.02956) < 1e-5 && ratio <= 0.16,
            fmt("reference f(x)=x^2, n=100: sum %.0f, ratio %.5f <= 0.16", sum, ratio));
  }
  Rng rng(3003);
  int v1 = 0, v2 = 0, cases = 0;
  for (int n : {100, 1000})
    for (double r : {0.0, 1.0, 2.0})
      for (int t = 0; t < 200; ++t, ++cases) {
        const double a = rng.uniform(-0.5 * n, 1.5 * n);
        double sum = 0.0, mx = 0.0;
        for (int i = 1; i <= n; ++i) {
          const double v = std::pow(std::abs(i - a), r);
          sum += v;
          mx = std::max(mx, v);
        }
        v1 += mx / sum > std::pow(2.0, r + 2) / n;
        const int k = 1 + static_cast<int>(rng.index(4));
        std::vector<double> as(k), ws(k);
        for (int j = 0; j < k; ++j) {
          as[j] = rng.uniform(-0.5 * n, 1.5 * n);
          ws[j] = rng.uniform(0.5, 2.0);
        }
        sum = mx = 0.0;
        for (int i = 1; i <= n; ++i) {
          double v = INFINITY;
          for (int j = 0; j < k; ++j) v = std::min(v, std::pow(ws[j] * std::abs(i - as[j]), r));
          sum += v;
          mx = std::max(mx, v);
        }
        if (sum > 0.0) v2 += mx / sum > std::pow(10.0 * k, r + 1) / n;
      }
  o.check(v1 == 0, fmt("single-function bound 2^(r+2)/n: %d violations in %d cases", v1, cases));
  o.check(v2 == 0, fmt("symmetric-r bound (10k)^(r+1)/n: %d violations in %d cases", v2, cases));

  int v5 = 0, c5 = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng.index(10), k = 1 + rng.index(4);
    const Segment s = random_segment(rng, d);
    const CenterSet q = random_centers(rng, k, d, 0.5, 2.0);
    for (const auto& lip : {LipSpec::identity(), LipSpec::power(2)}) {
      double sum = 0.0, mx = 0.0;
      Vec p(d);
      for (int i = 1; i <= 10000; ++i) {
        s.point_at(i / 10000.0, p);
        const double v = lifted_distance(q, lip, p);
        sum += v;
        mx = std::max(mx, v);
      }
      ++c5;
      v5 += mx / sum > std::pow(20.0 * static_cast<double>(k), lip.r + 1) / 10000.0;
    }
  }
  o.check(v5 == 0, fmt("segment sensitivity bound (20k)^(r+1)/n, n=10000: %d violations in %d cases", v5, c5));

  int vm = 0, cm = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + rng.index(10), k = 1 + rng.index(4);
    const Segment s = random_segment(rng, d);
    const bool weighted = t % 2 == 1;
    const CenterSet q = random_centers(rng, k, d, weighted ? 0.5 : 1.0, weighted ? 2.0 : 1.0);
    for (const auto& lip : {LipSpec::identity(), LipSpec::power(2)}) {
      std::vector<double> f(100001);
      Vec p(d);
      for (std::size_t i = 0; i < f.size(); ++i) {
        s.point_at(static_cast<double>(i) / 100000.0, p);
        f[i] = lifted_distance(q, lip, p);
      }
      ++cm;
      vm += count_extrema(f, 1e-9) > 2 * k - 1;
    }
  }
  o.check(vm == 0, fmt("2k-piecewise monotonicity (<= 2k-1 extrema on 1e5 grid): %d violations in %d cases", vm, cm));

  int vg = 0, cg = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + static_cast<int>(rng.index(5));
    std::vector<double> cuts = {0.0, 1.0};
    for (int j = 1; j < k; ++j) cuts.push_back(rng.uniform());
    std::sort(cuts.begin(), cuts.end());
    struct Piece {
      double lo, hi, v0, v1, p;
      double at(double x) const {
        return v0 + (v1 - v0) * std::pow(std::clamp((x - lo) / (hi - lo), 0.0, 1.0), p);
      }
    };
    std::vector<Piece> pieces;
    for (int j = 0; j < k; ++j)
      pieces.push_back({cuts[j], cuts[j + 1], rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0), rng.uniform(0.5, 4.0)});
    const auto f = [&](double x) {
      for (const auto& pc : pieces)
        if (x <= pc.hi && pc.hi > pc.lo) return pc.at(x);
      return pieces.back().at(x);
    };
    double t = 0.0, fmax = 0.0;
    for (const auto& pc : pieces) {
      if (pc.hi <= pc.lo) continue;
      t += adaptive_integrate([&pc](double x) { return pc.at(x); }, pc.lo, pc.hi, 1e-7, 4);
      fmax = std::max({fmax, pc.v0, pc.v1});
    }
    if (!(t > 0.0)) continue;
    const double s = fmax / t;
    for (double eps : {0.3, 0.1, 0.05}) {
      const auto n = static_cast<std::int64_t>(std::ceil(2.0 * k * s / eps));
      double sum = 0.0;
      for (std::int64_t i = 0; i <= n; ++i) sum += f(static_cast<double>(i) / static_cast<double>(n));
      ++cg;
      vg += std::abs(sum / static_cast<double>(n + 1) - t) > eps * t;
    }
  }
  o.check(vg == 0, fmt("grid-integration lemma vs adaptive quadrature: %d violations in %d cases", vg, cg));
  return o;
}

// 4. Exact-loss oracle ----------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const Segment s = seg2(0, 0, 1, 0);
  const double a1 = segment_loss_exact(CenterSet::from_points({{0, 0}}), LipSpec::power(2), s);
  const double a2 = segment_loss_exact(CenterSet::from_points({{0, 0}, {1, 0}}), LipSpec::identity(), s);
  const double a3 = segment_loss_exact(CenterSet::from_points({{0.5, 1}}), LipSpec::power(2), s);
  o.check(std::abs(a1 - 1.0 / 3.0) <= 1e-12 && std::abs(a2 - 0.25) <= 1e-12 && std::abs(a3 - 13.0 / 12.0) <= 1e-12,
          fmt("anchors %.15f %.15f %.15f (1/3, 1/4, 13/12)", a1, a2, a3));

  std::vector<Segment> segs;
  std::vector<CenterSet> qs;
  std::vector<LipSpec> lips;
  Rng rng(4004);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + rng.index(10), k = 1 + rng.index(5);
    segs.push_back(random_segment(rng, d));
    qs.push_back(random_centers(rng, k, d, 0.5, 2.0));
    lips.push_back(i % 2 == 0 ? LipSpec::identity() : LipSpec::power(2));
  }
  std::vector<double> err(1000);
  parallel_for(1000, [&](std::size_t i) {
    const double exact = segment_loss_exact(qs[i], lips[i], segs[i]);
    const double dense = dense_loss(std::span<const Segment>(&segs[i], 1), qs[i], lips[i], 1'000'000);
    err[i] = rel_err(exact, dense);
  });
  const double worst = *std::max_element(err.begin(), err.end());
  const auto bad = std::count_if(err.begin(), err.end(), [](double e) { return e > 1e-5; });
  o.check(bad == 0, fmt("1000 instances vs dense 1e6-point oracle: %lld above 1e-5, worst %.3g",
                        static_cast<long long>(bad), worst));
  return o;
}

// 5. Convex coresets ------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const auto t0 = Clock::now();
  {
    CoresetParams p = params(1, 0.2, 0.1);
    p.convex_constant = 2e-4;
    const std::vector<ConvexBody> bodies = {ConvexBody::ball(Vec{0.0, 0.0}, 1.0)};
    const auto rep = coreset_of_convex(bodies, p, LipSpec::identity(), 5);
    const double c = coreset_cost(rep.coreset, CenterSet::from_points({{0, 0}}), LipSpec::identity());
    const double want = 2.0 * std::numbers::pi / 3.0;
    o.check(rel_err(c, want) <= 0.05,
            fmt("unit disk: coreset cost %.4f vs 2pi/3 = %.4f (rel err %.4f, c* = %g, lambda = %.0f)", c, want,
                rel_err(c, want), p.convex_constant, rep.lambda));
  }
  {
    CoresetParams p = params(2, 0.2, 0.1);
    p.convex_constant = 1e-10;
    const std::vector<ConvexBody> bodies = {ConvexBody::ball(Vec{-5.0, 0.0}, 1.0),
                                            ConvexBody::ball(Vec{5.0, 0.0}, 1.0)};
    const auto rep = coreset_of_convex(bodies, p, LipSpec::power(2), 6, 2);
    const auto sol = solve_points(rep.coreset, 2, 7);
    std::vector<Vec> cs = {Vec(sol.centers.center(0).begin(), sol.centers.center(0).end()),
                           Vec(sol.centers.center(1).begin(), sol.centers.center(1).end())};
    std::sort(cs.begin(), cs.end());
    const double e0 = std::hypot(cs[0][0] + 5.0, cs[0][1]);
    const double e1 = std::hypot(cs[1][0] - 5.0, cs[1][1]);
    o.check(std::max(e0, e1) <= 0.15, fmt("two disks, k=2: center errors %.4f %.4f <= 0.15 (lambda = %.0f)", e0, e1,
                                          rep.lambda));
  }
  {
    Rng rng(5005);
    std::string rates;
    bool all = true;
    for (std::size_t d = 2; d <= 10; ++d) {
      // Random orientation from Gram-Schmidt on Gaussian vectors.
      Vec axes(d * d);
      for (std::size_t i = 0; i < d; ++i) {
        Vec v(d);
        for (auto& x : v) x = rng.normal();
        for (std::size_t j = 0; j < i; ++j) {
          double proj = 0.0;
          for (std::size_t c = 0; c < d; ++c) proj += v[c] * axes[j * d + c];
          for (std::size_t c = 0; c < d; ++c) v[c] -= proj * axes[j * d + c];
        }
        const double len = norm(v);
        for (std::size_t c = 0; c < d; ++c) axes[i * d + c] = v[c] / len;
      }
      Vec semi(d);
      for (auto& s : semi) s = rng.uniform(0.5, 3.0);
      const ConvexBody e = ConvexBody::ellipsoid(Vec(d, 0.0), axes, semi);
      const auto sample = sample_body(e, 20000, d);
      const double rate = 20000.0 / static_cast<double>(sample.trials);
      const bool ok = rate >= 1.0 / static_cast<double>(d * d);
      all = all && ok;
      rates += fmt(" d=%zu:%.4f%s", d, rate, ok ? "" : "<1/d^2");
    }
    o.check(all, "ellipsoid acceptance >= 1/d^2," + rates);
  }
  const double secs = since(t0);
  o.check(secs < 300.0, fmt("runtime %.1f s < 300 s", secs));
  return o;
}

// 6. End-to-end solve quality ---------------------------------------------

Outcome criterion6() {
  Outcome o;
  Rng rng(6006);
  const double eps = 0.1;
  const double bound = (1 + 2 * eps) / (1 - 2 * eps);
  int bad = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 2 + rng.index(49), k = 1 + rng.index(4), d = 1 + rng.index(10);
    std::vector<Segment> L;
    for (std::size_t i = 0; i < n; ++i) L.push_back(random_segment(rng, d));
    CoresetParams p = params(k, eps, 0.1);
    const std::uint64_t seed = 600 + inst;
    const SolveResult core = solve_segments(L, k, p, seed);
    const GridUnion dense_grid(L, 9999, 1.0 / 9999.0);
    const SolveResult dense = solve_grid(dense_grid, k, seed, repetitions_for(n));
    const double lc = dense_loss(L, core.centers, LipSpec::squared(), 10000);
    const double ld = dense_loss(L, dense.centers, LipSpec::squared(), 10000);
    const double ratio = lc / ld;
    worst = std::max(worst, ratio);
    bad += ratio > bound;
  }
  o.check(bad == 0, fmt("20 instances: worst loss ratio %.4f <= %.4f, %d violations", worst, bound, bad));
  return o;
}

// 7. Runtime linearity ----------------------------------------------------

Outcome criterion7() {
  Outcome o;
  struct Run {
    std::size_t n, d;
    double secs;
  };
  std::vector<Run> runs;
  double sink = 0.0;
  for (std::size_t d : {2u, 10u})
    for (std::size_t n : {1000u, 2000u, 5000u, 10000u}) {
      Rng rng(7000 + n + d);
      std::vector<Segment> L;
      for (std::size_t i = 0; i < n; ++i) L.push_back(random_segment(rng, d));
      double best = INFINITY;
      for (int rep = 0; rep < 5; ++rep) {
        const auto t0 = Clock::now();
        for (const auto& s : L) {
          const SegCoresetOutput c = seg_coreset(s, 1, 0.1, LipSpec::identity());
          sink += c.points.coords().back();
        }
        best = std::min(best, since(t0));
      }
      runs.push_back({n, d, best});
    }
  // For each d the time must scale linearly in n: the least-squares slope of
  // log t against log n lies in [0.85, 1.15]. Across d the cost per segment
  // may grow at most linearly in d.
  std::string pts;
  bool linear = true;
  std::string exps;
  double per_n[2] = {0.0, 0.0};
  for (int di = 0; di < 2; ++di) {
    double mx = 0.0, my = 0.0;
    for (int j = 0; j < 4; ++j) {
      const auto& r = runs[di * 4 + j];
      mx += std::log(static_cast<double>(r.n)) / 4.0;
      my += std::log(r.secs) / 4.0;
    }
    double sxy = 0.0, sxx = 0.0, tn = 0.0, tt = 0.0;
    for (int j = 0; j < 4; ++j) {
      const auto& r = runs[di * 4 + j];
      const double x = std::log(static_cast<double>(r.n)) - mx;
      sxy += x * (std::log(r.secs) - my);
      sxx += x * x;
      tn += static_cast<double>(r.n);
      tt += r.secs;
      pts += fmt(" (n=%zu,d=%zu):%.3fs", r.n, r.d, r.secs);
    }
    const double slope = sxy / sxx;
    per_n[di] = tt / tn;
    linear = linear && slope >= 0.85 && slope <= 1.15;
    exps += fmt(" d=%zu:%.3f", runs[di * 4].d, slope);
  }
  o.check(linear, "log-log exponent of t in n within [0.85, 1.15]:" + exps + ";" + pts);
  const double growth = per_n[1] / per_n[0];
  o.check(growth <= 5.0 * 1.15 && sink != 0.5,
          fmt("cost per segment d=10 vs d=2: x%.2f <= x5 (linear in d, 15%% slack)", growth));
  return o;
}

// 8. Tracking -------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  MotionStreamConfig cfg;
  cfg.frames = 400;
  cfg.coherent_fraction = 0.7;
  int good = 0;
  double worst = 0.0, vectors = 0.0, seconds = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto recs = gen_motion_stream(cfg, 8000 + seed);
    const TrackState st = run_tracker(recs, 2, {cfg.width, cfg.height}, 10, seed);
    Vec mean(2, 0.0);
    double used = 0.0;
    for (const auto& e : st.track) {
      if (e.held) continue;
      const auto dsp = e.displacement();
      mean[0] += dsp[0];
      mean[1] += dsp[1];
      used += 1.0;
    }
    const double err = std::hypot(mean[0] / used - cfg.motion_x, mean[1] / used - cfg.motion_y);
    worst = std::max(worst, err);
    good += err <= 0.5;
    vectors += static_cast<double>(st.stats.vectors);
    seconds += st.stats.seconds;
  }
  o.check(good >= 95, fmt("400-frame streams, 70%% coherent: %d/100 seeds within 0.5 px (worst %.3f px)", good, worst));
  const double rate = vectors / seconds;
  o.check(rate >= 1e5, fmt("throughput %.3g vectors/s >= 1e5 (%.0f frames/s)", rate, 400.0 * 100.0 / seconds));
  return o;
}

// 9. Size scaling ---------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  const std::vector<Segment> L = gen_synthetic(1000, 2, 9009);
  const CoresetParams p = params(2, 0.2, 0.1);
  const LipSpec lip = LipSpec::power(2);
  const auto t0 = Clock::now();
  const PipelineReport rep = coreset_of_segments(L, p, lip, 9);
  const double secs = since(t0);
  CoresetParams quarter = p;
  quarter.epsilon = p.epsilon / 4.0;
  const std::uint64_t m = sample_size(rep.intermediate_size, 2, quarter);
  o.check(rep.final_size == m, fmt("final size %llu == m-formula %llu", static_cast<unsigned long long>(rep.final_size),
                                   static_cast<unsigned long long>(m)));
  const double frac = static_cast<double>(rep.final_size) / static_cast<double>(rep.intermediate_size);
  o.check(frac <= 0.05, fmt("final/intermediate = %llu/%llu = %.4f%% <= 5%% (%.1f s, %zu distinct points)",
                            static_cast<unsigned long long>(rep.final_size),
                            static_cast<unsigned long long>(rep.intermediate_size), 100 * frac, secs,
                            rep.coreset.size()));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Entry entries[] = {
      {1, "per-segment coreset guarantee", criterion1}, {2, "pipeline guarantee", criterion2},
      {3, "sensitivity and grid bounds", criterion3},                  {4, "exact-loss oracle", criterion4},
      {5, "convex coresets", criterion5},               {6, "end-to-end solve quality", criterion6},
      {7, "runtime linearity", criterion7},             {8, "tracking", criterion8},
      {9, "size scaling", criterion9},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& e : entries) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out.check(false, std::string("exception: ") + ex.what());
    }
    std::printf("[%s] criterion %d: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", e.id, e.name, since(t0));
    for (const auto& n : out.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
