// segcoreset command-line driver: coreset, solve, bench, track, gen.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "segcoreset/segcoreset.hpp"

using namespace segcoreset;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitIo = 3;
constexpr int kExitOverflow = 4;

// Errors raised while reading data files are reported as I/O failures.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto load_data(F&& f) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw DataError(e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

LipSpec make_lip(const std::string& name, double threshold) {
  if (name == "l1") return LipSpec::identity();
  if (name == "l2") return LipSpec::squared();
  return LipSpec::huber(threshold);
}

struct CommonOpts {
  std::size_t k = 2;
  double eps = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  bool unsafe_eps = false;
  double sample_constant = 1.0;
  double k_exponent = 1.0;
  std::uint64_t vc_dim = 0;
  unsigned threads = 1;

  CoresetParams params() const {
    CoresetParams p;
    p.k = k;
    p.epsilon = eps;
    p.delta = delta;
    p.allow_unsafe_eps = unsafe_eps;
    p.sample_constant = sample_constant;
    p.k_exponent = k_exponent;
    p.vc_dim_dstar = vc_dim;
    return p;
  }

  json echo() const {
    return {{"k", k},
            {"eps", eps},
            {"delta", delta},
            {"unsafe_eps", unsafe_eps},
            {"sample_constant", sample_constant},
            {"k_exponent", k_exponent},
            {"vc_dim", vc_dim},
            {"threads", threads}};
  }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_delta) {
  cmd->add_option("--k", o.k, "number of centers")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", o.eps, "approximation error, in (0, 1/10] unless --unsafe-eps");
  if (with_delta) cmd->add_option("--delta", o.delta, "failure probability, in (0, 1/10] unless --unsafe-eps");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_flag("--unsafe-eps", o.unsafe_eps, "accept eps and delta in (0, 1)");
  cmd->add_option("--sample-constant", o.sample_constant, "constant c of the sample size")->check(CLI::PositiveNumber);
  cmd->add_option("--k-exponent", o.k_exponent, "exponent of (k+1) in the sample size")->check(CLI::NonNegativeNumber);
  cmd->add_option("--vc-dim", o.vc_dim, "VC dimension d* (0 derives 10k(d+1))");
  cmd->add_option("--threads", o.threads, "worker cap")->check(CLI::PositiveNumber);
}

// Raises InvalidInput before any file is touched so flag errors exit with 2.
void check_params(const CommonOpts& o, bool check_delta) {
  CoresetParams p = o.params();
  if (!check_delta) p.delta = std::min(p.delta, 0.1);
  p.validate();
  if (o.unsafe_eps) std::cerr << "warning: --unsafe-eps given; approximation guarantees assume eps, delta <= 1/10\n";
}

json timings_json(const std::vector<StageTiming>& t) {
  json j = json::object();
  for (const auto& s : t) j[s.stage] = s.seconds;
  return j;
}

// coreset ---------------------------------------------------------------

struct CoresetCmd {
  CommonOpts o;
  std::string input, out, report, lip = "l2";
  double huber_threshold = 1.0;
};

int run_coreset(const CoresetCmd& c) {
  const LipSpec lip = make_lip(c.lip, c.huber_threshold);
  check_params(c.o, true);
  const auto segments = load_data([&] { return load_segments_csv(c.input); });
  const auto t0 = std::chrono::steady_clock::now();
  const PipelineReport rep = coreset_of_segments(segments, c.o.params(), lip, c.o.seed);
  const double total = seconds_since(t0);
  save_points_csv(c.out, rep.coreset);
  if (!c.report.empty()) {
    json j = {{"version", kVersion},
              {"command", "coreset"},
              {"seed", c.o.seed},
              {"params", c.o.echo()},
              {"lip", lip.name()},
              {"input", c.input},
              {"n_segments", segments.size()},
              {"dim", segments.front().dim()},
              {"intermediate_size", rep.intermediate_size},
              {"per_segment_size", rep.seg_eps_prime + 1},
              {"final_size", rep.final_size},
              {"distinct_points", rep.coreset.size()},
              {"identity_branch", rep.identity},
              {"eps_prime", rep.eps_prime},
              {"seg_eps_prime", rep.seg_eps_prime},
              {"total_weight", rep.coreset.total_weight()},
              {"timings", timings_json(rep.timings)},
              {"seconds", total}};
    write_json(c.report, j);
  }
  return 0;
}

// solve -----------------------------------------------------------------

struct SolveCmd {
  CommonOpts o;
  std::string input, out, loss_report;
  std::size_t dense_points = 10000;
};

int run_solve(const SolveCmd& c) {
  check_params(c.o, false);
  if (c.dense_points < 2) throw InvalidInput("--dense-points must be at least 2");
  const auto segments = load_data([&] { return load_segments_csv(c.input); });
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = solve_segments(segments, c.o.k, c.o.params(), c.o.seed);
  const double solve_s = seconds_since(t0);
  const DenseLoss loss = dense_loss_report(segments, r.centers, LipSpec::squared(), c.dense_points);
  save_centers_csv(c.out, r.centers);
  if (!c.loss_report.empty()) {
    json j = {{"version", kVersion},
              {"command", "solve"},
              {"seed", c.o.seed},
              {"params", c.o.echo()},
              {"input", c.input},
              {"n_segments", segments.size()},
              {"coreset_cost", r.cost},
              {"dense_loss", loss.total},
              {"dense_mse", loss.mse},
              {"dense_points_per_segment", c.dense_points},
              {"lloyd_iterations", r.iterations},
              {"seconds", solve_s}};
    write_json(c.loss_report, j);
  }
  return 0;
}

// bench -----------------------------------------------------------------

struct BenchCmd {
  CommonOpts o;
  std::string dataset = "synthetic", sizes = "200:1000:100", out, runs_out, input;
  std::size_t reps = 40, dim = 2, dense_points = 1000;
};

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find(':', pos), text.size());
    const std::string tok = text.substr(pos, next - pos);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw InvalidInput("--sizes must look like start:stop:step");
    }
    if (used != tok.size() || v <= 0) throw InvalidInput("--sizes must look like start:stop:step");
    parts.push_back(static_cast<std::size_t>(v));
    pos = next + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[0] > parts[1]) throw InvalidInput("--sizes must look like start:stop:step");
  std::vector<std::size_t> out;
  for (std::size_t s = parts[0]; s <= parts[1]; s += parts[2]) out.push_back(s);
  return out;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct BenchRun {
  std::size_t size = 0, rep = 0;
  double coreset_loss = 0, midpoint_loss = 0, uniform_loss = 0;
  double coreset_s = 0, midpoint_s = 0, uniform_s = 0;
};

std::vector<Segment> bench_instance(const BenchCmd& c, const std::vector<Segment>& pool, std::size_t size,
                                    std::uint64_t seed) {
  if (c.dataset == "synthetic") return gen_synthetic(size, c.dim, seed);
  if (c.dataset == "roads" && c.input.empty()) return gen_road_network(size, seed);
  // Fixed pool (file or motion vectors): draw `size` segments without replacement.
  if (pool.size() < size) throw InvalidInput("dataset has fewer segments than the requested size");
  Rng rng(seed);
  std::vector<Segment> out;
  for (std::size_t i : subsample_indices(pool.size(), size, rng)) out.push_back(pool[i]);
  return out;
}

BenchRun bench_one(const BenchCmd& c, const std::vector<Segment>& segs, std::uint64_t seed) {
  const LipSpec l2 = LipSpec::squared();
  BenchRun r;
  auto t0 = std::chrono::steady_clock::now();
  const SolveResult core = solve_segments(segs, c.o.k, c.o.params(), derive_seed(seed, 1));
  r.coreset_s = seconds_since(t0);
  r.coreset_loss = dense_loss(segs, core.centers, l2, c.dense_points);

  t0 = std::chrono::steady_clock::now();
  WeightedPointSet mids(segs.front().dim());
  for (const auto& s : segs) mids.push_back(s.point_at(0.5), 1.0);
  const SolveResult mid = solve_points(mids, c.o.k, derive_seed(seed, 2));
  r.midpoint_s = seconds_since(t0);
  r.midpoint_loss = dense_loss(segs, mid.centers, l2, c.dense_points);

  t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(seed, 3));
  WeightedPointSet uni(segs.front().dim());
  for (const auto& s : segs)
    for (int i = 0; i < 10; ++i) uni.push_back(s.point_at(rng.uniform()), 1.0);
  const SolveResult u = solve_points(uni, c.o.k, derive_seed(seed, 4));
  r.uniform_s = seconds_since(t0);
  r.uniform_loss = dense_loss(segs, u.centers, l2, c.dense_points);
  return r;
}

int run_bench(const BenchCmd& c) {
  check_params(c.o, false);
  const auto sizes = parse_sizes(c.sizes);
  if (c.reps < 1) throw InvalidInput("--reps must be positive");
  if (c.dense_points < 2) throw InvalidInput("--dense-points must be at least 2");
  std::vector<Segment> pool;
  if (!c.input.empty()) pool = load_data([&] { return load_segments_csv(c.input); });
  if (c.dataset == "mv" && pool.empty()) {
    MotionStreamConfig cfg;
    cfg.vectors_per_frame = 20;
    const auto recs = gen_motion_stream(cfg, derive_seed(c.o.seed, 99));
    pool = motion_segments(recs);
  }

  std::vector<BenchRun> runs;
  for (std::size_t si = 0; si < sizes.size(); ++si)
    for (std::size_t rep = 0; rep < c.reps; ++rep) {
      const std::uint64_t seed = derive_seed(c.o.seed, si * 100003 + rep);
      const auto segs = bench_instance(c, pool, sizes[si], seed);
      BenchRun r = bench_one(c, segs, seed);
      r.size = sizes[si];
      r.rep = rep;
      runs.push_back(r);
    }

  std::ofstream out(c.out);
  if (!out) throw IoError("cannot open " + c.out + " for writing");
  const char* metrics[] = {"coreset_loss", "midpoint_loss", "uniform_loss", "coreset_seconds", "midpoint_seconds",
                           "uniform_seconds"};
  out << "size,reps";
  for (const char* m : metrics) out << ',' << m << "_median," << m << "_p25," << m << "_p75";
  out << ",coreset_beats_midpoint\n";
  json agg = json::array();
  for (std::size_t s : sizes) {
    std::vector<std::vector<double>> cols(6);
    std::size_t wins = 0;
    for (const auto& r : runs) {
      if (r.size != s) continue;
      const double vals[] = {r.coreset_loss, r.midpoint_loss, r.uniform_loss, r.coreset_s, r.midpoint_s, r.uniform_s};
      for (int m = 0; m < 6; ++m) cols[m].push_back(vals[m]);
      wins += r.coreset_loss <= r.midpoint_loss;
    }
    out << s << ',' << cols[0].size();
    for (const auto& col : cols)
      for (double q : {0.5, 0.25, 0.75}) out << ',' << io_detail::format_double(percentile(col, q));
    const double frac = static_cast<double>(wins) / static_cast<double>(cols[0].size());
    out << ',' << io_detail::format_double(frac) << '\n';
    agg.push_back({{"size", s}, {"coreset_loss_median", percentile(cols[0], 0.5)}, {"coreset_beats_midpoint", frac}});
  }
  io_detail::finish(out, c.out);

  if (!c.runs_out.empty()) {
    std::ofstream ro(c.runs_out);
    if (!ro) throw IoError("cannot open " + c.runs_out + " for writing");
    ro << "size,rep,coreset_loss,midpoint_loss,uniform_loss,coreset_seconds,midpoint_seconds,uniform_seconds\n";
    for (const auto& r : runs) {
      ro << r.size << ',' << r.rep;
      for (double v : {r.coreset_loss, r.midpoint_loss, r.uniform_loss, r.coreset_s, r.midpoint_s, r.uniform_s})
        ro << ',' << io_detail::format_double(v);
      ro << '\n';
    }
    io_detail::finish(ro, c.runs_out);
  }
  json summary = {{"version", kVersion}, {"command", "bench"}, {"seed", c.o.seed},   {"params", c.o.echo()},
                  {"dataset", c.dataset}, {"reps", c.reps},     {"sizes", sizes},     {"aggregate", agg}};
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// track -----------------------------------------------------------------

struct TrackCmd {
  std::string mv, dims = "1280x720", out, stats;
  std::size_t k = 2;
  std::int64_t window = 10;
  std::uint64_t seed = 0;
};

FrameDims parse_dims(const std::string& s) {
  const auto x = s.find_first_of("xX");
  try {
    if (x == std::string::npos) throw InvalidInput("");
    std::size_t u1 = 0, u2 = 0;
    const double w = std::stod(s.substr(0, x), &u1);
    const double h = std::stod(s.substr(x + 1), &u2);
    if (u1 != x || u2 != s.size() - x - 1 || !(w > 0) || !(h > 0)) throw InvalidInput("");
    return {w, h};
  } catch (const std::exception&) {
    throw InvalidInput("--dims must look like WIDTHxHEIGHT");
  }
}

int run_track(const TrackCmd& c) {
  const FrameDims dims = parse_dims(c.dims);
  if (c.k < 2) throw InvalidInput("--k must be at least 2 for tracking");
  if (c.window < 1) throw InvalidInput("--window must be positive");
  const auto recs = load_data([&] { return load_motion_vectors(c.mv); });
  const TrackState st = run_tracker(recs, c.k, dims, c.window, c.seed);
  save_track_csv(c.out, st.track);
  if (!c.stats.empty()) {
    std::size_t held = 0;
    for (const auto& e : st.track) held += e.held;
    json j = {{"version", kVersion},
              {"command", "track"},
              {"seed", c.seed},
              {"params", {{"k", c.k}, {"dims", c.dims}, {"window", c.window}}},
              {"input", c.mv},
              {"vectors", st.stats.vectors},
              {"frames", st.stats.frames},
              {"windows", st.stats.windows},
              {"held_windows", held},
              {"seconds", st.stats.seconds},
              {"vectors_per_second", st.stats.vectors_per_second()},
              {"frames_per_second", st.stats.frames_per_second()}};
    write_json(c.stats, j);
  }
  return 0;
}

// gen -------------------------------------------------------------------

struct GenCmd {
  std::string dataset = "synthetic", out;
  std::size_t n = 1000, dim = 2;
  std::uint64_t seed = 0;
  MotionStreamConfig mv;
};

int run_gen(const GenCmd& c) {
  if (c.dataset == "mv") {
    save_motion_vectors_csv(c.out, gen_motion_stream(c.mv, c.seed));
    return 0;
  }
  if (c.n < 1) throw InvalidInput("--n must be positive");
  const auto segs = c.dataset == "roads" ? gen_road_network(c.n, c.seed) : gen_synthetic(c.n, c.dim, c.seed);
  save_segments_csv(c.out, segs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segment coresets for weighted k-center clustering"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CoresetCmd cc;
  auto* coreset = app.add_subcommand("coreset", "compress segments into a weighted point coreset");
  add_common(coreset, cc.o, true);
  coreset->add_option("--input", cc.input, "segments CSV")->required();
  coreset->add_option("--out", cc.out, "coreset CSV")->required();
  coreset->add_option("--report", cc.report, "JSON report");
  coreset->add_option("--lip", cc.lip, "distance transform")->check(CLI::IsMember({"l1", "l2", "huber"}));
  coreset->add_option("--huber-threshold", cc.huber_threshold, "Huber threshold")->check(CLI::PositiveNumber);

  SolveCmd sc;
  auto* solve = app.add_subcommand("solve", "k-means of segments via their grid coreset");
  add_common(solve, sc.o, false);
  solve->add_option("--input", sc.input, "segments CSV")->required();
  solve->add_option("--out", sc.out, "centers CSV")->required();
  solve->add_option("--loss-report", sc.loss_report, "JSON loss report");
  solve->add_option("--dense-points", sc.dense_points, "oracle points per segment");

  BenchCmd bc;
  auto* bench = app.add_subcommand("bench", "coreset-solve against midpoint and uniform baselines");
  add_common(bench, bc.o, false);
  bench->add_option("--dataset", bc.dataset)->check(CLI::IsMember({"synthetic", "roads", "mv"}));
  bench->add_option("--input", bc.input, "segments CSV used as the pool for roads or mv");
  bench->add_option("--reps", bc.reps, "repetitions per size");
  bench->add_option("--sizes", bc.sizes, "start:stop:step");
  bench->add_option("--dim", bc.dim, "dimension of the synthetic family")->check(CLI::PositiveNumber);
  bench->add_option("--dense-points", bc.dense_points, "oracle points per segment");
  bench->add_option("--out", bc.out, "aggregate CSV")->required();
  bench->add_option("--runs-out", bc.runs_out, "per-run CSV");

  TrackCmd tc;
  auto* track = app.add_subcommand("track", "track the dominant motion in a vector stream");
  track->add_option("--mv", tc.mv, "motion vectors CSV")->required();
  track->add_option("--k", tc.k, "clusters per window");
  track->add_option("--dims", tc.dims, "frame size WxH");
  track->add_option("--window", tc.window, "frames per window");
  track->add_option("--seed", tc.seed);
  track->add_option("--out", tc.out, "track CSV")->required();
  track->add_option("--stats", tc.stats, "JSON throughput stats");

  GenCmd gc;
  auto* gen = app.add_subcommand("gen", "write a synthetic dataset");
  gen->add_option("--dataset", gc.dataset)->check(CLI::IsMember({"synthetic", "roads", "mv"}));
  gen->add_option("--n", gc.n, "number of segments");
  gen->add_option("--dim", gc.dim)->check(CLI::PositiveNumber);
  gen->add_option("--seed", gc.seed);
  gen->add_option("--frames", gc.mv.frames);
  gen->add_option("--vectors-per-frame", gc.mv.vectors_per_frame);
  gen->add_option("--coherent-fraction", gc.mv.coherent_fraction)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--motion-x", gc.mv.motion_x);
  gen->add_option("--motion-y", gc.mv.motion_y);
  gen->add_option("--out", gc.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitFlags;
  }

  try {
    if (coreset->parsed()) return run_coreset(cc);
    if (solve->parsed()) return run_solve(sc);
    if (bench->parsed()) return run_bench(bc);
    if (track->parsed()) return run_track(tc);
    if (gen->parsed()) return run_gen(gc);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOverflow;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
