#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "segcoreset/random.hpp"
#include "segcoreset/types.hpp"

namespace segcoreset {

struct MotionVectorRecord {
  std::int64_t frame = 0;
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;

  friend bool operator==(const MotionVectorRecord&, const MotionVectorRecord&) = default;
};

// ---- generators

// n segments whose endpoints are i.i.d. uniform on [-1, 1]^d.
inline std::vector<Segment> gen_synthetic(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("gen_synthetic needs n >= 1");
  if (d < 1) throw InvalidInput("gen_synthetic needs d >= 1");
  Rng rng(seed);
  std::vector<Segment> out;
  out.reserve(n);
  Vec a(d), b(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : a) x = rng.uniform(-1.0, 1.0);
    for (auto& x : b) x = rng.uniform(-1.0, 1.0);
    out.push_back(Segment::from_endpoints(a, b));
  }
  return out;
}

// m i.i.d. draws with probability proportional to segment length.
inline std::vector<Segment> sample_by_length(std::span<const Segment> segments, std::size_t m, std::uint64_t seed) {
  std::vector<double> prefix(segments.size());
  double total = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    total += segments[i].length();
    prefix[i] = total;
  }
  if (!(total > 0.0)) throw InvalidInput("sample_by_length needs a segment with positive length");
  Rng rng(seed);
  std::vector<Segment> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = rng.uniform() * total;
    auto idx = static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), t) - prefix.begin());
    idx = std::min(idx, segments.size() - 1);
    while (segments[idx].length() == 0.0 && idx > 0) --idx;
    out.push_back(segments[idx]);
  }
  return out;
}

struct MotionStreamConfig {
  std::size_t frames = 400;
  std::size_t vectors_per_frame = 200;
  double coherent_fraction = 0.7;
  double motion_x = 5.0;
  double motion_y = 0.0;
  double width = 1280.0;
  double height = 720.0;
  double object_size = 160.0;  // side of the square region holding the coherent vectors
  double noise_magnitude = 8.0;  // noise displacement length is uniform in [0, noise_magnitude]
};

// Synthetic block motion: a square object crossing the frame at a constant
// velocity, plus vectors with uniform positions and directions.
inline std::vector<MotionVectorRecord> gen_motion_stream(const MotionStreamConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MotionVectorRecord> out;
  out.reserve(cfg.frames * cfg.vectors_per_frame);
  const auto coherent = static_cast<std::size_t>(std::llround(cfg.coherent_fraction * cfg.vectors_per_frame));
  const double span_x = std::max(1.0, cfg.width - cfg.object_size);
  for (std::size_t f = 0; f < cfg.frames; ++f) {
    const double ox = std::fmod(20.0 + cfg.motion_x * static_cast<double>(f), span_x);
    const double oy = std::clamp(0.5 * (cfg.height - cfg.object_size) + cfg.motion_y * static_cast<double>(f), 0.0,
                                 std::max(0.0, cfg.height - cfg.object_size));
    for (std::size_t i = 0; i < cfg.vectors_per_frame; ++i) {
      MotionVectorRecord r;
      r.frame = static_cast<std::int64_t>(f);
      if (i < coherent) {
        r.x1 = ox + rng.uniform() * cfg.object_size;
        r.y1 = oy + rng.uniform() * cfg.object_size;
        r.x2 = r.x1 + cfg.motion_x;
        r.y2 = r.y1 + cfg.motion_y;
      } else {
        r.x1 = rng.uniform() * cfg.width;
        r.y1 = rng.uniform() * cfg.height;
        const double ang = rng.uniform() * 2.0 * std::numbers::pi;
        const double mag = rng.uniform() * cfg.noise_magnitude;
        r.x2 = r.x1 + mag * std::cos(ang);
        r.y2 = r.y1 + mag * std::sin(ang);
      }
      out.push_back(r);
    }
  }
  return out;
}

// Road-like polylines in lon/lat: random walks with slowly turning headings,
// cut into short segments.
inline std::vector<Segment> gen_road_network(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Segment> out;
  out.reserve(n);
  while (out.size() < n) {
    double lon = rng.uniform(100.0, 119.0);
    double lat = rng.uniform(1.0, 7.0);
    double heading = rng.uniform() * 2.0 * std::numbers::pi;
    const std::size_t pieces = 5 + rng.index(40);
    for (std::size_t i = 0; i < pieces && out.size() < n; ++i) {
      heading += 0.35 * rng.normal();
      const double len = 0.002 + 0.03 * std::pow(rng.uniform(), 3.0);
      const double nlon = lon + len * std::cos(heading);
      const double nlat = lat + len * std::sin(heading);
      const double a[] = {lon, lat};
      const double b[] = {nlon, nlat};
      out.push_back(Segment::from_endpoints(a, b));
      lon = nlon;
      lat = nlat;
    }
  }
  return out;
}

// ---- text formats

namespace io_detail {

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

inline double parse_double(std::string_view tok, std::size_t line) {
  while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\r')) tok.remove_suffix(1);
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw InvalidInput(at_line(line) + "cannot parse number '" + std::string(tok) + "'");
  if (!std::isfinite(v)) throw InvalidInput(at_line(line) + "non-finite value '" + std::string(tok) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view tok, std::size_t line) {
  while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\r')) tok.remove_suffix(1);
  std::int64_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw InvalidInput(at_line(line) + "cannot parse integer '" + std::string(tok) + "'");
  return v;
}

inline bool getline_lf(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

inline void finish(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace io_detail

// Header `d,a1..ad,b1..bd`, then one segment per line as d and both endpoints.
inline void write_segments_csv(std::ostream& out, std::span<const Segment> segments) {
  const std::size_t d = segments.empty() ? 1 : segments.front().dim();
  out << "d";
  for (std::size_t i = 1; i <= d; ++i) out << ",a" << i;
  for (std::size_t i = 1; i <= d; ++i) out << ",b" << i;
  out << '\n';
  for (const Segment& s : segments) {
    out << s.dim();
    for (double x : s.start()) out << ',' << io_detail::format_double(x);
    for (double x : s.end()) out << ',' << io_detail::format_double(x);
    out << '\n';
  }
}

inline std::vector<Segment> read_segments_csv(std::istream& in) {
  std::vector<Segment> out;
  std::string line;
  std::size_t lineno = 1;
  if (!io_detail::getline_lf(in, line)) return out;
  if (line.rfind("d,", 0) != 0 && line != "d") throw InvalidInput(io_detail::at_line(1) + "expected header starting with 'd,'");
  Vec a, b;
  while (io_detail::getline_lf(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tok = io_detail::split(line);
    const std::int64_t d = io_detail::parse_int(tok[0], lineno);
    if (d < 1) throw InvalidInput(io_detail::at_line(lineno) + "dimension must be >= 1");
    if (tok.size() != 1 + 2 * static_cast<std::size_t>(d))
      throw InvalidInput(io_detail::at_line(lineno) + "expected " + std::to_string(1 + 2 * d) + " columns, got " +
                         std::to_string(tok.size()));
    a.resize(static_cast<std::size_t>(d));
    b.resize(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = io_detail::parse_double(tok[1 + i], lineno);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = io_detail::parse_double(tok[1 + a.size() + i], lineno);
    out.push_back(Segment::from_endpoints(a, b));
  }
  return out;
}

inline void save_segments_csv(const std::string& path, std::span<const Segment> segments) {
  auto out = io_detail::open_out(path);
  write_segments_csv(out, segments);
  io_detail::finish(out, path);
}

inline std::vector<Segment> load_segments_csv(const std::string& path) {
  auto in = io_detail::open_in(path);
  return read_segments_csv(in);
}

// Header `frame,x1,y1,x2,y2`; frames must not decrease.
inline void write_motion_vectors_csv(std::ostream& out, std::span<const MotionVectorRecord> records) {
  out << "frame,x1,y1,x2,y2\n";
  for (const auto& r : records)
    out << r.frame << ',' << io_detail::format_double(r.x1) << ',' << io_detail::format_double(r.y1) << ','
        << io_detail::format_double(r.x2) << ',' << io_detail::format_double(r.y2) << '\n';
}

inline std::vector<MotionVectorRecord> read_motion_vectors_csv(std::istream& in) {
  std::vector<MotionVectorRecord> out;
  std::string line;
  std::size_t lineno = 1;
  if (!io_detail::getline_lf(in, line)) return out;
  if (line != "frame,x1,y1,x2,y2") throw InvalidInput(io_detail::at_line(1) + "expected header 'frame,x1,y1,x2,y2'");
  while (io_detail::getline_lf(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tok = io_detail::split(line);
    if (tok.size() != 5)
      throw InvalidInput(io_detail::at_line(lineno) + "expected 5 columns, got " + std::to_string(tok.size()));
    MotionVectorRecord r;
    r.frame = io_detail::parse_int(tok[0], lineno);
    if (r.frame < 0) throw InvalidInput(io_detail::at_line(lineno) + "frame must be >= 0");
    if (!out.empty() && r.frame < out.back().frame)
      throw InvalidInput(io_detail::at_line(lineno) + "frames must be non-decreasing");
    r.x1 = io_detail::parse_double(tok[1], lineno);
    r.y1 = io_detail::parse_double(tok[2], lineno);
    r.x2 = io_detail::parse_double(tok[3], lineno);
    r.y2 = io_detail::parse_double(tok[4], lineno);
    out.push_back(r);
  }
  return out;
}

inline void save_motion_vectors_csv(const std::string& path, std::span<const MotionVectorRecord> records) {
  auto out = io_detail::open_out(path);
  write_motion_vectors_csv(out, records);
  io_detail::finish(out, path);
}

inline std::vector<MotionVectorRecord> load_motion_vectors(const std::string& path) {
  auto in = io_detail::open_in(path);
  return read_motion_vectors_csv(in);
}

struct FrameRange {
  std::int64_t frame = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Contiguous [begin, end) record ranges per frame of a frame-sorted stream.
inline std::vector<FrameRange> frame_ranges(std::span<const MotionVectorRecord> records) {
  std::vector<FrameRange> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (out.empty() || out.back().frame != records[i].frame) out.push_back({records[i].frame, i, i});
    out.back().end = i + 1;
  }
  return out;
}

// Motion vectors as 2-D segments from block source to destination.
inline std::vector<Segment> motion_segments(std::span<const MotionVectorRecord> records) {
  std::vector<Segment> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const double a[] = {r.x1, r.y1};
    const double b[] = {r.x2, r.y2};
    out.push_back(Segment::from_endpoints(a, b));
  }
  return out;
}

// Header `d,x1..xd,weight`.
inline void write_points_csv(std::ostream& out, const WeightedPointSet& points) {
  const std::size_t d = std::max<std::size_t>(points.dim(), 1);
  out << "d";
  for (std::size_t i = 1; i <= d; ++i) out << ",x" << i;
  out << ",weight\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << points.dim();
    for (double x : points.point(i)) out << ',' << io_detail::format_double(x);
    out << ',' << io_detail::format_double(points.weight(i)) << '\n';
  }
}

inline WeightedPointSet read_points_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  WeightedPointSet out;
  if (!io_detail::getline_lf(in, line)) return out;
  if (line.rfind("d,", 0) != 0) throw InvalidInput(io_detail::at_line(1) + "expected header starting with 'd,'");
  Vec p;
  while (io_detail::getline_lf(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tok = io_detail::split(line);
    const std::int64_t d = io_detail::parse_int(tok[0], lineno);
    if (d < 1 || tok.size() != static_cast<std::size_t>(d) + 2)
      throw InvalidInput(io_detail::at_line(lineno) + "column count does not match dimension");
    p.resize(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = io_detail::parse_double(tok[1 + i], lineno);
    const double w = io_detail::parse_double(tok.back(), lineno);
    if (w < 0.0) throw InvalidInput(io_detail::at_line(lineno) + "weight must be >= 0");
    out.push_back(p, w);
  }
  return out;
}

inline void save_points_csv(const std::string& path, const WeightedPointSet& points) {
  auto out = io_detail::open_out(path);
  write_points_csv(out, points);
  io_detail::finish(out, path);
}

inline WeightedPointSet load_points_csv(const std::string& path) {
  auto in = io_detail::open_in(path);
  return read_points_csv(in);
}

// Centers as `d,x1..xd,weight` rows.
inline void save_centers_csv(const std::string& path, const CenterSet& centers) {
  save_points_csv(path, WeightedPointSet(centers.dim(), centers.coords(), centers.weights()));
}

}  // namespace segcoreset
