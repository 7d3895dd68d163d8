#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "emap/association.hpp"
#include "emap/predictor.hpp"
#include "emap/scenario.hpp"
#include "emap/tracker.hpp"

namespace emap {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (std::string& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

inline double parse_number(const std::string& s, const std::string& path,
                           int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" +
                     s + "'");
  }
}

inline int parse_int(const std::string& s, const std::string& path,
                     int line_no) {
  const double v = parse_number(s, path, line_no);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": expected integer, got '" + s + "'");
  return i;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Per-frame detection lists; index = frame number.
struct DetectionFile {
  std::vector<std::vector<Detection>> frames;
};

/// Reads detector output. Two formats are auto-detected per file: the
/// comma-separated form `frame,class,left,top,right,bottom,score[,depth]`
/// with a header, and space-delimited KITTI tracking label lines
/// `frame id type truncated occluded alpha left top right bottom ...`
/// (track id and 3-D fields ignored; a trailing 18th field is the score).
inline DetectionFile parse_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open detections file: " + path);
  DetectionFile out;
  std::string line;
  int line_no = 0;
  bool format_known = false, csv = false, has_depth = false;

  const auto add = [&](Detection det) {
    if (det.frame < 0)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": negative frame index");
    if (!det.box.valid())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": negative-size box");
    if (out.frames.size() <= static_cast<std::size_t>(det.frame))
      out.frames.resize(det.frame + 1);
    out.frames[det.frame].push_back(std::move(det));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!format_known) {
      csv = line.find(',') != std::string::npos;
      format_known = true;
      if (csv) {
        const auto header = detail::split_csv(line);
        const std::vector<std::string> want{"frame", "class",  "left", "top",
                                            "right", "bottom", "score"};
        const bool base_ok =
            header.size() >= want.size() &&
            std::equal(want.begin(), want.end(), header.begin());
        has_depth = header.size() == 8 && header[7] == "depth";
        if (!base_ok || (header.size() != 7 && !has_depth))
          throw ParseError(path + ":1: unrecognized detections header");
        continue;  // header consumed
      }
    }
    if (csv) {
      const auto f = detail::split_csv(line);
      if (f.size() != (has_depth ? 8u : 7u))
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected " + std::to_string(has_depth ? 8 : 7) +
                         " fields");
      Detection det;
      det.frame = detail::parse_int(f[0], path, line_no);
      det.class_label = f[1];
      det.box = {detail::parse_number(f[2], path, line_no),
                 detail::parse_number(f[3], path, line_no),
                 detail::parse_number(f[4], path, line_no),
                 detail::parse_number(f[5], path, line_no)};
      det.confidence = detail::parse_number(f[6], path, line_no);
      if (has_depth) det.depth = detail::parse_number(f[7], path, line_no);
      add(std::move(det));
    } else {
      const auto f = detail::split_ws(line);
      if (f.size() < 10)
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected at least 10 fields");
      Detection det;
      det.frame = detail::parse_int(f[0], path, line_no);
      det.class_label = f[2];
      det.box = {detail::parse_number(f[6], path, line_no),
                 detail::parse_number(f[7], path, line_no),
                 detail::parse_number(f[8], path, line_no),
                 detail::parse_number(f[9], path, line_no)};
      det.confidence =
          f.size() >= 18 ? detail::parse_number(f[17], path, line_no) : 1.0;
      add(std::move(det));
    }
  }
  return out;
}

/// Reads odometry `frame,timestamp_s,forward_speed_mps,yaw_rate_radps` with a
/// header. Frames must be contiguous from 0 and timestamps strictly
/// increasing; each frame's interval comes from consecutive timestamps and
/// frame 0 falls back to dt_default. Positive yaw_rate shifts image content
/// toward +u (a left turn).
inline std::vector<EgoMotionSample> parse_odometry(const std::string& path,
                                                   double dt_default) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open odometry file: " + path);
  std::vector<EgoMotionSample> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  double prev_t = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = detail::split_csv(line);
    if (!header_seen) {
      const std::vector<std::string> want{"frame", "timestamp_s",
                                          "forward_speed_mps",
                                          "yaw_rate_radps"};
      if (f.size() != 4 || !std::equal(want.begin(), want.end(), f.begin()))
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": unrecognized odometry header");
      header_seen = true;
      continue;
    }
    if (f.size() != 4)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 4 fields");
    const int frame = detail::parse_int(f[0], path, line_no);
    if (frame != static_cast<int>(out.size()))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": odometry frames must be contiguous from 0");
    const double t = detail::parse_number(f[1], path, line_no);
    EgoMotionSample s;
    s.forward_speed = detail::parse_number(f[2], path, line_no);
    s.yaw_rate = detail::parse_number(f[3], path, line_no);
    if (out.empty()) {
      s.dt = dt_default;
    } else {
      if (!(t > prev_t))
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": non-monotone timestamps");
      s.dt = t - prev_t;
    }
    prev_t = t;
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Depth rasters: binary 16-bit portable graymaps (P5, maxval 65535), value =
// millimeters, 0 = invalid, most significant byte first.
// ---------------------------------------------------------------------------

inline void write_depth_pgm(const std::string& path, const DepthImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write depth image: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(img.width) * 2);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double mm = std::round(img.at(x, y) * 1000.0);
      const std::uint16_t v =
          mm <= 0.0 ? 0
                    : static_cast<std::uint16_t>(std::min(mm, 65535.0));
      row[2 * x] = static_cast<unsigned char>(v >> 8);
      row[2 * x + 1] = static_cast<unsigned char>(v & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) throw IoError("short write on depth image: " + path);
}

inline DepthImage read_depth_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open depth image: " + path);
  const auto next_token = [&]() -> std::string {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw IoError("truncated graymap header: " + path);
  };
  if (next_token() != "P5")
    throw IoError("not a binary graymap (expected P5): " + path);
  DepthImage img;
  img.width = std::stoi(next_token());
  img.height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (maxval != 65535)
    throw IoError("expected 16-bit graymap (maxval 65535): " + path);
  if (img.width <= 0 || img.height <= 0)
    throw IoError("bad graymap dimensions: " + path);
  in.get();  // single whitespace after maxval
  const std::size_t n =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  std::vector<unsigned char> raw(n * 2);
  in.read(reinterpret_cast<char*>(raw.data()), raw.size());
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw IoError("truncated graymap data: " + path);
  img.meters.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t v =
        static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    img.meters[i] = static_cast<float>(v) / 1000.0f;
  }
  return img;
}

inline std::string depth_frame_path(const std::string& dir, int frame) {
  char name[32];
  std::snprintf(name, sizeof(name), "%06d.pgm", frame);
  return (std::filesystem::path(dir) / name).string();
}

/// Loads the depth raster of one frame and checks it against the camera.
inline DepthImage parse_depth(const std::string& dir, int frame,
                              const CameraModel& cam) {
  DepthImage img = read_depth_pgm(depth_frame_path(dir, frame));
  if (img.width != cam.width || img.height != cam.height)
    throw IoError("depth image size mismatch with camera model: " +
                  depth_frame_path(dir, frame));
  return img;
}

// ---------------------------------------------------------------------------
// Track tables: `frame,id,class,left,top,right,bottom,score,extrapolated`
// with a header, rows sorted by (frame, id), corners with 2 decimals.
// ---------------------------------------------------------------------------

inline std::string format_tracks(const TrackTable& table) {
  TrackTable rows = table;
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TrackOutput& a, const TrackOutput& b) {
                     return std::pair(a.frame, a.id) < std::pair(b.frame, b.id);
                   });
  std::ostringstream os;
  os << "frame,id,class,left,top,right,bottom,score,extrapolated\n";
  for (const TrackOutput& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%.2f,%.2f,%.2f,%.2f,%.2f,%d\n",
                  r.frame, r.id, r.class_label.c_str(), r.box.left, r.box.top,
                  r.box.right, r.box.bottom, r.score, r.extrapolated ? 1 : 0);
    os << buf;
  }
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
  if (!out) throw IoError("short write: " + path);
}

inline void write_tracks(const std::string& path, const TrackTable& table) {
  write_text_file(path, format_tracks(table));
}

inline TrackTable read_tracks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open track file: " + path);
  TrackTable out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = detail::split_csv(line);
    if (!header_seen) {
      if (f.size() != 9 || f[0] != "frame" || f[1] != "id")
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": unrecognized track header");
      header_seen = true;
      continue;
    }
    if (f.size() != 9)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 9 fields");
    TrackOutput r;
    r.frame = detail::parse_int(f[0], path, line_no);
    r.id = detail::parse_int(f[1], path, line_no);
    r.class_label = f[2];
    r.box = {detail::parse_number(f[3], path, line_no),
             detail::parse_number(f[4], path, line_no),
             detail::parse_number(f[5], path, line_no),
             detail::parse_number(f[6], path, line_no)};
    r.score = detail::parse_number(f[7], path, line_no);
    r.extrapolated = detail::parse_int(f[8], path, line_no) != 0;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sequence manifests (JSON) and sequence assembly
// ---------------------------------------------------------------------------

/// Everything needed to run one sequence: input paths, camera intrinsics, an
/// optional class filter, and tracker overrides.
struct SequenceManifest {
  std::string base_dir;
  std::string detections_path;
  std::string odometry_path;    // may be empty (baseline-only sequences)
  std::string depth_dir;        // may be empty
  std::string ground_truth_path;  // may be empty
  CameraModel camera;
  std::vector<std::string> class_filter;  // empty = keep everything
  double max_range = 100.0;
  TrackerConfig tracker;
  std::string name = "sequence";
};

inline SequenceManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path + ": " + e.what());
  }
  SequenceManifest m;
  m.base_dir = std::filesystem::path(path).parent_path().string();
  const auto resolve = [&](const std::string& p) -> std::string {
    if (p.empty()) return p;
    const std::filesystem::path fp(p);
    if (fp.is_absolute()) return p;
    return (std::filesystem::path(m.base_dir) / fp).string();
  };
  try {
    m.detections_path = resolve(j.at("detections").get<std::string>());
    if (j.contains("odometry"))
      m.odometry_path = resolve(j["odometry"].get<std::string>());
    if (j.contains("depth_dir"))
      m.depth_dir = resolve(j["depth_dir"].get<std::string>());
    if (j.contains("ground_truth"))
      m.ground_truth_path = resolve(j["ground_truth"].get<std::string>());
    const auto& cam = j.at("camera");
    m.camera.f = cam.at("f").get<double>();
    m.camera.cx = cam.at("cx").get<double>();
    m.camera.cy = cam.at("cy").get<double>();
    m.camera.width = cam.at("width").get<int>();
    m.camera.height = cam.at("height").get<int>();
    if (j.contains("class_filter"))
      m.class_filter = j["class_filter"].get<std::vector<std::string>>();
    if (j.contains("max_range")) m.max_range = j["max_range"].get<double>();
    if (j.contains("name")) m.name = j["name"].get<std::string>();
    if (j.contains("tracker")) {
      const auto& t = j["tracker"];
      if (t.contains("iou_min")) m.tracker.iou_min = t["iou_min"].get<double>();
      if (t.contains("max_age")) m.tracker.max_age = t["max_age"].get<int>();
      if (t.contains("min_hits")) m.tracker.min_hits = t["min_hits"].get<int>();
      if (t.contains("dt_default"))
        m.tracker.dt_default = t["dt_default"].get<double>();
      if (t.contains("pos_noise_frac"))
        m.tracker.pos_noise_frac = t["pos_noise_frac"].get<double>();
      if (t.contains("vel_noise_frac"))
        m.tracker.vel_noise_frac = t["vel_noise_frac"].get<double>();
      if (t.contains("obs_noise_frac"))
        m.tracker.obs_noise_frac = t["obs_noise_frac"].get<double>();
      if (t.contains("init_velocity_var"))
        m.tracker.init_velocity_var = t["init_velocity_var"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path + ": " + e.what());
  }
  m.camera.validate();
  m.tracker.depth_max_range = m.max_range;
  if (!std::filesystem::exists(m.detections_path))
    throw IoError("manifest " + path +
                  ": detections file does not exist: " + m.detections_path);
  return m;
}

/// A fully loaded sequence, ready for the tracker.
struct SequenceData {
  std::string name;
  CameraModel camera;
  TrackerConfig tracker;
  std::vector<FrameBundle> frames;
  std::vector<std::unique_ptr<DepthImage>> depth_storage;
  TrackTable ground_truth;
  bool has_ground_truth = false;
};

/// Assembles per-frame bundles from the manifest's files. EMAP modes need
/// odometry; baseline runs fall back to zero ego motion at dt_default.
inline SequenceData load_sequence(const SequenceManifest& m, EmapMode mode) {
  SequenceData seq;
  seq.name = m.name;
  seq.camera = m.camera;
  seq.tracker = m.tracker;
  seq.tracker.mode = mode;

  DetectionFile dets = parse_detections(m.detections_path);
  const int n_frames = static_cast<int>(dets.frames.size());

  std::vector<EgoMotionSample> odo;
  if (!m.odometry_path.empty() && std::filesystem::exists(m.odometry_path)) {
    odo = parse_odometry(m.odometry_path, m.tracker.dt_default);
  } else if (mode != EmapMode::Baseline) {
    throw IoError("odometry file required for mode '" +
                  std::string(to_string(mode)) + "' is missing: " +
                  (m.odometry_path.empty() ? "(not set in manifest)"
                                           : m.odometry_path));
  }
  if (!odo.empty() && static_cast<int>(odo.size()) < n_frames)
    throw IoError("odometry covers " + std::to_string(odo.size()) +
                  " frames but detections reach frame " +
                  std::to_string(n_frames - 1) + ": " + m.odometry_path);

  const bool use_depth_dir = !m.depth_dir.empty();
  seq.frames.reserve(n_frames);
  for (int k = 0; k < n_frames; ++k) {
    FrameBundle fb;
    fb.frame = k;
    for (Detection& d : dets.frames[k]) {
      if (!m.class_filter.empty() &&
          std::find(m.class_filter.begin(), m.class_filter.end(),
                    d.class_label) == m.class_filter.end())
        continue;
      fb.detections.push_back(std::move(d));
    }
    fb.ego = odo.empty() ? EgoMotionSample{0.0, 0.0, m.tracker.dt_default}
                         : odo[k];
    if (use_depth_dir &&
        std::filesystem::exists(depth_frame_path(m.depth_dir, k))) {
      seq.depth_storage.push_back(
          std::make_unique<DepthImage>(parse_depth(m.depth_dir, k, m.camera)));
      fb.depth_image = seq.depth_storage.back().get();
    }
    seq.frames.push_back(std::move(fb));
  }

  if (!m.ground_truth_path.empty()) {
    if (!std::filesystem::exists(m.ground_truth_path))
      throw IoError("ground truth file does not exist: " +
                    m.ground_truth_path);
    TrackTable gt = read_tracks(m.ground_truth_path);
    if (!m.class_filter.empty()) {
      std::erase_if(gt, [&](const TrackOutput& r) {
        return std::find(m.class_filter.begin(), m.class_filter.end(),
                         r.class_label) == m.class_filter.end();
      });
    }
    seq.ground_truth = std::move(gt);
    seq.has_ground_truth = true;
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Synthetic sequence writer: serializes a scenario in exactly the formats
// above so synthetic and real data share one pipeline.
// ---------------------------------------------------------------------------

struct SynthOptions {
  double dropout = 0.0;
  double noise_std = 0.0;
  std::uint64_t seed = 1;
  bool depth_images = false;
  std::set<std::pair<int, int>> explicit_drops;
};

/// Rasterizes per-object depth into a frame image: each box region takes the
/// object's distance, nearest object winning per pixel; background stays
/// invalid (0).
inline DepthImage render_depth(const SimFrame& frame, const CameraModel& cam) {
  DepthImage img;
  img.width = cam.width;
  img.height = cam.height;
  img.meters.assign(
      static_cast<std::size_t>(cam.width) * static_cast<std::size_t>(cam.height),
      0.0f);
  for (const GroundTruthBox& gt : frame.boxes) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(gt.box.left)));
    const int x1 = std::min(cam.width - 1, static_cast<int>(std::floor(gt.box.right)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(gt.box.top)));
    const int y1 = std::min(cam.height - 1, static_cast<int>(std::floor(gt.box.bottom)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        float& v = img.meters[static_cast<std::size_t>(y) * cam.width + x];
        const float d = static_cast<float>(gt.depth);
        if (v == 0.0f || d < v) v = d;
      }
    }
  }
  return img;
}

/// Writes detections.csv, odometry.csv, gt.csv, manifest.json (and depth/
/// when requested) for a scenario under out_dir, and returns the manifest
/// path. Synthetic manifests use min_hits = 1: the generator never emits
/// false positives, so no confirmation delay is needed.
inline std::string write_synthetic_sequence(const Scenario& sc,
                                            const std::string& out_dir,
                                            const SynthOptions& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::vector<SimFrame> frames = simulate(sc);
  DropoutSchedule schedule;
  schedule.probability = opt.dropout;
  schedule.drops = opt.explicit_drops;
  const auto detections =
      corrupt(frames, schedule, opt.noise_std, opt.seed, /*attach_depth=*/true);

  std::ostringstream det_os;
  det_os << "frame,class,left,top,right,bottom,score,depth\n";
  for (std::size_t k = 0; k < detections.size(); ++k) {
    for (const Detection& d : detections[k]) {
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%d,%s,%.3f,%.3f,%.3f,%.3f,%.3f,%.4f\n",
                    d.frame, d.class_label.c_str(), d.box.left, d.box.top,
                    d.box.right, d.box.bottom, d.confidence,
                    d.depth.value_or(0.0));
      det_os << buf;
    }
  }
  write_text_file((fs::path(out_dir) / "detections.csv").string(),
                  det_os.str());

  std::ostringstream odo_os;
  odo_os << "frame,timestamp_s,forward_speed_mps,yaw_rate_radps\n";
  double t = 0.0;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (k > 0) t += frames[k].ego.dt;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", frames[k].frame, t,
                  frames[k].ego.forward_speed, frames[k].ego.yaw_rate);
    odo_os << buf;
  }
  write_text_file((fs::path(out_dir) / "odometry.csv").string(), odo_os.str());

  TrackTable gt;
  for (const SimFrame& fr : frames)
    for (const GroundTruthBox& b : fr.boxes)
      gt.push_back({fr.frame, b.object_id, b.class_label, b.box, 1.0, false});
  write_tracks((fs::path(out_dir) / "gt.csv").string(), gt);

  if (opt.depth_images) {
    fs::create_directories(fs::path(out_dir) / "depth");
    for (const SimFrame& fr : frames)
      write_depth_pgm(
          depth_frame_path((fs::path(out_dir) / "depth").string(), fr.frame),
          render_depth(fr, sc.camera));
  }

  nlohmann::json j;
  j["name"] = sc.name;
  j["detections"] = "detections.csv";
  j["odometry"] = "odometry.csv";
  j["ground_truth"] = "gt.csv";
  if (opt.depth_images) j["depth_dir"] = "depth";
  j["camera"] = {{"f", sc.camera.f},
                 {"cx", sc.camera.cx},
                 {"cy", sc.camera.cy},
                 {"width", sc.camera.width},
                 {"height", sc.camera.height}};
  j["max_range"] = sc.max_depth;
  j["tracker"] = {{"iou_min", 0.3},
                  {"max_age", 10},
                  {"min_hits", 1},
                  {"dt_default", sc.script.empty() ? 0.05 : sc.script[0].dt}};
  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.json").string();
  write_text_file(manifest_path, j.dump(2) + "\n");
  return manifest_path;
}

}  // namespace emap
