#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "emap/association.hpp"
#include "emap/geometry.hpp"
#include "emap/random.hpp"

namespace emap {

/// A simulated target: constant world-frame velocity, frontal rectangle of
/// physical size width x height meters centered at `position` (z up, meters).
struct WorldObject {
  int id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double width = 1.8;
  double height = 1.5;
  std::string class_label = "Car";
};

/// One frame of the scripted ego trajectory. Entry k describes the motion
/// between frames k-1 and k; entry 0 only sets the first frame interval.
struct EgoStep {
  double dt = 0.05;
  double speed = 0.0;     // m/s along the current heading
  double yaw_rate = 0.0;  // rad/s, positive = left turn (content moves +u)
};

/// A full synthetic scene: ego script plus world objects seen through a
/// pinhole camera mounted at camera_height above the ground plane.
struct Scenario {
  std::string name = "custom";
  CameraModel camera{500.0, 320.0, 240.0, 640, 480};
  double camera_height = 1.4;
  std::vector<WorldObject> objects;
  std::vector<EgoStep> script;
  double min_depth = 1.0;    // targets closer than this emit no box
  double max_depth = 100.0;  // targets farther than this emit no box
};

struct GroundTruthBox {
  int object_id = 0;
  std::string class_label;
  Box box;
  double depth = 0.0;  // Euclidean camera-to-center distance, meters
};

struct SimFrame {
  int frame = 0;
  EgoMotionSample ego;
  std::vector<GroundTruthBox> boxes;
  double ego_x = 0.0, ego_y = 0.0, ego_heading = 0.0;
};

/// Integrates the ego script over the ground plane and projects every object
/// through the pinhole model. The ego advances along its current heading and
/// then rotates, so re-deriving (speed, yaw rate) from consecutive poses
/// recovers the script exactly. A box is emitted only when fully inside the
/// image and inside the depth limits.
inline std::vector<SimFrame> simulate(const Scenario& sc) {
  sc.camera.validate();
  std::vector<SimFrame> out;
  out.reserve(sc.script.size());
  double ex = 0.0, ey = 0.0, heading = 0.0, t = 0.0;
  for (std::size_t k = 0; k < sc.script.size(); ++k) {
    const EgoStep& step = sc.script[k];
    if (!(step.dt > 0.0)) throw Error("scenario: script dt must be positive");
    if (k > 0) {
      ex += step.speed * step.dt * std::cos(heading);
      ey += step.speed * step.dt * std::sin(heading);
      heading += step.yaw_rate * step.dt;
      t += step.dt;
    }
    SimFrame frame;
    frame.frame = static_cast<int>(k);
    frame.ego = {step.speed, step.yaw_rate, step.dt};
    frame.ego_x = ex;
    frame.ego_y = ey;
    frame.ego_heading = heading;

    const double ch = std::cos(heading);
    const double sh = std::sin(heading);
    const double f = sc.camera.f;
    for (const WorldObject& ob : sc.objects) {
      const Eigen::Vector3d p = ob.position + ob.velocity * t;
      const double dx = p.x() - ex;
      const double dy = p.y() - ey;
      const double dz = p.z() - sc.camera_height;
      const double fwd = ch * dx + sh * dy;    // camera-frame Z
      const double right = sh * dx - ch * dy;  // camera-frame X
      const double down = -dz;                 // camera-frame Y
      if (fwd < sc.min_depth) continue;
      const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (dist > sc.max_depth) continue;
      Box b;
      b.left = sc.camera.cx + f * (right - 0.5 * ob.width) / fwd;
      b.right = sc.camera.cx + f * (right + 0.5 * ob.width) / fwd;
      b.top = sc.camera.cy + f * (down - 0.5 * ob.height) / fwd;
      b.bottom = sc.camera.cy + f * (down + 0.5 * ob.height) / fwd;
      if (b.left < 0.0 || b.top < 0.0 || b.right > sc.camera.width - 1 ||
          b.bottom > sc.camera.height - 1)
        continue;
      frame.boxes.push_back({ob.id, ob.class_label, b, dist});
    }
    out.push_back(std::move(frame));
  }
  return out;
}

/// Which ground-truth boxes the detector misses: an explicit
/// (frame, object id) set, an i.i.d. per-box probability, or both.
struct DropoutSchedule {
  double probability = 0.0;
  std::set<std::pair<int, int>> drops;  // (frame, object id)

  static DropoutSchedule none() { return {}; }
  static DropoutSchedule random(double p) {
    DropoutSchedule s;
    s.probability = p;
    return s;
  }
  static DropoutSchedule explicit_drops(std::set<std::pair<int, int>> d) {
    DropoutSchedule s;
    s.drops = std::move(d);
    return s;
  }
};

/// Turns ground truth into detector output: scheduled boxes are omitted and
/// the survivors get zero-mean Gaussian corner noise from the seeded stream.
/// Draw order is fixed (frames in order, boxes in emitted order; one uniform
/// per box when probability > 0, then four normals per surviving box), so a
/// seed reproduces the identical detections everywhere.
inline std::vector<std::vector<Detection>> corrupt(
    const std::vector<SimFrame>& frames, const DropoutSchedule& schedule,
    double noise_std, std::uint64_t seed, bool attach_depth = true) {
  RandomStream rng(seed);
  std::vector<std::vector<Detection>> out(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const SimFrame& fr = frames[k];
    for (const GroundTruthBox& gt : fr.boxes) {
      bool drop = schedule.drops.count({fr.frame, gt.object_id}) > 0;
      if (schedule.probability > 0.0)
        drop = (rng.uniform() < schedule.probability) || drop;
      if (drop) continue;
      Detection det;
      det.frame = fr.frame;
      det.class_label = gt.class_label;
      det.box = gt.box;
      det.confidence = 1.0;
      if (attach_depth) det.depth = gt.depth;
      if (noise_std > 0.0) {
        det.box.left += noise_std * rng.normal();
        det.box.top += noise_std * rng.normal();
        det.box.right += noise_std * rng.normal();
        det.box.bottom += noise_std * rng.normal();
        if (det.box.left > det.box.right) std::swap(det.box.left, det.box.right);
        if (det.box.top > det.box.bottom) std::swap(det.box.top, det.box.bottom);
      }
      out[k].push_back(std::move(det));
    }
  }
  return out;
}

namespace detail {

inline void append_segment(std::vector<EgoStep>& script, int frames, double dt,
                           double speed, double yaw_rate) {
  for (int i = 0; i < frames; ++i) script.push_back({dt, speed, yaw_rate});
}

/// Linear speed ramp over `frames` steps, from `s0` (exclusive) to `s1`.
inline void append_ramp(std::vector<EgoStep>& script, int frames, double dt,
                        double s0, double s1, double yaw_rate) {
  for (int i = 1; i <= frames; ++i)
    script.push_back({dt, s0 + (s1 - s0) * i / frames, yaw_rate});
}

}  // namespace detail

/// The four built-in scenes: a straight road, a start-stop run into a curve,
/// a straight run into a hard left turn and a curve ending at a stop, and a
/// winding path ending after a right turn. All run at 20 Hz with the same
/// 640x480 f=500 camera and automotive-plausible speeds.
inline Scenario builtin_scenario(int number) {
  Scenario sc;
  sc.camera = {500.0, 320.0, 240.0, 640, 480};
  sc.camera_height = 1.4;
  const double dt = 0.05;
  const auto car = [](int id, double x, double y, double vx = 0.0,
                      double vy = 0.0) {
    return WorldObject{id, {x, y, 0.75}, {vx, vy, 0.0}, 1.8, 1.5, "Car"};
  };
  const auto pedestrian = [](int id, double x, double y, double vx = 0.0,
                             double vy = 0.0) {
    return WorldObject{id, {x, y, 0.9}, {vx, vy, 0.0}, 0.6, 1.8, "Pedestrian"};
  };

  switch (number) {
    case 1: {
      sc.name = "straight-road";
      sc.script.push_back({dt, 0.0, 0.0});
      detail::append_segment(sc.script, 239, dt, 8.0, 0.0);
      sc.objects = {
          car(1, 14.0, 0.8, 8.0, 0.0),    // leading car, constant headway
          car(2, 30.0, -3.2),             // parked, right shoulder
          car(3, 55.0, -3.4),
          car(4, 80.0, -3.2),
          car(5, 45.0, 3.4),              // parked, left shoulder
          car(6, 110.0, 2.2, -10.0, 0.0), // oncoming
          pedestrian(7, 70.0, 4.5, 0.0, -0.6),
      };
      break;
    }
    case 2: {
      sc.name = "start-stop-curve";
      sc.script.push_back({dt, 0.0, 0.0});
      detail::append_ramp(sc.script, 50, dt, 0.0, 8.0, 0.0);  // pull away
      detail::append_segment(sc.script, 80, dt, 8.0, 0.0);
      detail::append_segment(sc.script, 60, dt, 8.0, 0.25);   // left curve
      detail::append_segment(sc.script, 39, dt, 8.0, 0.0);
      detail::append_ramp(sc.script, 30, dt, 8.0, 0.0, 0.0);  // brake to stop
      sc.objects = {
          car(1, 18.0, -3.0),
          car(2, 38.0, -3.3),
          car(3, 28.0, 3.4),
          car(4, 66.0, 4.5),
          car(5, 72.0, 13.3),
          car(6, 90.0, 2.6, -9.0, 0.0),  // oncoming on the first straight
          pedestrian(7, 40.0, -4.2),
      };
      break;
    }
    case 3: {
      sc.name = "left-turn-curve-stop";
      sc.script.push_back({dt, 0.0, 0.0});
      detail::append_segment(sc.script, 100, dt, 8.0, 0.0);
      detail::append_segment(sc.script, 50, dt, 8.0, 0.30);   // hard left turn
      detail::append_segment(sc.script, 60, dt, 8.0, 0.12);   // gentle curve
      detail::append_ramp(sc.script, 40, dt, 8.0, 2.0, 0.0);
      detail::append_ramp(sc.script, 29, dt, 2.0, 0.0, 0.0);  // stop
      sc.objects = {
          car(1, 57.0, 3.0),              // swings across the image in the turn
          car(2, 25.0, -3.2),
          car(3, 48.0, 3.4),
          car(4, 15.0, 0.7, 8.0, 0.0),    // leading car, drifts out in the turn
          car(5, 95.0, 2.8, -10.0, 0.0),  // oncoming
          pedestrian(6, 60.0, -4.0),
          car(7, 77.0, 24.0),             // parked along the post-turn road
      };
      break;
    }
    case 4: {
      sc.name = "winding-right-turn";
      sc.script.push_back({dt, 0.0, 0.0});
      detail::append_segment(sc.script, 40, dt, 10.0, 0.0);
      detail::append_segment(sc.script, 50, dt, 10.0, -0.25);  // right bend
      detail::append_segment(sc.script, 60, dt, 10.0, 0.25);   // left bend
      detail::append_segment(sc.script, 50, dt, 10.0, 0.0);
      detail::append_segment(sc.script, 40, dt, 10.0, -0.30);  // final right turn
      detail::append_segment(sc.script, 39, dt, 6.0, 0.0);
      sc.objects = {
          car(1, 25.0, -3.0),
          car(2, 45.0, -9.0),
          car(3, 55.0, -14.0),
          car(4, 70.0, -12.0),
          car(5, 18.0, 0.8, 10.0, 0.0),
          pedestrian(6, 35.0, -6.5),
          car(7, 85.0, -20.0),
      };
      break;
    }
    default:
      throw Error("builtin_scenario: number must be 1..4");
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Custom scenario files: a small TOML-like format with [camera], [[segment]]
// and [[object]] tables. See the README for the grammar.
// ---------------------------------------------------------------------------

namespace detail {

using ConfigValue = std::variant<double, std::string, std::vector<double>>;
using ConfigTable = std::map<std::string, ConfigValue>;

struct ScenarioConfig {
  ConfigTable root;
  std::map<std::string, ConfigTable> tables;               // [name]
  std::map<std::string, std::vector<ConfigTable>> arrays;  // [[name]]
};

inline std::string config_trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline ConfigValue parse_config_value(const std::string& raw, int line_no,
                                      const std::string& path) {
  const std::string v = config_trim(raw);
  const auto fail = [&](const std::string& what) -> ParseError {
    return ParseError(path + ":" + std::to_string(line_no) + ": " + what);
  };
  if (v.empty()) throw fail("empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw fail("unterminated string");
    return v.substr(1, v.size() - 2);
  }
  if (v.front() == '[') {
    if (v.back() != ']') throw fail("unterminated array");
    std::vector<double> nums;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = config_trim(item);
      if (item.empty()) throw fail("empty array element");
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw fail("bad number '" + item + "'");
      }
    }
    return nums;
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw fail("bad value '" + v + "'");
  }
}

inline ScenarioConfig parse_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario config: " + path);
  ScenarioConfig cfg;
  ConfigTable* current = &cfg.root;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = config_trim(line);
    if (line.empty()) continue;
    if (line.rfind("[[", 0) == 0) {
      if (line.size() < 5 || line.substr(line.size() - 2) != "]]")
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": malformed table header");
      const std::string name = config_trim(line.substr(2, line.size() - 4));
      cfg.arrays[name].emplace_back();
      current = &cfg.arrays[name].back();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": malformed table header");
      const std::string name = config_trim(line.substr(1, line.size() - 2));
      current = &cfg.tables[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected key = value");
    const std::string key = config_trim(line.substr(0, eq));
    if (key.empty())
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty key");
    (*current)[key] = parse_config_value(line.substr(eq + 1), line_no, path);
  }
  return cfg;
}

inline double config_number(const ConfigTable& t, const std::string& key,
                            std::optional<double> fallback,
                            const std::string& path) {
  const auto it = t.find(key);
  if (it == t.end()) {
    if (fallback) return *fallback;
    throw ParseError(path + ": missing required key '" + key + "'");
  }
  if (const double* d = std::get_if<double>(&it->second)) return *d;
  throw ParseError(path + ": key '" + key + "' must be a number");
}

inline std::vector<double> config_array(const ConfigTable& t,
                                        const std::string& key, std::size_t n,
                                        std::optional<std::vector<double>> fb,
                                        const std::string& path) {
  const auto it = t.find(key);
  if (it == t.end()) {
    if (fb) return *fb;
    throw ParseError(path + ": missing required key '" + key + "'");
  }
  const auto* arr = std::get_if<std::vector<double>>(&it->second);
  if (arr == nullptr || arr->size() != n)
    throw ParseError(path + ": key '" + key + "' must be an array of " +
                     std::to_string(n) + " numbers");
  return *arr;
}

inline std::string config_string(const ConfigTable& t, const std::string& key,
                                 const std::string& fallback) {
  const auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
  return fallback;
}

}  // namespace detail

/// Loads a custom scenario description. Unknown keys are ignored; segments
/// expand to per-frame script entries in file order.
inline Scenario load_scenario_file(const std::string& path) {
  const detail::ScenarioConfig cfg = detail::parse_scenario_config(path);
  Scenario sc;
  sc.name = detail::config_string(cfg.root, "name", "custom");
  const double dt = detail::config_number(cfg.root, "dt", 0.05, path);
  if (!(dt > 0.0)) throw ParseError(path + ": dt must be positive");
  sc.camera_height =
      detail::config_number(cfg.root, "camera_height", 1.4, path);
  sc.min_depth = detail::config_number(cfg.root, "min_depth", 1.0, path);
  sc.max_depth = detail::config_number(cfg.root, "max_depth", 100.0, path);

  if (const auto it = cfg.tables.find("camera"); it != cfg.tables.end()) {
    const detail::ConfigTable& cam = it->second;
    sc.camera.f = detail::config_number(cam, "f", 500.0, path);
    sc.camera.cx = detail::config_number(cam, "cx", 320.0, path);
    sc.camera.cy = detail::config_number(cam, "cy", 240.0, path);
    sc.camera.width =
        static_cast<int>(detail::config_number(cam, "width", 640, path));
    sc.camera.height =
        static_cast<int>(detail::config_number(cam, "height", 480, path));
  }
  sc.camera.validate();

  const auto seg_it = cfg.arrays.find("segment");
  if (seg_it == cfg.arrays.end() || seg_it->second.empty())
    throw ParseError(path + ": at least one [[segment]] is required");
  sc.script.push_back({dt, 0.0, 0.0});
  for (const detail::ConfigTable& seg : seg_it->second) {
    const int frames =
        static_cast<int>(detail::config_number(seg, "frames", std::nullopt, path));
    if (frames <= 0) throw ParseError(path + ": segment frames must be > 0");
    const double speed = detail::config_number(seg, "speed", 0.0, path);
    const double yaw = detail::config_number(seg, "yaw_rate", 0.0, path);
    detail::append_segment(sc.script, frames, dt, speed, yaw);
  }

  int next_id = 1;
  if (const auto ob_it = cfg.arrays.find("object"); ob_it != cfg.arrays.end()) {
    for (const detail::ConfigTable& ob : ob_it->second) {
      WorldObject w;
      w.id = static_cast<int>(
          detail::config_number(ob, "id", next_id, path));
      next_id = std::max(next_id, w.id) + 1;
      w.class_label = detail::config_string(ob, "class", "Car");
      const auto pos =
          detail::config_array(ob, "position", 3, std::nullopt, path);
      w.position = {pos[0], pos[1], pos[2]};
      const auto vel = detail::config_array(ob, "velocity", 3,
                                            std::vector<double>{0, 0, 0}, path);
      w.velocity = {vel[0], vel[1], vel[2]};
      const auto size =
          detail::config_array(ob, "size", 2, std::nullopt, path);
      if (!(size[0] > 0.0 && size[1] > 0.0))
        throw ParseError(path + ": object size must be positive");
      w.width = size[0];
      w.height = size[1];
      sc.objects.push_back(std::move(w));
    }
  }
  return sc;
}

}  // namespace emap
