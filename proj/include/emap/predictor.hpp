#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "emap/geometry.hpp"
#include "emap/kalman.hpp"

namespace emap {

/// Which ego-motion disturbance columns the prediction step applies.
enum class EmapMode { Baseline, RotationOnly, TranslationOnly, Full };

inline const char* to_string(EmapMode mode) {
  switch (mode) {
    case EmapMode::Baseline: return "baseline";
    case EmapMode::RotationOnly: return "rot";
    case EmapMode::TranslationOnly: return "trans";
    case EmapMode::Full: return "full";
  }
  return "?";
}

inline bool uses_rotation(EmapMode mode) {
  return mode == EmapMode::RotationOnly || mode == EmapMode::Full;
}

inline bool uses_translation(EmapMode mode) {
  return mode == EmapMode::TranslationOnly || mode == EmapMode::Full;
}

/// Row-major depth raster in meters; 0 marks an invalid pixel.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<float> meters;

  float at(int x, int y) const {
    return meters[static_cast<std::size_t>(y) * width + x];
  }
};

/// Per-target depth lookup for one prediction step: a depth raster, a scalar
/// that rides on the target itself, or nothing.
struct DepthSource {
  const DepthImage* raster = nullptr;
  std::optional<double> scalar;
  double max_range = 100.0;

  static DepthSource none() { return {}; }
  static DepthSource image(const DepthImage* img, double range) {
    DepthSource s;
    s.raster = img;
    s.max_range = range;
    return s;
  }
  static DepthSource value(double meters, double range = 100.0) {
    DepthSource s;
    s.scalar = meters;
    s.max_range = range;
    return s;
  }
};

/// Robust per-target depth: the median of valid raster pixels inside the
/// box scaled to 50% about its center (border pixels mostly belong to the
/// background). Unavailable when fewer than 5 valid pixels remain. A scalar
/// source passes through after the range check.
inline std::optional<double> estimate_target_depth(const Box& box,
                                                   const DepthSource& src,
                                                   const CameraModel& cam) {
  if (src.scalar) {
    if (*src.scalar > 0.0 && *src.scalar <= src.max_range) return src.scalar;
    return std::nullopt;
  }
  if (src.raster == nullptr) return std::nullopt;
  const DepthImage& img = *src.raster;
  const int w = img.width > 0 ? img.width : cam.width;
  const int h = img.height > 0 ? img.height : cam.height;
  const double hw = 0.25 * box.width();
  const double hh = 0.25 * box.height();
  const int x0 = std::max(0, static_cast<int>(std::ceil(box.center_u() - hw)));
  const int x1 = std::min(w - 1, static_cast<int>(std::floor(box.center_u() + hw)));
  const int y0 = std::max(0, static_cast<int>(std::ceil(box.center_v() - hh)));
  const int y1 = std::min(h - 1, static_cast<int>(std::floor(box.center_v() + hh)));
  std::vector<double> vals;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double v = img.at(x, y);
      if (v > 0.0 && v <= src.max_range) vals.push_back(v);
    }
  }
  if (vals.size() < 5) return std::nullopt;
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  if (n % 2 == 1) return vals[n / 2];
  return 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

/// Builds the 8x2 disturbance matrix from principal-point-centered corners.
/// Column 0 maps yaw rate into horizontal corner shifts; column 1 maps
/// forward speed into all four corner shifts scaled by 1/depth. Velocity rows
/// stay zero, and the column a mode excludes stays zero.
inline Mat8x2 build_disturbance(const Vec4& centered_corners, double f,
                                std::optional<double> depth, EmapMode mode) {
  Mat8x2 g = Mat8x2::Zero();
  if (uses_rotation(mode)) {
    g(0, 0) = linear_rotation_coeff(centered_corners(0), f);
    g(2, 0) = linear_rotation_coeff(centered_corners(2), f);
  }
  if (uses_translation(mode)) {
    if (!depth)
      throw MissingDepthError(
          "build_disturbance: translation requested without target depth");
    for (int i = 0; i < 4; ++i)
      g(i, 1) = linear_translation_coeff(centered_corners(i), f, *depth);
  }
  return g;
}

/// One ego-motion-aware prediction step: shift the corner state to
/// principal-point-centered coordinates, build the disturbance from the
/// current corners, run the filter predict, and shift back. When depth is
/// unavailable the mode degrades for this step (Full -> RotationOnly,
/// TranslationOnly -> Baseline) since rotation needs no depth.
///
/// A step whose effective disturbance is structurally zero skips the
/// centering round-trip entirely, which keeps it bit-identical to the plain
/// constant-velocity predict.
inline KfState emap_predict(const KfState& s, const KfModel& m,
                            const EgoMotionSample& ego,
                            std::optional<double> depth, EmapMode mode,
                            const CameraModel& cam) {
  if (!depth) {
    if (mode == EmapMode::Full) mode = EmapMode::RotationOnly;
    else if (mode == EmapMode::TranslationOnly) mode = EmapMode::Baseline;
  }
  const bool rot_active = uses_rotation(mode) && ego.yaw_rate != 0.0;
  const bool trans_active = uses_translation(mode) && ego.forward_speed != 0.0;
  if (!rot_active && !trans_active) {
    KfState out = predict(s, m, Mat8x2::Zero(), Vec2::Zero(), ego.dt);
    repair_corner_order(out);
    return out;
  }

  KfState centered = s;
  centered.x(0) -= cam.cx;
  centered.x(1) -= cam.cy;
  centered.x(2) -= cam.cx;
  centered.x(3) -= cam.cy;
  const Mat8x2 g = build_disturbance(centered.x.head<4>(), cam.f, depth, mode);
  KfState out = predict(centered, m, g,
                        Vec2(ego.yaw_rate, ego.forward_speed), ego.dt);
  out.x(0) += cam.cx;
  out.x(1) += cam.cy;
  out.x(2) += cam.cx;
  out.x(3) += cam.cy;
  repair_corner_order(out);
  return out;
}

}  // namespace emap
