#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "emap/errors.hpp"

namespace emap {

/// Guard value for the exact projection denominators, in their natural units.
/// Below this the target has effectively reached the camera plane and the
/// projection flips sign from floating-point cancellation.
inline constexpr double kDegenerateEps = 1e-6;

/// Axis-aligned pixel box in top-left-origin coordinates.
struct Box {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const {
    return std::max(0.0, width()) * std::max(0.0, height());
  }
  double center_u() const { return 0.5 * (left + right); }
  double center_v() const { return 0.5 * (top + bottom); }
  double diagonal() const { return std::hypot(width(), height()); }
  bool valid() const { return left <= right && top <= bottom; }
};

/// Point in top-left-origin pixel coordinates.
struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Pixel offsets from the principal point: +u right, +v down.
struct CenteredPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole camera on a rectified image: focal length in pixels, principal
/// point in top-left-origin pixels, image size in pixels.
struct CameraModel {
  double f = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const {
    if (!(f > 0.0)) throw GeometryError("camera: focal length must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
      throw GeometryError("camera: principal point outside the image");
  }
};

/// One frame of ego motion. forward_speed is meters/second toward the image
/// plane normal; yaw_rate is radians/second with the sign that shifts image
/// content toward +u (a left turn when the camera looks forward).
struct EgoMotionSample {
  double forward_speed = 0.0;
  double yaw_rate = 0.0;
  double dt = 0.1;
};

inline CenteredPoint to_centered(const PixelPoint& p, const CameraModel& cam) {
  return {p.x - cam.cx, p.y - cam.cy};
}

inline PixelPoint from_centered(const CenteredPoint& p, const CameraModel& cam) {
  return {p.u + cam.cx, p.v + cam.cy};
}

/// Exact shift of a centered coordinate caused by forward ego translation.
/// `depth` is the Euclidean camera-to-target distance in meters. The same
/// formula serves the vertical coordinate. Throws GeometryError when the
/// target would reach the camera plane within the step.
inline double exact_translation_shift(double u, double depth,
                                      const EgoMotionSample& ego, double f) {
  if (!(depth > 0.0))
    throw GeometryError("exact_translation_shift: depth must be positive");
  const double angle = u / f;
  const double denom = depth * std::cos(angle) - ego.dt * ego.forward_speed;
  if (denom <= kDegenerateEps)
    throw GeometryError(
        "exact_translation_shift: target reaches the camera plane within the step");
  return f * depth * std::sin(angle) / denom;
}

/// Exact horizontal shift of a centered coordinate caused by ego yaw.
/// Rotation about the vertical axis leaves the vertical coordinate unchanged.
/// Throws GeometryError when the target wraps past 90 degrees of the axis.
inline double exact_rotation_shift(double u, const EgoMotionSample& ego,
                                   double f) {
  const double t = std::tan(ego.dt * ego.yaw_rate);
  const double denom = 1.0 - (u / f) * t;
  if (denom <= kDegenerateEps)
    throw GeometryError(
        "exact_rotation_shift: target wraps past 90 degrees of the optical axis");
  return f * (t + u / f) / denom;
}

/// First-order translation sensitivity: pixels per meter of forward
/// displacement. The predicted coordinate is u + coeff * forward_speed * dt.
inline double linear_translation_coeff(double u, double f, double depth) {
  if (!(depth > 0.0))
    throw GeometryError("linear_translation_coeff: depth must be positive");
  return u * std::sqrt(u * u + f * f) / (f * depth);
}

/// First-order rotation sensitivity: pixels per radian of yaw. The predicted
/// coordinate is u + coeff * yaw_rate * dt.
inline double linear_rotation_coeff(double u, double f) {
  return f * (1.0 + (u * u) / (f * f));
}

}  // namespace emap
