#pragma once

#include <Eigen/Dense>
#include <utility>

#include "emap/errors.hpp"

namespace emap {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat4 = Eigen::Matrix4d;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat4x8 = Eigen::Matrix<double, 4, 8>;
using Mat8x4 = Eigen::Matrix<double, 8, 4>;
using Mat8x2 = Eigen::Matrix<double, 8, 2>;

/// Corner-form track state: [left, top, right, bottom] pixel corners followed
/// by their velocities in pixels/second, with the 8x8 estimate covariance.
struct KfState {
  Vec8 x = Vec8::Zero();
  Mat8 P = Mat8::Identity();
};

/// Constant-velocity model matrices for the corner-form state. The transition
/// couples each corner with its velocity over one frame interval; observations
/// are the four corners directly.
struct KfModel {
  Mat8 F = Mat8::Identity();
  Mat4x8 H = Mat4x8::Zero();
  Mat8 Q = Mat8::Zero();
  Mat4 R = Mat4::Identity();

  static KfModel constant_velocity(double dt) {
    KfModel m;
    m.H.leftCols<4>() = Mat4::Identity();
    m.set_dt(dt);
    return m;
  }

  void set_dt(double dt) {
    F = Mat8::Identity();
    for (int i = 0; i < 4; ++i) F(i, i + 4) = dt;
  }
};

inline void symmetrize(Mat8& m) { m = (0.5 * (m + m.transpose())).eval(); }

/// Predict step with an additive disturbance input:
///   x' = F x + G w dt,   P' = F P F^T + Q.
/// The two disturbance columns accumulate separately so that enabling one
/// column at a time composes additively in the state vector, and a zero
/// column leaves the state bits untouched.
inline KfState predict(const KfState& s, const KfModel& m, const Mat8x2& g,
                       const Vec2& w, double dt) {
  KfState out;
  out.x = m.F * s.x;
  out.x += g.col(0) * (w(0) * dt);
  out.x += g.col(1) * (w(1) * dt);
  out.P = m.F * s.P * m.F.transpose() + m.Q;
  symmetrize(out.P);
  if (!out.x.allFinite() || !out.P.allFinite())
    throw FilterError("predict produced a non-finite state");
  return out;
}

/// Measurement update with the Joseph-form covariance
///   P' = (I - K H) P (I - K H)^T + K R K^T,
/// which preserves symmetry and positive semidefiniteness under rounding and
/// matches (I - K H) P in exact arithmetic.
inline KfState update(const KfState& s, const Vec4& z, const KfModel& m) {
  const Vec4 innovation = z - m.H * s.x;
  const Mat4 innovation_cov = m.H * s.P * m.H.transpose() + m.R;
  Eigen::LDLT<Mat4> factor(innovation_cov);
  const Vec4 diag = factor.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (factor.info() != Eigen::Success || !factor.isPositive() ||
      !(diag.minCoeff() > dmax * 1e-14))
    throw FilterError("update: singular innovation covariance");
  const Mat8x4 gain = factor.solve(m.H * s.P).transpose();
  KfState out;
  out.x = s.x + gain * innovation;
  const Mat8 closed = Mat8::Identity() - gain * m.H;
  out.P = closed * s.P * closed.transpose() + gain * m.R * gain.transpose();
  symmetrize(out.P);
  if (!out.x.allFinite() || !out.P.allFinite())
    throw FilterError("update produced a non-finite state");
  return out;
}

/// Restores corner ordering (left <= right, top <= bottom) after a filter
/// step: swaps the offending coordinate pair and averages the paired rows and
/// columns of the covariance. Returns true when a repair was applied.
inline bool repair_corner_order(KfState& s) {
  bool touched = false;
  const auto fix = [&](int a, int b) {
    if (s.x(a) > s.x(b)) {
      std::swap(s.x(a), s.x(b));
      const Eigen::Matrix<double, 1, 8> row =
          0.5 * (s.P.row(a) + s.P.row(b));
      s.P.row(a) = row;
      s.P.row(b) = row;
      const Vec8 col = 0.5 * (s.P.col(a) + s.P.col(b));
      s.P.col(a) = col;
      s.P.col(b) = col;
      touched = true;
    }
  };
  fix(0, 2);
  fix(1, 3);
  return touched;
}

}  // namespace emap
