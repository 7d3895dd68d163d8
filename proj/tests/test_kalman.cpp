#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "emap/kalman.hpp"
#include "emap/random.hpp"

using namespace emap;

namespace {

double min_eigenvalue(const Mat8& m) {
  Eigen::SelfAdjointEigenSolver<Mat8> solver(m);
  return solver.eigenvalues().minCoeff();
}

double asymmetry(const Mat8& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

KfState random_state(RandomStream& rng) {
  KfState s;
  const double l = rng.uniform(0.0, 500.0);
  const double t = rng.uniform(0.0, 350.0);
  s.x << l, t, l + rng.uniform(10.0, 120.0), t + rng.uniform(10.0, 90.0),
      rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0),
      rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0);
  Mat8 a;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  s.P = a * a.transpose() + 0.1 * Mat8::Identity();
  return s;
}

}  // namespace

TEST_CASE("predict with identity transition is a no-op") {
  KfModel m = KfModel::constant_velocity(0.0);
  m.Q.setZero();
  KfState s;
  s.x << 10, 20, 30, 40, 1, 2, 3, 4;
  s.P = 2.0 * Mat8::Identity();
  const KfState out = predict(s, m, Mat8x2::Zero(), Vec2::Zero(), 0.0);
  CHECK(out.x == s.x);
  CHECK(out.P == s.P);
}

TEST_CASE("predict shifts corners by dt times velocity") {
  KfModel m = KfModel::constant_velocity(0.5);
  m.Q.setZero();
  KfState s;
  s.x << 0, 0, 0, 0, 2, 3, 4, 5;
  const KfState out = predict(s, m, Mat8x2::Zero(), Vec2::Zero(), 0.5);
  CHECK(out.x(0) == 1.0);
  CHECK(out.x(1) == 1.5);
  CHECK(out.x(2) == 2.0);
  CHECK(out.x(3) == 2.5);
  CHECK(out.x.tail<4>() == s.x.tail<4>());
}

TEST_CASE("disturbance columns inject scaled ego motion") {
  // Hand-multiplied: rows 0 and 2 get 500*(1+0.01) * 0.1 rad/s * 0.1 s.
  KfModel m = KfModel::constant_velocity(0.1);
  m.Q.setZero();
  Mat8x2 g = Mat8x2::Zero();
  g(0, 0) = 505.0;
  g(2, 0) = 505.0;
  KfState s;  // zero state
  s.P = Mat8::Identity();
  const KfState out = predict(s, m, g, Vec2(0.1, 0.0), 0.1);
  CHECK_THAT(out.x(0), Catch::Matchers::WithinAbs(5.05, 1e-12));
  CHECK_THAT(out.x(2), Catch::Matchers::WithinAbs(5.05, 1e-12));
  for (const int i : {1, 3, 4, 5, 6, 7}) CHECK(out.x(i) == 0.0);
}

TEST_CASE("predict rejects non-finite inputs") {
  KfModel m = KfModel::constant_velocity(0.1);
  KfState s;
  s.x(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(predict(s, m, Mat8x2::Zero(), Vec2::Zero(), 0.1),
                  FilterError);
}

TEST_CASE("zero innovation leaves the state vector unchanged") {
  RandomStream rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    KfState s = random_state(rng);
    KfModel m = KfModel::constant_velocity(0.1);
    m.R = rng.uniform(0.5, 4.0) * Mat4::Identity();
    const Vec4 z = m.H * s.x;
    const KfState out = update(s, z, m);
    CHECK(out.x == s.x);
    // Covariance shrinks (or stays) in the Loewner order.
    CHECK(min_eigenvalue(s.P - out.P) >= -1e-9);
  }
}

TEST_CASE("huge observation noise makes the update ignore the measurement") {
  RandomStream rng(8);
  KfState s = random_state(rng);
  KfModel m = KfModel::constant_velocity(0.1);
  m.R = 1e12 * Mat4::Identity();
  Vec4 z = m.H * s.x + Vec4(5.0, -3.0, 2.0, 8.0);
  const KfState out = update(s, z, m);
  CHECK((out.x - s.x).norm() <= 1e-6);
}

TEST_CASE("decoupled unit setup reproduces the scalar gain 1/2") {
  KfState s;
  s.x << 1, 2, 3, 4, 0, 0, 0, 0;
  s.P = Mat8::Identity();
  KfModel m = KfModel::constant_velocity(0.1);
  m.R = Mat4::Identity();
  m.Q.setZero();
  // With P = I, R = I, H = [I 0]: K = [I/2; 0], so a unit innovation in one
  // observed component moves that state entry by exactly one half.
  Vec4 z = m.H * s.x;
  z(0) += 1.0;
  const KfState out = update(s, z, m);
  CHECK_THAT(out.x(0) - s.x(0), Catch::Matchers::WithinAbs(0.5, 1e-12));
  for (const int i : {1, 2, 3, 4, 5, 6, 7})
    CHECK_THAT(out.x(i), Catch::Matchers::WithinAbs(s.x(i), 1e-12));
}

TEST_CASE("update detects a singular innovation covariance") {
  KfState s;
  s.P.setZero();
  KfModel m = KfModel::constant_velocity(0.1);
  m.R.setZero();
  CHECK_THROWS_AS(update(s, Vec4::Zero(), m), FilterError);
}

TEST_CASE("covariance stays symmetric positive semidefinite under churn") {
  RandomStream rng(42);
  KfState s = random_state(rng);
  KfModel m = KfModel::constant_velocity(0.05);
  for (int i = 0; i < 4; ++i) {
    m.Q(i, i) = 0.5;
    m.Q(i + 4, i + 4) = 0.05;
  }
  m.R = 2.0 * Mat4::Identity();
  for (int step = 0; step < 500; ++step) {
    Mat8x2 g = Mat8x2::Zero();
    g(0, 0) = rng.uniform(400.0, 900.0);
    g(2, 0) = rng.uniform(400.0, 900.0);
    for (int i = 0; i < 4; ++i) g(i, 1) = rng.uniform(-10.0, 10.0);
    s = predict(s, m, g, Vec2(rng.uniform(-0.4, 0.4), rng.uniform(0.0, 15.0)),
                0.05);
    if (step % 3 != 2) {
      Vec4 z = m.H * s.x;
      for (int i = 0; i < 4; ++i) z(i) += 2.0 * rng.normal();
      s = update(s, z, m);
    }
    if (step % 25 == 0 || step == 499) {
      CHECK(asymmetry(s.P) <= 1e-9);
      CHECK(min_eigenvalue(s.P) >= -1e-9);
    }
  }
}

TEST_CASE("update is stable under covariance representation jitter") {
  RandomStream rng(11);
  KfState a = random_state(rng);
  KfState b = a;
  // Symmetric perturbation within 1e-12.
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j <= i; ++j) {
      const double eps = 1e-12 * rng.uniform(-1.0, 1.0);
      b.P(i, j) += eps;
      if (i != j) b.P(j, i) += eps;
    }
  KfModel m = KfModel::constant_velocity(0.1);
  m.R = 1.5 * Mat4::Identity();
  const Vec4 z = m.H * a.x + Vec4(1.0, 2.0, -1.0, 0.5);
  const KfState ua = update(a, z, m);
  const KfState ub = update(b, z, m);
  CHECK((ua.x - ub.x).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((ua.P - ub.P).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("normalized innovation squared stays in the chi-square band") {
  // Static truth observed through matched noise: the mean NIS of a
  // 4-dimensional observation should sit near 4.
  RandomStream rng(2024);
  const Vec4 truth(100.0, 100.0, 160.0, 180.0);
  const double sigma = 2.0;
  KfModel m = KfModel::constant_velocity(0.05);
  m.R = sigma * sigma * Mat4::Identity();
  for (int i = 0; i < 4; ++i) {
    m.Q(i, i) = 0.02;
    m.Q(i + 4, i + 4) = 0.02;
  }
  KfState s;
  s.x.head<4>() = truth;
  s.P = Mat8::Identity();
  s.P.diagonal().tail<4>().setConstant(100.0);

  double nis_sum = 0.0;
  int nis_count = 0;
  for (int step = 0; step < 600; ++step) {
    s = predict(s, m, Mat8x2::Zero(), Vec2::Zero(), 0.05);
    Vec4 z = truth;
    for (int i = 0; i < 4; ++i) z(i) += sigma * rng.normal();
    const Vec4 innovation = z - m.H * s.x;
    const Mat4 cov = m.H * s.P * m.H.transpose() + m.R;
    const double nis = innovation.dot(cov.ldlt().solve(innovation));
    if (step >= 100) {
      nis_sum += nis;
      nis_count += 1;
    }
    s = update(s, z, m);
  }
  const double mean_nis = nis_sum / nis_count;
  CHECK(mean_nis >= 2.0);
  CHECK(mean_nis <= 6.0);
}

TEST_CASE("corner order repair swaps and re-symmetrizes") {
  KfState s;
  s.x << 30, 5, 10, 25, 0, 0, 0, 0;  // left > right
  RandomStream rng(3);
  Mat8 a;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  s.P = a * a.transpose();
  CHECK(repair_corner_order(s));
  CHECK(s.x(0) == 10.0);
  CHECK(s.x(2) == 30.0);
  CHECK(s.x(1) == 5.0);
  CHECK(s.x(3) == 25.0);
  CHECK(asymmetry(s.P) <= 1e-12);
  CHECK(min_eigenvalue(s.P) >= -1e-9);

  KfState ok;
  ok.x << 1, 2, 3, 4, 0, 0, 0, 0;
  CHECK_FALSE(repair_corner_order(ok));
}
