#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "emap/geometry.hpp"
#include "emap/random.hpp"

using namespace emap;

namespace {
EgoMotionSample ego(double speed, double yaw, double dt) {
  return {speed, yaw, dt};
}
}  // namespace

TEST_CASE("translation shift fixed points") {
  // Center column is a fixed point of forward motion.
  CHECK(exact_translation_shift(0.0, 5.0, ego(30.0, 0.0, 0.1), 500.0) == 0.0);
  // Without ego speed the formula reduces to f*tan(u/f).
  const double u = 123.0, f = 500.0;
  const double got = exact_translation_shift(u, 20.0, ego(0.0, 0.0, 0.1), f);
  CHECK_THAT(got, Catch::Matchers::WithinAbs(f * std::tan(u / f), 1e-9));
  // ... which tends back to u as u -> 0 with the tan expansion's cubic rate.
  for (const double small : {1.0, 0.1, 0.01}) {
    const double s = exact_translation_shift(small, 20.0, ego(0.0, 0.0, 0.1), f);
    CHECK(std::abs(s - small) <
          1.5 * small * small * small / (3.0 * f * f) + 1e-12);
  }
}

TEST_CASE("translation shift against independent evaluation") {
  // High-precision evaluation, frozen before the implementation existed:
  // u=100, d=20, speed=10, dt=0.1, f=500.
  const double got =
      exact_translation_shift(100.0, 20.0, ego(10.0, 0.0, 0.1), 500.0);
  CHECK_THAT(got, Catch::Matchers::WithinAbs(106.803822182379946, 1e-9));
}

TEST_CASE("translation shift degenerate denominator") {
  // Target reaches the camera plane within the step.
  CHECK_THROWS_AS(exact_translation_shift(10.0, 1.0, ego(10.001, 0.0, 0.1), 500.0),
                  GeometryError);
  CHECK_THROWS_AS(exact_translation_shift(10.0, 0.0, ego(1.0, 0.0, 0.1), 500.0),
                  GeometryError);
  CHECK_THROWS_AS(exact_translation_shift(10.0, -3.0, ego(1.0, 0.0, 0.1), 500.0),
                  GeometryError);
}

TEST_CASE("rotation shift examples") {
  CHECK(exact_rotation_shift(37.0, ego(0.0, 0.0, 0.1), 500.0) == 37.0);
  CHECK_THAT(exact_rotation_shift(0.0, ego(0.0, 0.2, 0.1), 500.0),
             Catch::Matchers::WithinAbs(10.001333546701212, 1e-9));
  CHECK_THAT(exact_rotation_shift(100.0, ego(0.0, 0.2, 0.1), 500.0),
             Catch::Matchers::WithinAbs(110.443165119627127, 1e-9));
}

TEST_CASE("rotation shift at center equals f*tan exactly") {
  for (const double yaw : {0.05, 0.2, 0.31}) {
    const EgoMotionSample e = ego(0.0, yaw, 0.1);
    CHECK(exact_rotation_shift(0.0, e, 500.0) ==
          500.0 * std::tan(e.dt * e.yaw_rate));
  }
}

TEST_CASE("rotation shift degenerate denominator") {
  // (u/f) tan(dt yaw) >= 1: the target wraps past 90 degrees.
  CHECK_THROWS_AS(exact_rotation_shift(450.0, ego(0.0, 9.0, 0.15), 500.0),
                  GeometryError);
}

TEST_CASE("linear coefficients") {
  CHECK(linear_translation_coeff(0.0, 500.0, 10.0) == 0.0);
  CHECK_THAT(linear_translation_coeff(100.0, 500.0, 20.0),
             Catch::Matchers::WithinAbs(5.099019513592785, 1e-12));
  CHECK_THROWS_AS(linear_translation_coeff(10.0, 500.0, 0.0), GeometryError);

  CHECK(linear_rotation_coeff(0.0, 500.0) == 500.0);
  CHECK(linear_rotation_coeff(500.0, 500.0) == 1000.0);
  CHECK_THAT(linear_rotation_coeff(100.0, 500.0),
             Catch::Matchers::WithinAbs(520.0, 1e-12));
}

TEST_CASE("rotation linearization remainder is second order") {
  // The residual of the linearized shift shrinks like (yaw*dt)^2; the
  // measured worst case over |u| <= f at |yaw*dt| = 0.02 is about 0.41 px.
  const double f = 500.0;
  double max_err = 0.0;
  for (int ui = -500; ui <= 500; ui += 10) {
    for (int k = -20; k <= 20; ++k) {
      const double theta = k / 1000.0;
      const EgoMotionSample e = ego(0.0, theta / 0.1, 0.1);
      const double exact = exact_rotation_shift(ui, e, f);
      const double lin = ui + linear_rotation_coeff(ui, f) * theta;
      max_err = std::max(max_err, std::abs(exact - lin));
    }
  }
  CHECK_THAT(max_err, Catch::Matchers::WithinAbs(0.410940338, 1e-6));

  // Quadratic decay in theta at the worst-case u.
  double prev_ratio = 0.0;
  for (const double theta : {0.02, 0.01, 0.005, 0.0025}) {
    const EgoMotionSample e = ego(0.0, theta / 0.1, 0.1);
    const double err = std::abs(exact_rotation_shift(500.0, e, 500.0) -
                                (500.0 + linear_rotation_coeff(500.0, 500.0) * theta));
    const double ratio = err / (theta * theta);
    if (prev_ratio != 0.0)
      CHECK_THAT(ratio, Catch::Matchers::WithinRel(prev_ratio, 0.1));
    prev_ratio = ratio;
  }
}

TEST_CASE("translation linearization agrees to first order") {
  // The linear coefficient is the exact forward-displacement derivative of
  // the pinhole projection u' = f X / (Z - m) with X = d sin(a), Z = d cos(a),
  // tan(a) = u/f, so the residual against that projection is O(m^2).
  const double f = 500.0, u = 100.0, d = 20.0;
  const double a = std::atan2(u, f);
  const double X = d * std::sin(a), Z = d * std::cos(a);
  const double curvature = f * X / (Z * Z * Z);  // second derivative at m=0
  for (const double m : {1.0, 0.5, 0.1, 0.01, 0.001}) {
    const double pinhole = f * X / (Z - m);
    const double lin = u + linear_translation_coeff(u, f, d) * m;
    CHECK(std::abs(pinhole - lin) / (m * m) < 1.2 * curvature);
  }

  // Against the closed form itself the shift increments agree to first order
  // at small angles; the parameterizations drift apart at (u/f)^3.
  const double u_small = 10.0;
  const double rest =
      exact_translation_shift(u_small, d, ego(0.0, 0.0, 0.1), f);
  for (const double m : {1.0, 0.5, 0.1, 0.01, 0.001}) {
    const EgoMotionSample e = ego(m / 0.1, 0.0, 0.1);
    const double inc =
        exact_translation_shift(u_small, d, e, f) - rest;
    const double lin_inc = linear_translation_coeff(u_small, f, d) * m;
    CHECK(std::abs(inc - lin_inc) / (m * m) < 1.0);
  }
}

TEST_CASE("forward motion pushes off-center targets outward monotonically") {
  const double f = 500.0, u = 80.0, d = 20.0;
  double prev = -1e9;
  for (double speed = 0.0; speed <= 30.0; speed += 2.5) {
    const double s = exact_translation_shift(u, d, ego(speed, 0.0, 0.1), f);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("identity motion preserves sign") {
  const EgoMotionSample still = ego(0.0, 0.0, 0.1);
  for (double u = -450.0; u <= 450.0; u += 37.0) {
    if (u != 0.0) {
      CHECK(std::signbit(exact_translation_shift(u, 12.0, still, 500.0)) ==
            std::signbit(u));
      CHECK(exact_rotation_shift(u, still, 500.0) == u);
    }
  }
  CHECK(exact_translation_shift(0.0, 12.0, still, 500.0) == 0.0);
  CHECK(exact_rotation_shift(0.0, still, 500.0) == 0.0);
}

TEST_CASE("centered coordinate conversions") {
  const CameraModel cam{700.0, 621.0, 187.0, 1242, 375};
  const CenteredPoint c = to_centered({621.0, 187.0}, cam);
  CHECK(c.u == 0.0);
  CHECK(c.v == 0.0);
  const CenteredPoint o = to_centered({0.0, 0.0}, cam);
  CHECK(o.u == -621.0);
  CHECK(o.v == -187.0);

  // Exact round trip on quarter-pixel coordinates (the representable lattice
  // real pixel data lives on), and within rounding for arbitrary reals.
  RandomStream rng(99);
  for (int i = 0; i < 1000; ++i) {
    const PixelPoint p{std::floor(rng.uniform(0.0, 4.0 * 1242.0)) / 4.0,
                       std::floor(rng.uniform(0.0, 4.0 * 375.0)) / 4.0};
    const PixelPoint back = from_centered(to_centered(p, cam), cam);
    CHECK(back.x == p.x);
    CHECK(back.y == p.y);
  }
  for (int i = 0; i < 1000; ++i) {
    const PixelPoint p{rng.uniform(0.0, 1242.0), rng.uniform(0.0, 375.0)};
    const PixelPoint back = from_centered(to_centered(p, cam), cam);
    CHECK_THAT(back.x, Catch::Matchers::WithinAbs(p.x, 1e-9));
    CHECK_THAT(back.y, Catch::Matchers::WithinAbs(p.y, 1e-9));
  }
}

TEST_CASE("camera validation") {
  CHECK_THROWS_AS((CameraModel{-1.0, 320.0, 240.0, 640, 480}.validate()),
                  GeometryError);
  CHECK_THROWS_AS((CameraModel{500.0, 700.0, 240.0, 640, 480}.validate()),
                  GeometryError);
  CHECK_NOTHROW((CameraModel{500.0, 320.0, 240.0, 640, 480}.validate()));
}
