#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "minarea/calibration.hpp"
#include "minarea/surfaces.hpp"

using namespace minarea;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// independent root of c^2 cosh^2(z/c) + z^2 = 1, plain bisection
double z1_oracle(double c) {
  auto f = [c](double z) {
    return c * c * std::cosh(z / c) * std::cosh(z / c) + z * z - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// independent catenoid area: adaptive Simpson quadrature of the integrand
// 2 pi c cosh^2(z/c) over [-z1, z1]
double simpson(const std::function<double(double)>& f, double a, double b, int depth,
               double fa, double fm, double fb, double whole) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 1e-14 * std::abs(left + right))
    return left + right;
  return simpson(f, a, m, depth - 1, fa, flm, fm, left) +
         simpson(f, m, b, depth - 1, fm, frm, fb, right);
}

double catenoid_area_oracle(double c) {
  const double z1 = z1_oracle(c);
  auto f = [c](double z) {
    const double ch = std::cosh(z / c);
    return 2.0 * M_PI * c * ch * ch;
  };
  const double m = 0.0;
  const double whole = (2.0 * z1) / 6.0 * (f(-z1) + 4.0 * f(m) + f(z1));
  return simpson(f, -z1, z1, 40, f(-z1), f(m), f(z1), whole);
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
  CHECK(unit_ball_volume(4) == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
}

TEST_CASE("flat disk areas") {
  const AnalyticSurface d06 = AnalyticSurface::equality_disk(vec3(0, 0, 0.6), 2);
  CHECK(d06.area() == doctest::Approx(M_PI * 0.64).epsilon(1e-15));
  CHECK(d06.plane_distance() == doctest::Approx(0.6).epsilon(1e-15));

  const AnalyticSurface d0 = AnalyticSurface::equality_disk(vec3(0, 0, 0), 2);
  CHECK(d0.area() == doctest::Approx(M_PI).epsilon(1e-15));

  Eigen::VectorXd y4 = Eigen::VectorXd::Zero(4);
  y4[3] = 0.3;
  const AnalyticSurface d3 = AnalyticSurface::equality_disk(y4, 3);
  CHECK(d3.area() ==
        doctest::Approx(unit_ball_volume(3) * std::pow(0.91, 1.5)).epsilon(1e-14));
}

TEST_CASE("catenoid height and area against an independent oracle") {
  for (double c : {0.3, 0.5, 0.9}) {
    const AnalyticSurface cat = AnalyticSurface::catenoid(c);
    CHECK(cat.catenoid_params()->z1 == doctest::Approx(z1_oracle(c)).epsilon(1e-14));
    CHECK(cat.area() == doctest::Approx(catenoid_area_oracle(c)).epsilon(1e-13));
  }
  // frozen independently computed values, c = 0.5 and c = 0.9
  const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
  CHECK(cat.catenoid_params()->z1 ==
        doctest::Approx(0.55045374436805059).epsilon(1e-15));
  CHECK(cat.area() == doctest::Approx(5.2364208856174915).epsilon(1e-15));
  const AnalyticSurface cat9 = AnalyticSurface::catenoid(0.9);
  CHECK(cat9.catenoid_params()->z1 ==
        doctest::Approx(0.30526320700163504).epsilon(1e-15));
  CHECK(cat9.area() == doctest::Approx(3.5879197209286609).epsilon(1e-15));

  CHECK_THROWS_AS(AnalyticSurface::catenoid(1.0), std::invalid_argument);
  CHECK_THROWS_AS(AnalyticSurface::catenoid(0.0), std::invalid_argument);
  CHECK_THROWS_AS(AnalyticSurface::catenoid(-0.5), std::invalid_argument);
}

TEST_CASE("clifford cone volume") {
  const AnalyticSurface cone = AnalyticSurface::clifford_cone();
  CHECK(cone.area() == doctest::Approx(2.0 * M_PI * M_PI / 3.0).epsilon(1e-15));
  CHECK(cone.k() == 3);
  CHECK(cone.n() == 4);
  CHECK(cone.through_point().norm() == 0.0);
}

TEST_CASE("surface boundaries lie on the unit sphere") {
  const std::vector<AnalyticSurface> catalog = {
      AnalyticSurface::equality_disk(vec3(0, 0, 0.6), 2),
      AnalyticSurface::equality_disk(
          [] {
            Eigen::VectorXd y(4);
            y << 0, 0.3, 0, 0.4;
            return y;
          }(),
          3),
      AnalyticSurface::catenoid(0.5),
      AnalyticSurface::clifford_cone()};
  for (const auto& surface : catalog) {
    double worst = 0;
    for (const auto& p : surface.boundary_points(400))
      worst = std::max(worst, std::abs(p.norm() - 1.0));
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("quadrature mass converges to the analytic area") {
  // polar chart integrates the disk exactly
  {
    const AnalyticSurface disk = AnalyticSurface::equality_disk(vec3(0, 0, 0.6), 2);
    const auto samples = disk.sample(8, 0.0);
    double mass = 0;
    for (const auto& s : samples) mass += s.weight;
    CHECK(mass == doctest::Approx(disk.area()).epsilon(1e-12));
  }
  // catenoid midpoint grid: second order in the density
  {
    const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
    double prev_err = 0;
    for (int density : {4, 8, 16}) {
      const auto samples = cat.sample(density, 0.0);
      double mass = 0;
      for (const auto& s : samples) mass += s.weight;
      const double err = std::abs(mass - cat.area());
      if (prev_err > 0) CHECK(err <= prev_err / 2.0);
      prev_err = err;
    }
  }
  // cone: exact radial polynomial, constant in angle
  {
    const AnalyticSurface cone = AnalyticSurface::clifford_cone();
    const auto samples = cone.sample(4, 0.0);
    double mass = 0;
    for (const auto& s : samples) mass += s.weight;
    const double delta = 1e-3;  // apex neighbourhood excluded by construction
    const double expected = cone.area() * (1.0 - delta * delta * delta);
    CHECK(mass == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sampled frames span the tangent plane") {
  // catenoid waist: plane orthogonal to the through direction
  {
    const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
    const Eigen::MatrixXd fr = cat.catenoid_frame(0.0, 0.0);
    CHECK(std::abs(fr.col(0).dot(Eigen::Vector3d(1, 0, 0))) <= 1e-15);
    CHECK(std::abs(fr.col(1).dot(Eigen::Vector3d(1, 0, 0))) <= 1e-15);
    for (const auto& s : cat.sample(4, 0.0)) {
      const Eigen::MatrixXd g = s.frame.transpose() * s.frame;
      CHECK((g - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  // cone: the radial direction is tangent at every sample
  {
    const AnalyticSurface cone = AnalyticSurface::clifford_cone();
    for (const auto& s : cone.sample(2, 0.0)) {
      const Eigen::VectorXd radial = s.x / s.x.norm();
      const Eigen::VectorXd proj = s.frame * (s.frame.transpose() * radial);
      CHECK((proj - radial).norm() <= 1e-12);
    }
  }
}

TEST_CASE("catenoid parameterization has zero mean curvature") {
  const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
  const double z1 = cat.catenoid_params()->z1;
  const double h = 1e-4;  // second differences are rounding-dominated below this
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double th = (i + 0.5) * 2.0 * M_PI / 20;
      const double z = -0.9 * z1 + (j + 0.5) * 1.8 * z1 / 20;
      // fundamental forms by central differences of the chart
      const Eigen::Vector3d xu = (cat.catenoid_point(th + h, z) - cat.catenoid_point(th - h, z)) / (2 * h);
      const Eigen::Vector3d xv = (cat.catenoid_point(th, z + h) - cat.catenoid_point(th, z - h)) / (2 * h);
      const Eigen::Vector3d xuu =
          (cat.catenoid_point(th + h, z) - 2 * cat.catenoid_point(th, z) + cat.catenoid_point(th - h, z)) / (h * h);
      const Eigen::Vector3d xvv =
          (cat.catenoid_point(th, z + h) - 2 * cat.catenoid_point(th, z) + cat.catenoid_point(th, z - h)) / (h * h);
      const Eigen::Vector3d xuv = (cat.catenoid_point(th + h, z + h) - cat.catenoid_point(th + h, z - h) -
                                   cat.catenoid_point(th - h, z + h) + cat.catenoid_point(th - h, z - h)) /
                                  (4 * h * h);
      const Eigen::Vector3d nrm = xu.cross(xv).normalized();
      const double E = xu.dot(xu), F = xu.dot(xv), G = xv.dot(xv);
      const double e = nrm.dot(xuu), f = nrm.dot(xuv), g = nrm.dot(xvv);
      const double H = (e * G - 2.0 * f * F + g * E) / (2.0 * (E * G - F * F));
      worst = std::max(worst, std::abs(H));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("equality disk samples have vanishing pointwise deficit") {
  const Eigen::VectorXd y = vec3(0, 0, 0.6);
  const AnalyticSurface disk = AnalyticSurface::equality_disk(y, 2);
  const CalibrationField field(y, 2);
  double worst_def = 0, worst_res = 0;
  for (const auto& s : disk.sample(8, 0.05)) {
    const TangentFrame fr(s.frame, 1e-9);
    worst_def = std::max(worst_def, deficit(field, s.x, fr));
    const FieldDiagnostics d = field_diagnostics(field, s.x, fr);
    worst_res = std::max(worst_res, d.normal_xy_sq + d.tangential_y_sq);
  }
  CHECK(worst_def <= 1e-12);
  CHECK(worst_res <= 1e-12);
}

TEST_CASE("boundary slices") {
  // flat disk: exact circle with exact conormals
  {
    const Eigen::VectorXd y = vec3(0, 0, 0.6);
    const AnalyticSurface disk = AnalyticSurface::equality_disk(y, 2);
    const double r = 0.05;
    double mass = 0;
    for (const auto& s : disk.boundary_slice(r)) {
      mass += s.weight;
      CHECK(std::abs((s.x - y).norm() - r) <= 1e-14);
      CHECK((s.conormal + (s.x - y) / r).norm() <= 1e-13);
    }
    CHECK(mass == doctest::Approx(2.0 * M_PI * r).epsilon(1e-13));
    CHECK_THROWS_AS(disk.boundary_slice(0.9), std::invalid_argument);
  }
  // cone: the slice is the scaled link, area 2 pi^2 r^2
  {
    const AnalyticSurface cone = AnalyticSurface::clifford_cone();
    const double r = 0.25;
    double mass = 0;
    for (const auto& s : cone.boundary_slice(r)) {
      mass += s.weight;
      CHECK((s.conormal + s.x / r).norm() <= 1e-13);
    }
    CHECK(mass == doctest::Approx(2.0 * M_PI * M_PI * r * r).epsilon(1e-11));
  }
  // catenoid: extracted curve sits at distance r with in-plane conormals
  {
    const AnalyticSurface cat = AnalyticSurface::catenoid(0.5);
    const Eigen::Vector3d y(0.5, 0, 0);
    const double r = 0.02;
    double mass = 0;
    for (const auto& s : cat.boundary_slice(r)) {
      mass += s.weight;
      CHECK(std::abs((s.x - y).norm() - r) <= 1e-10);
      CHECK(std::abs(s.conormal.norm() - 1.0) <= 1e-10);
      CHECK(s.conormal.dot(y - Eigen::Vector3d(s.x)) > 0);  // points toward y
    }
    CHECK(mass == doctest::Approx(2.0 * M_PI * r).epsilon(5e-3));
    CHECK_THROWS_AS(cat.boundary_slice(0.3), std::invalid_argument);
  }
}

TEST_CASE("flat disk construction validates its inputs") {
  Eigen::MatrixXd frame(3, 2);
  frame.col(0) << 1, 0, 0;
  frame.col(1) << 0, 1, 0;
  // designated point off the plane
  CHECK_THROWS_AS(AnalyticSurface::flat_disk(vec3(0, 0, 0), frame, vec3(0, 0, 0.5)),
                  std::invalid_argument);
  // plane outside the ball
  CHECK_THROWS_AS(AnalyticSurface::flat_disk(vec3(0, 0, 1.5),
                                             [] {
                                               Eigen::MatrixXd f(3, 2);
                                               f.col(0) << 1, 0, 0;
                                               f.col(1) << 0, 1, 0;
                                               return f;
                                             }(),
                                             vec3(0, 0, 1.5)),
                  std::invalid_argument);
  // non-orthonormal frame
  Eigen::MatrixXd bad = frame;
  bad.col(1) << 0.5, 1, 0;
  CHECK_THROWS_AS(AnalyticSurface::flat_disk(vec3(0, 0, 0), bad, vec3(0, 0, 0)),
                  std::invalid_argument);
  // tilted disk through a designated interior point works
  const AnalyticSurface tilted =
      AnalyticSurface::flat_disk(vec3(0, 0, 0), frame, vec3(0.6, 0, 0));
  CHECK(tilted.area() == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(tilted.plane_distance() == 0.0);
}
