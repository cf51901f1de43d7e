#include <doctest.h>

#include <cmath>

#include "heis/surface.hpp"
#include "helpers.hpp"

using namespace heis;

namespace {

ParamSurface paraboloid_h1() {
  return ParamSurface::from_strings(1, Box({-1, -1}, {1, 1}), {"u1", "u2", "(u1^2+u2^2)/2"});
}

ParamSurface plane_h1(double a1, double a2, double b, double c) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  return ParamSurface::from_strings(
      1, Box({-1, -1}, {1, 1}),
      {num(a1) + "*u1", num(a2) + "*u2", num(b) + "*u1 + " + num(c) + "*u2"});
}

}  // namespace

TEST_CASE("pushforward partials: paraboloid in H^1") {
  ParamSurface s = paraboloid_h1();
  auto parts = pushforward_partials(s, {1.0, 0.0});
  REQUIRE(parts.size() == 2);
  // Phi_u1 = X_1 + (u1+u2) T, Phi_u2 = X_2 + (u2-u1) T at (1, 0)
  CHECK(parts[0].c.isApprox(Eigen::Vector3d(1, 0, 1), 1e-14));
  CHECK(parts[1].c.isApprox(Eigen::Vector3d(0, 1, -1), 1e-14));
}

TEST_CASE("pushforward partials: plane in H^1") {
  double a1 = 0.8, a2 = -1.3, b = 0.4, c = 2.0;
  ParamSurface s = plane_h1(a1, a2, b, c);
  test::Rng rng(51);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> u = rng.in_box(s.domain());
    auto parts = pushforward_partials(s, u);
    Eigen::Vector3d e1(a1, 0, a1 * a2 * u[1] + b);
    Eigen::Vector3d e2(0, a2, c - a1 * a2 * u[0]);
    CHECK((parts[0].c - e1).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((parts[1].c - e2).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("pushforward partials: 3-paraboloid in H^2") {
  ParamSurface s = ParamSurface::from_strings(2, Box({-1, -1, -1}, {1, 1, 1}),
                                              {"u1", "u2", "u3", "0", "(u1^2+u2^2+u3^2)/2"});
  test::Rng rng(52);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> u = rng.in_box(s.domain());
    auto parts = pushforward_partials(s, u);
    Eigen::VectorXd e1(5), e2(5), e3(5);
    e1 << 1, 0, 0, 0, u[0] + u[2];
    e2 << 0, 1, 0, 0, u[1];
    e3 << 0, 0, 1, 0, u[2] - u[0];
    CHECK((parts[0].c - e1).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((parts[1].c - e2).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((parts[2].c - e3).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("tangent p-vector") {
  ParamSurface s = paraboloid_h1();
  PVector t0 = tangent_pvector(s, {0.0, 0.0});
  CHECK(norm(t0 - PVector::basis(1, {1, 2})) < 1e-14);

  // line F(a t, 0, b t): tangent a X_1 + b T
  ParamSurface line = ParamSurface::from_strings(1, Box({-1}, {1}), {"0.5*t", "0", "2*t"});
  PVector lt = tangent_pvector(line, {0.3});
  CHECK(lt.c.isApprox(Eigen::Vector3d(0.5, 0, 2.0), 1e-14));

  test::Rng rng(53);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> u = rng.in_box(s.domain());
    double expected = std::sqrt(1.0 + 2 * u[0] * u[0] + 2 * u[1] * u[1]);
    CHECK(norm(tangent_pvector(s, u)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("vertical tangent") {
  ParamSurface s = paraboloid_h1();
  test::Rng rng(54);
  for (int i = 0; i < 25; ++i) {
    std::vector<double> u = rng.in_box(s.domain());
    double r2 = 2 * u[0] * u[0] + 2 * u[1] * u[1];
    double expected = std::sqrt(r2) / std::sqrt(1.0 + r2);
    PVector vt = vertical_tangent(s, u);
    CHECK(norm(vt) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(norm(vt) <= 1.0 + 1e-12);
  }
  CHECK(norm(vertical_tangent(s, {0.0, 0.0})) == doctest::Approx(0.0));

  ParamSurface vline = ParamSurface::from_strings(1, Box({-1}, {1}), {"0", "0", "0.7*t"});
  PVector vt = vertical_tangent(vline, {0.2});
  CHECK(norm(vt) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(vt.c[2]) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("characteristic points") {
  ParamSurface par = paraboloid_h1();
  CHECK(is_characteristic(par, {0.0, 0.0}));
  CHECK_FALSE(is_characteristic(par, {0.5, 0.25}));

  ParamSurface plane = plane_h1(1, 1, 0, 0);  // z = 0
  CHECK(is_characteristic(plane, {0.0, 0.0}));
  CHECK_FALSE(is_characteristic(plane, {0.5, 0.0}));

  ParamSurface vline = ParamSurface::from_strings(1, Box({-1}, {1}), {"0", "0", "t"});
  CHECK_FALSE(is_characteristic(vline, {0.0}));
  CHECK_THROWS_AS(is_characteristic(par, {0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("symbolic partials match central differences") {
  ParamSurface s = ParamSurface::from_strings(
      1, Box({0.1, 0.1}, {0.9, 0.9}), {"sin(u1)*u2", "exp(u1-u2)", "sqrt(1+u1^2+u2^2)"});
  test::Rng rng(55);
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> u = rng.in_box(s.domain(), 0.05);
    Eigen::MatrixXd d = s.coordinate_partials(u);
    for (int j = 0; j < 2; ++j) {
      std::vector<double> up = u, um = u;
      up[static_cast<std::size_t>(j)] += h;
      um[static_cast<std::size_t>(j)] -= h;
      Eigen::VectorXd fd = (s.point(up) - s.point(um)) / (2 * h);
      CHECK((d.col(j) - fd).cwiseAbs().maxCoeff() <
            1e-6 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("parameter permutation flips the tangent sign only") {
  ParamSurface s = paraboloid_h1();
  ParamSurface swapped =
      ParamSurface::from_strings(1, Box({-1, -1}, {1, 1}), {"u2", "u1", "(u1^2+u2^2)/2"});
  test::Rng rng(56);
  for (int i = 0; i < 15; ++i) {
    std::vector<double> u = rng.in_box(s.domain());
    PVector a = tangent_pvector(s, u);
    PVector b = tangent_pvector(swapped, {u[1], u[0]});
    CHECK(norm(a + b) < 1e-12);  // swap of u1,u2 reverses orientation
  }
}

TEST_CASE("surface validation") {
  // rank-deficient parametrization is rejected
  CHECK_THROWS_AS(
      ParamSurface::from_strings(1, Box({-1, -1}, {1, 1}), {"u1", "u1", "0"}), DomainError);
  // p > 2n is rejected
  CHECK_THROWS_AS(
      ParamSurface::from_strings(1, Box({0, 0, 0}, {1, 1, 1}), {"u1", "u2", "u3"}),
      DimensionError);
  // component count mismatch
  CHECK_THROWS_AS(ParamSurface::from_strings(1, Box({0}, {1}), {"u1", "0"}), DimensionError);
  // out-of-domain evaluation
  ParamSurface s = paraboloid_h1();
  CHECK_THROWS_AS(tangent_pvector(s, {2.0, 0.0}), DomainError);
  CHECK_THROWS_AS(pushforward_partials(s, {0.0}), DimensionError);
}

TEST_CASE("scalar maps") {
  ScalarMap f = ScalarMap::from_strings(1, {"x3"});
  GroupPoint x(1, Eigen::Vector3d(1, 1, 0));
  CHECK(f.eval(x)(0) == doctest::Approx(0.0));
  Eigen::MatrixXd jac = f.coordinate_jacobian(x);
  CHECK(jac(0, 0) == doctest::Approx(0.0));
  CHECK(jac(0, 2) == doctest::Approx(1.0));

  CHECK_THROWS_AS(ScalarMap::from_strings(1, {"x1", "x2", "x3"}), DimensionError);
  CHECK_THROWS_AS(ScalarMap::from_strings(1, {"x4"}), SyntaxError);
}
