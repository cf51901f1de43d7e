#include <doctest.h>

#include <cmath>

#include "heis/group.hpp"
#include "helpers.hpp"

using namespace heis;

namespace {
Eigen::Vector3d v3(double a, double b, double c) { return Eigen::Vector3d(a, b, c); }
}  // namespace

TEST_CASE("group law in H^1") {
  GroupPoint x(1, v3(1, 0, 0)), y(1, v3(0, 1, 0));
  GroupPoint xy = group_mul(x, y);
  CHECK(xy.x.isApprox(v3(1, 1, 1), 0.0));

  // identity and inverse
  GroupPoint z(1, v3(0.3, -1.2, 0.7));
  CHECK(group_mul(z, GroupPoint::zero(1)).x.isApprox(z.x, 0.0));
  CHECK(group_mul(z, group_inv(z)).x.norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(group_inv(GroupPoint(1, v3(1, 2, 3))).x.isApprox(v3(-1, -2, -3), 0.0));
}

TEST_CASE("associativity, identity, inverse on random points") {
  test::Rng rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      GroupPoint a = rng.point(n), b = rng.point(n), c = rng.point(n);
      Eigen::VectorXd left = group_mul(group_mul(a, b), c).x;
      Eigen::VectorXd right = group_mul(a, group_mul(b, c)).x;
      CHECK((left - right).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(group_mul(a, group_inv(a)).x.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("dimension mismatch is rejected") {
  GroupPoint a = GroupPoint::zero(1), b = GroupPoint::zero(2);
  CHECK_THROWS_AS(group_mul(a, b), DimensionError);
  CHECK_THROWS_AS(distance(DistanceSpec::koranyi(), a, b), DimensionError);
  CHECK_THROWS_AS(GroupPoint(1, Eigen::VectorXd::Zero(4)), DimensionError);
}

TEST_CASE("dilations") {
  GroupPoint x(1, v3(1, 1, 1));
  CHECK(dilate(2.0, x).x.isApprox(v3(2, 2, 4), 0.0));
  CHECK(dilate(1.0, x).x.isApprox(x.x, 0.0));
  CHECK_THROWS_AS(dilate(0.0, x), DomainError);
  CHECK_THROWS_AS(dilate(-1.0, x), DomainError);

  test::Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + trial % 3;
    GroupPoint a = rng.point(n), b = rng.point(n);
    double r = rng.uniform(0.1, 5.0), s = rng.uniform(0.1, 5.0);
    // homomorphism property
    Eigen::VectorXd left = dilate(r, group_mul(a, b)).x;
    Eigen::VectorXd right = group_mul(dilate(r, a), dilate(r, b)).x;
    CHECK((left - right).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, right.cwiseAbs().maxCoeff()));
    // composition
    CHECK((dilate(r, dilate(s, a)).x - dilate(r * s, a).x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("distance examples and axioms") {
  DistanceSpec kor = DistanceSpec::koranyi();
  DistanceSpec dmax = DistanceSpec::max_dist();
  GroupPoint o = GroupPoint::zero(1);

  CHECK(distance(kor, o, GroupPoint(1, v3(1, 0, 0))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(distance(kor, o, GroupPoint(1, v3(0, 0, 1))) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(distance(dmax, o, GroupPoint(1, v3(0, 0, 4))) == doctest::Approx(2.0).epsilon(1e-14));

  test::Rng rng(9);
  for (const DistanceSpec& spec : {kor, dmax}) {
    for (int trial = 0; trial < 60; ++trial) {
      int n = 1 + trial % 2;
      GroupPoint x = rng.point(n), y = rng.point(n), z = rng.point(n);
      // left invariance
      double d1 = distance(spec, x, y);
      double d2 = distance(spec, group_mul(z, x), group_mul(z, y));
      CHECK(std::abs(d1 - d2) < 1e-12 * std::max(1.0, d1));
      // homogeneity
      double r = rng.uniform(0.05, 8.0);
      double hd = distance(spec, GroupPoint::zero(n), dilate(r, x));
      double base = distance(spec, GroupPoint::zero(n), x);
      CHECK(std::abs(hd - r * base) < 1e-12 * std::max(1.0, r * base));
      // positivity
      CHECK(base > 0.0);
    }
  }
}

TEST_CASE("radial profile distances") {
  // The Koranyi gauge written as a profile must agree with the built-in.
  DistanceSpec prof = DistanceSpec::radial_profile(
      [](double s, double t) { return std::pow(s * s * s * s + 16.0 * t * t, 0.25); });
  DistanceSpec kor = DistanceSpec::koranyi();
  test::Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    GroupPoint x = rng.point(1), y = rng.point(1);
    CHECK(distance(prof, x, y) == doctest::Approx(distance(kor, x, y)).epsilon(1e-13));
  }

  // Non-homogeneous and degenerate profiles are rejected at construction.
  CHECK_THROWS_AS(DistanceSpec::radial_profile([](double s, double t) { return s + t; }),
                  DomainError);
  CHECK_THROWS_AS(DistanceSpec::radial_profile([](double s, double) { return s; }), DomainError);
}

TEST_CASE("frame fields at a point") {
  GroupPoint o = GroupPoint::zero(1);
  CHECK(frame_at(o).isApprox(Eigen::MatrixXd::Identity(3, 3), 0.0));

  GroupPoint x(1, v3(1, 2, 0));
  Eigen::MatrixXd m = frame_at(x);
  CHECK(m.col(0).isApprox(v3(1, 0, -2), 0.0));  // X~_1 = e1 - 2 e3
  CHECK(m.col(1).isApprox(v3(0, 1, 1), 0.0));   // X~_2 = e2 + 1 e3
  CHECK(m.col(2).isApprox(v3(0, 0, 1), 0.0));   // Z~

  test::Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + trial % 3;
    CHECK(frame_at(rng.point(n)).determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("coords_to_frame") {
  GroupPoint o = GroupPoint::zero(2);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  CHECK(coords_to_frame(o, v).isApprox(v, 0.0));

  // matches the paraboloid pushforward pattern
  double u1 = 0.7, u2 = -0.4;
  GroupPoint x(1, v3(u1, u2, 0.123));
  Eigen::VectorXd h = coords_to_frame(x, v3(1, 0, u1));
  CHECK(h.isApprox(v3(1, 0, u1 + u2), 1e-15));

  // round trip: v = sum h_j frame_j
  test::Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 3;
    GroupPoint p = rng.point(n);
    Eigen::VectorXd w = rng.vector(2 * n + 1, -3.0, 3.0);
    Eigen::VectorXd back = frame_at(p) * coords_to_frame(p, w);
    CHECK((back - w).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(coords_to_frame(o, Eigen::VectorXd::Zero(3)), DimensionError);
}
