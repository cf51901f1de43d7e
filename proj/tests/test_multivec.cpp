#include <doctest.h>

#include <cmath>

#include "heis/multivec.hpp"
#include "helpers.hpp"

using namespace heis;

namespace {

// Independent Gram-determinant oracle for inner products of simple p-vectors.
double gram_det(const std::vector<Eigen::VectorXd>& vs, const std::vector<Eigen::VectorXd>& ws) {
  Eigen::MatrixXd g(vs.size(), ws.size());
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < ws.size(); ++j) g(i, j) = vs[i].dot(ws[j]);
  return g.determinant();
}

PVector wedge_all(int n, const std::vector<Eigen::VectorXd>& vs) {
  PVector acc = PVector::from_vector(n, vs[0]);
  for (std::size_t i = 1; i < vs.size(); ++i) acc = wedge(acc, PVector::from_vector(n, vs[i]));
  return acc;
}

}  // namespace

TEST_CASE("wedge basics") {
  PVector x1 = PVector::basis(1, {1}), x2 = PVector::basis(1, {2}), t = PVector::basis(1, {3});

  CHECK(norm(wedge(x1, x1)) == 0.0);

  PVector x12 = wedge(x1, x2);
  CHECK(x12.p == 2);
  CHECK(inner(x12, PVector::basis(1, {1, 2})) == doctest::Approx(1.0));

  // (X_1 + a T) ^ (X_2 + b T) = X_1^X_2 + b X_1^T - a X_2^T
  double a = 0.3, b = -1.7;
  PVector lhs = wedge(x1 + t * a, x2 + t * b);
  PVector rhs = wedge(x1, x2) + wedge(x1, t) * b - wedge(x2, t) * a;
  CHECK(norm(lhs - rhs) < 1e-15);

  CHECK_THROWS_AS(wedge(x12, wedge(x12, x12)), DimensionError);  // degree overflow in H^1
}

TEST_CASE("wedge antisymmetry and dependent factors vanish") {
  test::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + trial % 2;
    Eigen::VectorXd u = rng.vector(2 * n + 1, -2, 2), v = rng.vector(2 * n + 1, -2, 2);
    PVector pu = PVector::from_vector(n, u), pv = PVector::from_vector(n, v);
    CHECK(norm(wedge(pu, pv) + wedge(pv, pu)) < 1e-14);
    double c = rng.uniform(-2, 2);
    CHECK(norm(wedge(pu, pu * c)) < 1e-10 * std::max(1.0, u.squaredNorm()));
  }
}

TEST_CASE("inner product on the subset basis") {
  PVector x1z = PVector::basis(1, {1, 3});
  PVector x12 = PVector::basis(1, {1, 2});
  CHECK(inner(x1z, x1z) == doctest::Approx(1.0));
  CHECK(inner(x12, x1z) == doctest::Approx(0.0));
  CHECK_THROWS_AS(inner(x12, PVector::basis(1, {1})), DimensionError);
}

TEST_CASE("inner product matches the Gram determinant oracle") {
  test::Rng rng(32);
  for (int n = 1; n <= 2; ++n) {
    for (int p = 1; p <= std::min(4, 2 * n + 1); ++p) {
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::VectorXd> vs, ws;
        for (int i = 0; i < p; ++i) {
          vs.push_back(rng.vector(2 * n + 1, -1.5, 1.5));
          ws.push_back(rng.vector(2 * n + 1, -1.5, 1.5));
        }
        double got = inner(wedge_all(n, vs), wedge_all(n, ws));
        CHECK(got == doctest::Approx(gram_det(vs, ws)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("simple vector norm equals sqrt of the Gram determinant") {
  test::Rng rng(33);
  for (int p = 1; p <= 4; ++p) {
    for (int trial = 0; trial < 10; ++trial) {
      int n = 2;
      std::vector<Eigen::VectorXd> vs;
      for (int i = 0; i < p; ++i) vs.push_back(rng.vector(5, -1.5, 1.5));
      double got = norm(wedge_all(n, vs));
      CHECK(got == doctest::Approx(std::sqrt(std::max(0.0, gram_det(vs, vs)))).epsilon(1e-10));
    }
  }
}

TEST_CASE("vertical projection") {
  PVector x12 = PVector::basis(1, {1, 2});
  PVector x1t = PVector::basis(1, {1, 3});
  PVector x2t = PVector::basis(1, {2, 3});

  CHECK(norm(vertical_project(x12)) == 0.0);
  CHECK(norm(vertical_project(x1t) - x1t) == 0.0);

  double a = 1.1, b = -0.6;
  PVector mixed = x12 + x1t * b - x2t * a;
  PVector vp = vertical_project(mixed);
  CHECK(norm(vp - (x1t * b - x2t * a)) == 0.0);
  CHECK(norm(vp) == doctest::Approx(std::sqrt(a * a + b * b)));

  // idempotent, orthogonal split, Pythagoras
  test::Rng rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 2;
    int p = 1 + trial % (2 * n + 1);
    PVector v(n, p, rng.vector(static_cast<int>(binomial(2 * n + 1, p)), -2, 2));
    PVector w(n, p, rng.vector(static_cast<int>(binomial(2 * n + 1, p)), -2, 2));
    PVector pv = vertical_project(v);
    CHECK(norm(vertical_project(pv) - pv) == 0.0);
    CHECK(inner(pv, w - vertical_project(w)) == doctest::Approx(0.0).epsilon(1e-12));
    double total = inner(v, v);
    double split = inner(pv, pv) + inner(v - pv, v - pv);
    CHECK(split == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("is_vertical and simple_factors") {
  PVector x1z = PVector::basis(1, {1, 3});
  CHECK(is_vertical(x1z));
  CHECK_FALSE(is_vertical(PVector::basis(1, {1, 2})));

  Eigen::MatrixXd l = simple_factors(x1z);
  CHECK(l.cols() == 2);
  // L(X_1 ^ Z) = span{e_1, e_3}
  Eigen::MatrixXd proj = l * l.transpose();
  CHECK(proj(0, 0) == doctest::Approx(1.0));
  CHECK(proj(2, 2) == doctest::Approx(1.0));
  CHECK(proj(1, 1) == doctest::Approx(0.0).epsilon(1e-12));

  // X_1^X_2^Z + X_3^X_4^Z is vertical but not simple in H^2
  PVector ns = PVector::basis(2, {1, 2, 5}) + PVector::basis(2, {3, 4, 5});
  CHECK(is_vertical(ns));
  CHECK_THROWS_AS(simple_factors(ns), InvariantError);

  // wedges of independent 1-vectors are simple
  test::Rng rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2, p = 1 + trial % 4;
    std::vector<Eigen::VectorXd> vs;
    for (int i = 0; i < p; ++i) vs.push_back(rng.vector(5, -1.5, 1.5));
    PVector tau = wedge_all(n, vs);
    Eigen::MatrixXd basis = simple_factors(tau);
    CHECK(basis.cols() == p);
    // every factor lies in the span
    for (const auto& v : vs) {
      Eigen::VectorXd res = v - basis * (basis.transpose() * v);
      CHECK(res.norm() < 1e-9 * v.norm());
    }
  }
}
