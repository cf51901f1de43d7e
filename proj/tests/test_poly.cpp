#include <doctest.h>

#include "heis/poly.hpp"
#include "helpers.hpp"

using namespace heis;

TEST_CASE("polynomial arithmetic") {
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  Poly lhs = (x + y) * (x - y);
  Poly rhs = x * x - y * y;
  CHECK(lhs == rhs);

  Poly q = x * x * y + y * (3.0);
  Poly dq = q.partial(0);
  CHECK(dq == x * y * 2.0);
  CHECK(q.partial(1) == x * x + Poly::constant(2, 3.0));

  Eigen::Vector2d at(2.0, -1.5);
  CHECK(q.eval(at) == doctest::Approx(4.0 * -1.5 + 3.0 * -1.5));
}

TEST_CASE("standard frame evaluates like frame_at") {
  test::Rng rng(21);
  for (int n = 1; n <= 3; ++n) {
    GroupPoint p = rng.point(n);
    Eigen::MatrixXd m = frame_at(p);
    for (int j = 1; j <= 2 * n + 1; ++j) {
      PolyVectorField f = standard_frame_field(n, j);
      for (int q = 0; q < 2 * n + 1; ++q)
        CHECK(f.comp[static_cast<std::size_t>(q)].eval(p.x) == doctest::Approx(m(q, j - 1)));
    }
  }
}

TEST_CASE("bracket relations of the standard frame") {
  for (int n = 1; n <= 4; ++n) {
    const int d = 2 * n + 1;
    PolyVectorField z = standard_frame_field(n, d);
    PolyVectorField two_z(d);
    for (int q = 0; q < d; ++q)
      two_z.comp[static_cast<std::size_t>(q)] = z.comp[static_cast<std::size_t>(q)] * 2.0;

    for (int i = 1; i <= 2 * n; ++i) {
      for (int j = 1; j <= 2 * n; ++j) {
        PolyVectorField br = lie_bracket(standard_frame_field(n, i), standard_frame_field(n, j));
        if (j == i + n) {
          CHECK(br == two_z);
        } else if (i == j + n) {
          PolyVectorField neg(d);
          for (int q = 0; q < d; ++q)
            neg.comp[static_cast<std::size_t>(q)] = two_z.comp[static_cast<std::size_t>(q)] * (-1.0);
          CHECK(br == neg);
        } else {
          CHECK(br.is_zero());
        }
      }
      CHECK(lie_bracket(standard_frame_field(n, i), z).is_zero());
    }
  }
}

TEST_CASE("bracket antisymmetry and [V, V] = 0") {
  // small random polynomial fields with integer-ish coefficients
  test::Rng rng(22);
  const int nv = 3;
  auto random_field = [&rng]() {
    PolyVectorField f(nv);
    for (int c = 0; c < nv; ++c) {
      Poly p(nv);
      for (int v = 0; v < nv; ++v) {
        double coeff = std::floor(rng.uniform(-3.0, 4.0));
        p = p + Poly::variable(nv, v) * coeff;
      }
      p = p + Poly::constant(nv, std::floor(rng.uniform(-3.0, 4.0)));
      f.comp[static_cast<std::size_t>(c)] = p;
    }
    return f;
  };
  for (int trial = 0; trial < 20; ++trial) {
    PolyVectorField v = random_field(), w = random_field();
    CHECK(lie_bracket(v, v).is_zero());
    PolyVectorField vw = lie_bracket(v, w), wv = lie_bracket(w, v);
    for (int c = 0; c < nv; ++c) {
      CHECK(vw.comp[static_cast<std::size_t>(c)] ==
            wv.comp[static_cast<std::size_t>(c)] * (-1.0));
    }
  }
}
