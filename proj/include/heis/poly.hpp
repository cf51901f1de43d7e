#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "heis/common.hpp"

namespace heis {

// Sparse multivariate polynomial over doubles, keyed by exponent vectors.
// Frame coefficients are degree-1 with integer coefficients, so bracket
// computations stay exact.
class Poly {
 public:
  using Monomial = std::vector<std::uint8_t>;

  explicit Poly(int nvars) : nvars_(nvars) {}

  static Poly constant(int nvars, double c);
  static Poly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, double>& terms() const { return terms_; }

  Poly& add_term(const Monomial& m, double c);

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;

  Poly partial(int var) const;
  double eval(const Eigen::VectorXd& x) const;

  bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  int nvars_;
  std::map<Monomial, double> terms_;  // zero coefficients are never stored
};

// Vector field with polynomial coefficients in coordinates x_1..x_{2n+1}.
struct PolyVectorField {
  std::vector<Poly> comp;

  explicit PolyVectorField(int nvars) : comp(nvars, Poly(nvars)) {}

  int nvars() const { return static_cast<int>(comp.size()); }
  bool is_zero() const;
  bool operator==(const PolyVectorField& o) const { return comp == o.comp; }

  // Derivation applied to a scalar polynomial: V(q) = sum_i c_i d_i q.
  Poly apply(const Poly& q) const;
};

PolyVectorField lie_bracket(const PolyVectorField& v, const PolyVectorField& w);

// Standard frame of H^n as polynomial fields; j in 1..2n gives X~_j,
// j = 2n+1 gives Z~.
PolyVectorField standard_frame_field(int n, int j);

}  // namespace heis
