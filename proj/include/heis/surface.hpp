#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heis/common.hpp"
#include "heis/expr.hpp"
#include "heis/group.hpp"
#include "heis/multivec.hpp"

namespace heis {

// Parametrized p-dimensional C^1 submanifold Phi = F o phi : U -> H^n with
// phi given componentwise by expressions in u_1..u_p over an axis-aligned
// domain box. Partials are derived symbolically at construction, and the
// embedding condition (full-rank coordinate partials) is sample-checked.
class ParamSurface {
 public:
  ParamSurface(int n, Box domain, std::vector<Expr> components);

  static ParamSurface from_strings(int n, Box domain, const std::vector<std::string>& components);

  int n() const { return n_; }
  int p() const { return domain_.dim(); }
  int space_dim() const { return 2 * n_ + 1; }
  const Box& domain() const { return domain_; }
  const std::vector<Expr>& components() const { return comp_; }
  const Expr& partial(int component, int var) const {
    return partials_[static_cast<std::size_t>(component)][static_cast<std::size_t>(var)];
  }

  GroupPoint at(const std::vector<double>& u) const;
  Eigen::VectorXd point(const std::vector<double>& u) const;
  // Columns are the coordinate partial vectors d phi / d u_i.
  Eigen::MatrixXd coordinate_partials(const std::vector<double>& u) const;

  void require_inside(const std::vector<double>& u) const;

 private:
  int n_;
  Box domain_;
  std::vector<Expr> comp_;
  std::vector<std::vector<Expr>> partials_;
};

// Frame components of the pushforward partials Phi_{u_i}(u), one degree-1
// PVector per parameter direction.
std::vector<PVector> pushforward_partials(const ParamSurface& s, const std::vector<double>& u);

// Unnormalized tangent p-vector Phi_{u_1} ^ ... ^ Phi_{u_p}; its norm is the
// Riemannian area density of the parametrization.
PVector tangent_pvector(const ParamSurface& s, const std::vector<double>& u);

// Vertical projection of the unit tangent p-vector; norm lies in [0, 1].
PVector vertical_tangent(const ParamSurface& s, const std::vector<double>& u);

bool is_characteristic(const ParamSurface& s, const std::vector<double>& u, double tol = 1e-9);

// Surface parametrizing z . Phi(u), with symbolically translated components.
ParamSurface left_translate(const ParamSurface& s, const GroupPoint& z);

// C^1 map f : H^n -> R^k given componentwise in x_1..x_{2n+1}.
class ScalarMap {
 public:
  ScalarMap(int n, std::vector<Expr> components);

  static ScalarMap from_strings(int n, const std::vector<std::string>& components);

  int n() const { return n_; }
  int k() const { return static_cast<int>(comp_.size()); }
  const std::vector<Expr>& components() const { return comp_; }

  Eigen::VectorXd eval(const GroupPoint& x) const;
  // k x (2n+1) matrix of coordinate partials df/dx_j.
  Eigen::MatrixXd coordinate_jacobian(const GroupPoint& x) const;

 private:
  int n_;
  std::vector<Expr> comp_;
  std::vector<std::vector<Expr>> partials_;
};

}  // namespace heis
