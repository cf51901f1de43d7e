#pragma once

#include <functional>
#include <utility>

#include "heis/expr.hpp"
#include "heis/integrate.hpp"
#include "heis/measure.hpp"
#include "heis/surface.hpp"

namespace heis {

// Frame-derivative matrix with entries X~_j f^i(x) for j <= 2n and Z~ f^i in
// the last column; the differential of f in the orthonormal frame.
Eigen::MatrixXd frame_jacobian_matrix(const ScalarMap& f, const GroupPoint& x);

// sqrt of the sum of squared k x k minors over the horizontal columns
// (computed as a Gram determinant via Cauchy-Binet).
double horizontal_jacobian(const ScalarMap& f, const GroupPoint& x);

// Same over all 2n+1 frame columns.
double riemannian_jacobian(const ScalarMap& f, const GroupPoint& x);

// (|tau_{Sigma,V}(x)|, J_H f(x) / J_g f(x)) at x = chart(u); the two agree at
// every point of a level set, with 0/0 read as 0 at characteristic points.
std::pair<double, double> ratio_identity_check(const ScalarMap& f, const ParamSurface& chart,
                                               const std::vector<double>& u);

// Codimension-one horizontal normal nu_H with components
// nu_H^j = (-1)^j tau_{Sigma,V}^j; |nu_H| = |tau_{Sigma,V}|.
PVector horizontal_normal(const ParamSurface& s, const std::vector<double>& u);

// Level sets f^{-1}(t) n A, parametrized per level by user-supplied charts.
class LevelSetFamily {
 public:
  using ChartFn = std::function<ParamSurface(const Eigen::VectorXd& t)>;

  LevelSetFamily(ScalarMap f, ChartFn chart, Box region, Box levels);

  const ScalarMap& map() const { return f_; }
  const Box& region() const { return region_; }
  const Box& levels() const { return levels_; }
  ParamSurface chart(const Eigen::VectorXd& t) const;

 private:
  ScalarMap f_;
  ChartFn chart_fn_;
  Box region_;
  Box levels_;
};

// Convenience constructor for scalar (k = 1) families whose chart components
// are expressions in u1..up and the level variable t.
LevelSetFamily make_level_family(const ScalarMap& f,
                                 const std::vector<std::string>& chart_components,
                                 Box chart_domain, Box region, double t_lo, double t_hi);

// LHS = integral over A of u J_H f dx; RHS = integral over T of the
// spherical measures of the level sets, weighted by u. Both reported with
// error estimates.
std::pair<MeasureReport, MeasureReport> coarea_check(const LevelSetFamily& family,
                                                     const Expr& weight,
                                                     const IntegrationConfig& cfg);

// Riemannian sanity variant: J_g f on the left, vol_p of the level sets on
// the right; independent of any Heisenberg structure.
std::pair<MeasureReport, MeasureReport> riemannian_coarea_check(const LevelSetFamily& family,
                                                                const Expr& weight,
                                                                const IntegrationConfig& cfg);

}  // namespace heis
