#pragma once

#include <utility>

#include <Eigen/Dense>

#include "heis/group.hpp"
#include "heis/integrate.hpp"
#include "heis/multivec.hpp"
#include "heis/surface.hpp"

namespace heis {

// Left-invariant metric making (X_1, ..., X_2n, W) orthonormal, where
// W = lambda Z + sum_j a_j X_j. It restricts to the standard metric on the
// horizontal bundle; lambda = 1, a = 0 is the standard metric g itself.
class MetricSpec {
 public:
  MetricSpec(int n, double lambda, Eigen::VectorXd a);
  static MetricSpec standard(int n);

  int n() const { return n_; }
  double lambda() const { return lambda_; }
  const Eigen::VectorXd& a() const { return a_; }
  bool is_standard() const;

  // Change-of-basis matrix: column j of A holds the standard-frame
  // coefficients of the j-th tilde-frame vector; det A = lambda.
  Eigen::MatrixXd change_of_basis() const;

  // Standard-frame coefficients -> tilde-frame coefficients (A^{-1} h).
  Eigen::VectorXd to_tilde_frame(const Eigen::VectorXd& h) const;

 private:
  int n_;
  double lambda_;
  Eigen::VectorXd a_;
};

// Pushforward partials expressed in the m-orthonormal frame
// (X_1, ..., X_2n, W).
std::vector<PVector> pushforward_partials(const ParamSurface& s, const std::vector<double>& u,
                                          const MetricSpec& m);
PVector tangent_pvector(const ParamSurface& s, const std::vector<double>& u, const MetricSpec& m);
PVector vertical_tangent(const ParamSurface& s, const std::vector<double>& u, const MetricSpec& m);

// vol_p(Sigma) for the metric m: integral of the Gram-determinant area
// density over the parameter domain.
MeasureReport riemannian_volume(const ParamSurface& s, const MetricSpec& m,
                                const IntegrationConfig& cfg);

// Integral of |pi_V(Phi_{u_1} ^ ... ^ Phi_{u_p})| in the m-frame; with the
// standard metric this is the spherical-measure integrand.
MeasureReport spherical_density_integral(const ParamSurface& s, const MetricSpec& m,
                                         const IntegrationConfig& cfg);

// S^{p+1}_{H^n}(Sigma) for a homogeneous distance with constant metric
// factor. The distance itself does not enter the integrand; it is validated
// to be of constant-metric-factor kind.
MeasureReport spherical_measure(const ParamSurface& s, const DistanceSpec& spec,
                                const IntegrationConfig& cfg);

bool has_constant_metric_factor(const DistanceSpec& spec);

// Metric factor theta_p^rho(tau): Euclidean H^p measure of L(tau) n B_1,
// estimated by stratified Monte Carlo over an orthonormal parametrization of
// the associated subspace. `m` rescales the computation to the tilde metric.
MeasureReport metric_factor(const DistanceSpec& spec, const PVector& tau,
                            const IntegrationConfig& cfg);
MeasureReport metric_factor(const DistanceSpec& spec, const PVector& tau,
                            const IntegrationConfig& cfg, const MetricSpec& m);

// Low-discrepancy (Halton, randomized shifts) alternative to the MC route.
MeasureReport metric_factor_qmc(const DistanceSpec& spec, const PVector& tau,
                                const IntegrationConfig& cfg);

// Deterministic quadrature route for radial distances and the standard
// metric, reducing the slice measure to a 2-d integral in (|x~|, x_{2n+1}).
MeasureReport metric_factor_radial(const DistanceSpec& spec, const PVector& tau,
                                   const IntegrationConfig& cfg);

// vol_p(Sigma n B_{x,r}) / r^{p+1} at x = Phi(u0); the blow-up quotient of
// the density theorem. Characteristic base points and ball regions touching
// the domain boundary are flagged in the report warnings.
MeasureReport blowup_quotient(const ParamSurface& s, const std::vector<double>& u0, double r,
                              const DistanceSpec& spec, const IntegrationConfig& cfg);

// Lebesgue volume of the unit ball of the distance in standard coordinates,
// by stratified Monte Carlo.
MeasureReport ball_volume(int n, const DistanceSpec& spec, const IntegrationConfig& cfg);

// Both sides of the rescaling-invariance identity: the vertical-density
// integral normalized by the unit-ball volume, for the metric m (first) and
// the standard metric (second). The ball volumes use independent MC streams.
std::pair<MeasureReport, MeasureReport> rescaled_measure_invariance(const ParamSurface& s,
                                                                    const MetricSpec& m,
                                                                    const DistanceSpec& spec,
                                                                    const IntegrationConfig& cfg);

}  // namespace heis
