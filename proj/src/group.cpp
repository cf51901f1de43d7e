#include "heis/group.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace heis {

GroupPoint::GroupPoint(int n_, Eigen::VectorXd coords) : n(n_), x(std::move(coords)) {
  if (n < 1) throw DimensionError("GroupPoint: n must be positive");
  if (x.size() != 2 * n + 1)
    throw DimensionError("GroupPoint: expected " + std::to_string(2 * n + 1) + " coordinates, got " +
                         std::to_string(x.size()));
  if (!x.allFinite()) throw DomainError("GroupPoint: coordinates must be finite");
}

GroupPoint GroupPoint::zero(int n) { return GroupPoint(n, Eigen::VectorXd::Zero(2 * n + 1)); }

GroupPoint group_mul(const GroupPoint& a, const GroupPoint& b) {
  if (a.n != b.n) throw DimensionError("group_mul: group parameter mismatch");
  const int n = a.n;
  Eigen::VectorXd r = a.x + b.x;
  double twist = 0.0;
  for (int k = 0; k < n; ++k) twist += a.x[k] * b.x[k + n] - a.x[k + n] * b.x[k];
  r[2 * n] = a.x[2 * n] + b.x[2 * n] + twist;
  return GroupPoint(n, std::move(r));
}

GroupPoint group_inv(const GroupPoint& a) { return GroupPoint(a.n, -a.x); }

GroupPoint dilate(double r, const GroupPoint& a) {
  if (!(r > 0.0)) throw DomainError("dilate: r must be positive");
  Eigen::VectorXd y = r * a.x;
  y[2 * a.n] = r * r * a.x[2 * a.n];
  return GroupPoint(a.n, std::move(y));
}

Eigen::MatrixXd frame_at(const GroupPoint& p) {
  const int n = p.n;
  const int d = 2 * n + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  for (int k = 0; k < n; ++k) {
    m(d - 1, k) = -p.x[k + n];
    m(d - 1, k + n) = p.x[k];
  }
  return m;
}

Eigen::VectorXd coords_to_frame(const GroupPoint& p, const Eigen::VectorXd& v) {
  const int n = p.n;
  if (v.size() != 2 * n + 1) throw DimensionError("coords_to_frame: vector length mismatch");
  Eigen::VectorXd h = v;
  double corr = 0.0;
  for (int k = 0; k < n; ++k) corr += p.x[k + n] * v[k] - p.x[k] * v[k + n];
  h[2 * n] = v[2 * n] + corr;
  return h;
}

DistanceSpec::DistanceSpec(Kind k, std::function<double(double, double)> profile, std::string label)
    : kind_(k), profile_(std::move(profile)), label_(std::move(label)) {}

DistanceSpec DistanceSpec::koranyi() {
  DistanceSpec d(Kind::Koranyi,
                 [](double s, double t) { return std::pow(s * s * s * s + 16.0 * t * t, 0.25); },
                 "koranyi");
  d.rh_ = 1.0;
  d.rv_ = 0.25;
  return d;
}

DistanceSpec DistanceSpec::max_dist() {
  DistanceSpec d(Kind::MaxDist,
                 [](double s, double t) { return std::max(s, std::sqrt(std::abs(t))); }, "max");
  d.rh_ = 1.0;
  d.rv_ = 1.0;
  return d;
}

DistanceSpec DistanceSpec::radial_profile(std::function<double(double, double)> profile,
                                          std::string label) {
  if (!profile) throw DomainError("radial_profile: empty profile");
  DistanceSpec d(Kind::RadialProfile, std::move(profile), std::move(label));
  d.validate_profile();
  return d;
}

// Sample check of the homogeneous-distance axioms the radial form can
// violate: rho(delta_r x) = r rho(x) and rho(x) = 0 iff x = 0. The triangle
// inequality is not sample-checkable and is not needed by the measure
// formulas, so it is not enforced.
void DistanceSpec::validate_profile() {
  std::mt19937_64 rng(0x5eedful);
  auto uni = [&rng](double a, double b) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  };
  const int samples = 1000;
  const double tol = 1e-9;
  double min_on_sphere = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double s = uni(0.0, 2.0);
    double t = uni(-2.0, 2.0);
    if (s == 0.0 && t == 0.0) continue;
    double v = profile_(s, t);
    if (!std::isfinite(v)) throw DomainError("radial_profile: non-finite value at sample");
    if (!(v > 0.0)) throw DomainError("radial_profile: positivity fails at a nonzero sample");
    double r = uni(0.1, 10.0);
    double hv = profile_(r * s, r * r * t);
    if (std::abs(hv - r * v) > tol * std::max(1.0, std::abs(r * v)))
      throw DomainError("radial_profile: homogeneity N(r s, r^2 t) = r N(s, t) fails at a sample");
    // Track the minimum over the d_inf unit sphere max(s, sqrt|t|) = 1 to
    // derive a bounding box for B_1.
    double scale = std::max(s, std::sqrt(std::abs(t)));
    if (scale > 0.0) {
      double on_sphere = profile_(s / scale, t / (scale * scale));
      min_on_sphere = std::min(min_on_sphere, on_sphere);
    }
  }
  if (!(profile_(0.0, 0.0) == 0.0 || std::abs(profile_(0.0, 0.0)) < 1e-15))
    throw DomainError("radial_profile: N(0,0) must be 0");
  double c = 0.9 * min_on_sphere;  // safety margin on the sampled bound
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("radial_profile: could not bound the unit ball");
  rh_ = 1.0 / c;
  rv_ = 1.0 / (c * c);
}

double DistanceSpec::from_origin(const GroupPoint& p) const {
  double s = p.horizontal().norm();
  double t = p.vertical();
  double v = profile_(s, t);
  if (!std::isfinite(v) || v < 0.0) throw DomainError("distance: profile produced a non-finite or negative value");
  return v;
}

double distance(const DistanceSpec& spec, const GroupPoint& x, const GroupPoint& y) {
  if (x.n != y.n) throw DimensionError("distance: group parameter mismatch");
  return spec.from_origin(group_mul(group_inv(x), y));
}

}  // namespace heis
