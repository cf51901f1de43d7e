#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "heis/common.hpp"

namespace heis {

/// A point of H^n in standard coordinates x = (x~, x_{2n+1}) in R^{2n+1}.
struct GroupPoint {
  int n;
  Eigen::VectorXd x;

  GroupPoint(int n_, Eigen::VectorXd coords);
  static GroupPoint zero(int n);

  int dim() const { return 2 * n + 1; }
  double vertical() const { return x[2 * n]; }
  Eigen::VectorXd horizontal() const { return x.head(2 * n); }
};

GroupPoint group_mul(const GroupPoint& a, const GroupPoint& b);
GroupPoint group_inv(const GroupPoint& a);
GroupPoint dilate(double r, const GroupPoint& a);

// Columns are X~_1(x), ..., X~_2n(x), Z~(x); unit lower-triangular, det 1.
Eigen::MatrixXd frame_at(const GroupPoint& x);

// Coefficients h with v = sum_j h_j X~_j(x) + h_{2n+1} Z~(x).
Eigen::VectorXd coords_to_frame(const GroupPoint& x, const Eigen::VectorXd& v);

// Homogeneous distance: Koranyi gauge, maximum distance, or a user radial
// profile N(s, t) with s = |x~| and t = x_{2n+1}. Radial profiles are
// sample-checked for homogeneity and positivity at construction.
class DistanceSpec {
 public:
  enum class Kind { Koranyi, MaxDist, RadialProfile };

  static DistanceSpec koranyi();
  static DistanceSpec max_dist();
  static DistanceSpec radial_profile(std::function<double(double, double)> profile,
                                     std::string label = "profile");

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  // rho(0, x).
  double from_origin(const GroupPoint& x) const;

  // Bounding half-widths: B_1 is contained in {|x~| <= horizontal_bound,
  // |x_{2n+1}| <= vertical_bound}.
  double horizontal_bound() const { return rh_; }
  double vertical_bound() const { return rv_; }

 private:
  DistanceSpec(Kind k, std::function<double(double, double)> profile, std::string label);
  void validate_profile();

  Kind kind_;
  std::function<double(double, double)> profile_;
  std::string label_;
  double rh_ = 1.0;
  double rv_ = 1.0;
};

double distance(const DistanceSpec& spec, const GroupPoint& x, const GroupPoint& y);

}  // namespace heis
