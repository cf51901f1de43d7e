#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "heis/common.hpp"

namespace heis {

// Basis bookkeeping for degree-p exterior vectors over the orthonormal frame
// (X_1, ..., X_2n, Z) at a point. Basis elements are the lexicographically
// ordered p-subsets of {1, ..., 2n+1}; index 2n+1 is the Z direction, so the
// horizontal/vertical split of Eq.-style decompositions is a coefficient mask.
struct SubsetBasis {
  int dim_space;              // 2n+1
  int degree;                 // p
  std::vector<std::uint16_t> masks;  // bit j-1 set <=> j in subset; lex order
  std::vector<int> rank;             // mask -> basis index, -1 if absent

  int size() const { return static_cast<int>(masks.size()); }
};

const SubsetBasis& subset_basis(int dim_space, int degree);

// Sign of merging two disjoint sorted subsets, +-1; 0 if they intersect.
int merge_sign(std::uint16_t a, std::uint16_t b);

struct PVector {
  int n;  // group parameter
  int p;  // degree
  Eigen::VectorXd c;

  PVector(int n_, int p_);
  PVector(int n_, int p_, Eigen::VectorXd coeffs);

  int space_dim() const { return 2 * n + 1; }

  // Degree-1 vector from frame coefficients.
  static PVector from_vector(int n, const Eigen::VectorXd& coeffs);
  // Basis p-vector for 1-based frame indices (Z is index 2n+1).
  static PVector basis(int n, const std::vector<int>& indices);

  PVector operator+(const PVector& o) const;
  PVector operator-(const PVector& o) const;
  PVector operator*(double s) const;
};

PVector wedge(const PVector& a, const PVector& b);
double inner(const PVector& a, const PVector& b);
double norm(const PVector& a);
PVector vertical_project(const PVector& a);

bool is_vertical(const PVector& a, double tol = 1e-12);

// Orthonormal basis (columns) of the subspace L(tau) = {v : v ^ tau = 0}
// associated to a simple p-vector; throws InvariantError if tau is not
// simple (kernel dimension != p).
Eigen::MatrixXd simple_factors(const PVector& tau, double tol = 1e-9);

}  // namespace heis
