#include "heis/multivec.hpp"

#include <bit>
#include <map>
#include <mutex>

namespace heis {

namespace {

void gen_subsets(int dim_space, int degree, int start, std::uint16_t acc, int picked,
                 std::vector<std::uint16_t>& out) {
  if (picked == degree) {
    out.push_back(acc);
    return;
  }
  for (int j = start; j <= dim_space; ++j)
    gen_subsets(dim_space, degree, j + 1, static_cast<std::uint16_t>(acc | (1u << (j - 1))),
                picked + 1, out);
}

}  // namespace

const SubsetBasis& subset_basis(int dim_space, int degree) {
  if (dim_space < 1 || dim_space > 15) throw DimensionError("subset_basis: unsupported space dimension");
  if (degree < 0 || degree > dim_space) throw DimensionError("subset_basis: degree out of range");
  static std::map<std::pair<int, int>, SubsetBasis> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim_space, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  SubsetBasis b;
  b.dim_space = dim_space;
  b.degree = degree;
  gen_subsets(dim_space, degree, 1, 0, 0, b.masks);
  b.rank.assign(std::size_t{1} << dim_space, -1);
  for (int i = 0; i < b.size(); ++i) b.rank[b.masks[static_cast<std::size_t>(i)]] = i;
  return cache.emplace(key, std::move(b)).first->second;
}

int merge_sign(std::uint16_t a, std::uint16_t b) {
  if (a & b) return 0;
  // Parity of the number of transpositions needed to sort (a..., b...):
  // for each element of b, count elements of a above it.
  int swaps = 0;
  std::uint16_t bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb = static_cast<std::uint16_t>(bb & (bb - 1));
    swaps += std::popcount(static_cast<unsigned>(a >> (j + 1)));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

PVector::PVector(int n_, int p_) : n(n_), p(p_) {
  if (n < 1) throw DimensionError("PVector: n must be positive");
  if (p < 1 || p > 2 * n + 1) throw DimensionError("PVector: degree out of range");
  c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(binomial(2 * n + 1, p)));
}

PVector::PVector(int n_, int p_, Eigen::VectorXd coeffs) : PVector(n_, p_) {
  if (coeffs.size() != c.size()) throw DimensionError("PVector: coefficient length mismatch");
  c = std::move(coeffs);
}

PVector PVector::from_vector(int n, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != 2 * n + 1) throw DimensionError("PVector::from_vector: length mismatch");
  return PVector(n, 1, coeffs);
}

PVector PVector::basis(int n, const std::vector<int>& indices) {
  PVector v(n, static_cast<int>(indices.size()));
  std::uint16_t mask = 0;
  for (int j : indices) {
    if (j < 1 || j > 2 * n + 1) throw DimensionError("PVector::basis: index out of range");
    if (mask & (1u << (j - 1))) throw DomainError("PVector::basis: repeated index");
    mask = static_cast<std::uint16_t>(mask | (1u << (j - 1)));
  }
  const auto& b = subset_basis(2 * n + 1, v.p);
  // Account for the caller's index order relative to the sorted subset.
  std::uint16_t seen = 0;
  int swaps = 0;
  for (int j : indices) {
    swaps += std::popcount(static_cast<unsigned>(seen >> j));
    seen = static_cast<std::uint16_t>(seen | (1u << (j - 1)));
  }
  v.c[b.rank[mask]] = (swaps % 2 == 0) ? 1.0 : -1.0;
  return v;
}

PVector PVector::operator+(const PVector& o) const {
  if (n != o.n || p != o.p) throw DimensionError("PVector: shape mismatch in +");
  PVector r = *this;
  r.c += o.c;
  return r;
}

PVector PVector::operator-(const PVector& o) const {
  if (n != o.n || p != o.p) throw DimensionError("PVector: shape mismatch in -");
  PVector r = *this;
  r.c -= o.c;
  return r;
}

PVector PVector::operator*(double s) const {
  PVector r = *this;
  r.c *= s;
  return r;
}

PVector wedge(const PVector& a, const PVector& b) {
  if (a.n != b.n) throw DimensionError("wedge: group parameter mismatch");
  const int d = a.space_dim();
  if (a.p + b.p > d) throw DimensionError("wedge: degree overflow");
  const auto& ba = subset_basis(d, a.p);
  const auto& bb = subset_basis(d, b.p);
  const auto& br = subset_basis(d, a.p + b.p);
  PVector r(a.n, a.p + b.p);
  for (int i = 0; i < ba.size(); ++i) {
    double ca = a.c[i];
    if (ca == 0.0) continue;
    std::uint16_t ma = ba.masks[static_cast<std::size_t>(i)];
    for (int j = 0; j < bb.size(); ++j) {
      double cb = b.c[j];
      if (cb == 0.0) continue;
      std::uint16_t mb = bb.masks[static_cast<std::size_t>(j)];
      int s = merge_sign(ma, mb);
      if (s == 0) continue;
      r.c[br.rank[ma | mb]] += s * ca * cb;
    }
  }
  return r;
}

double inner(const PVector& a, const PVector& b) {
  if (a.n != b.n) throw DimensionError("inner: group parameter mismatch");
  if (a.p != b.p) throw DimensionError("inner: degree mismatch");
  return a.c.dot(b.c);
}

double norm(const PVector& a) { return a.c.norm(); }

PVector vertical_project(const PVector& a) {
  const auto& b = subset_basis(a.space_dim(), a.p);
  const std::uint16_t zbit = static_cast<std::uint16_t>(1u << (a.space_dim() - 1));
  PVector r(a.n, a.p);
  for (int i = 0; i < b.size(); ++i)
    if (b.masks[static_cast<std::size_t>(i)] & zbit) r.c[i] = a.c[i];
  return r;
}

bool is_vertical(const PVector& a, double tol) {
  const auto& b = subset_basis(a.space_dim(), a.p);
  const std::uint16_t zbit = static_cast<std::uint16_t>(1u << (a.space_dim() - 1));
  double scale = std::max(1.0, norm(a));
  for (int i = 0; i < b.size(); ++i)
    if (!(b.masks[static_cast<std::size_t>(i)] & zbit) && std::abs(a.c[i]) > tol * scale)
      return false;
  return true;
}

Eigen::MatrixXd simple_factors(const PVector& tau, double tol) {
  const int d = tau.space_dim();
  double scale = norm(tau);
  if (!(scale > 0.0)) throw InvariantError("simple_factors: zero p-vector");
  if (tau.p == d) return Eigen::MatrixXd::Identity(d, d);
  // Kernel of v -> v ^ tau, computed by SVD of the stacked wedge matrix.
  const auto& bout = subset_basis(d, tau.p + 1);
  Eigen::MatrixXd m(bout.size(), d);
  for (int j = 0; j < d; ++j) {
    PVector ej = PVector::basis(tau.n, {j + 1});
    m.col(j) = wedge(ej, tau).c;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int kernel_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] <= tol * scale) ++kernel_dim;
  kernel_dim += d - static_cast<int>(sv.size());
  if (kernel_dim != tau.p)
    throw InvariantError("simple_factors: p-vector is not simple (associated subspace has dimension " +
                         std::to_string(kernel_dim) + ", expected " + std::to_string(tau.p) + ")");
  return svd.matrixV().rightCols(tau.p);
}

}  // namespace heis
