#include "heis/surface.hpp"

#include <cmath>
#include <random>

namespace heis {

namespace {

std::vector<std::string> param_vars(int p) {
  std::vector<std::string> v;
  for (int i = 1; i <= p; ++i) v.push_back("u" + std::to_string(i));
  return v;
}

}  // namespace

ParamSurface::ParamSurface(int n, Box domain, std::vector<Expr> components)
    : n_(n), domain_(std::move(domain)), comp_(std::move(components)) {
  if (n_ < 1) throw DimensionError("ParamSurface: n must be positive");
  const int p = domain_.dim();
  if (p < 1 || p > 2 * n_) throw DimensionError("ParamSurface: dimension p must satisfy 1 <= p <= 2n");
  if (static_cast<int>(comp_.size()) != 2 * n_ + 1)
    throw DimensionError("ParamSurface: expected " + std::to_string(2 * n_ + 1) + " components");
  partials_.resize(comp_.size());
  for (std::size_t i = 0; i < comp_.size(); ++i) {
    if (comp_[i].min_arity() > p)
      throw DimensionError("ParamSurface: component uses more than p parameters");
    partials_[i].reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) partials_[i].push_back(comp_[i].diff(j));
  }

  // Embedding sample check: coordinate partials of full rank at a small
  // deterministic sample of the (closed) domain.
  std::mt19937_64 rng(0xe3b0c442ULL);
  std::vector<std::vector<double>> samples;
  samples.push_back(domain_.center());
  for (int i = 0; i < 24; ++i) {
    std::vector<double> u(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
      double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      u[static_cast<std::size_t>(j)] =
          domain_.lo[static_cast<std::size_t>(j)] +
          t * (domain_.hi[static_cast<std::size_t>(j)] - domain_.lo[static_cast<std::size_t>(j)]);
    }
    samples.push_back(std::move(u));
  }
  for (const auto& u : samples) {
    Eigen::MatrixXd d = coordinate_partials(u);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
    double smin = svd.singularValues().tail(1)(0);
    double smax = svd.singularValues()(0);
    if (!(smin > 1e-9 * std::max(1.0, smax)))
      throw DomainError("ParamSurface: coordinate partials are rank-deficient at a sample point");
  }
}

ParamSurface ParamSurface::from_strings(int n, Box domain,
                                        const std::vector<std::string>& components) {
  std::vector<std::string> vars = param_vars(domain.dim());
  const bool curve = domain.dim() == 1;
  if (curve) vars.push_back("t");  // t as an alias for u1 on curves
  std::vector<Expr> comp;
  comp.reserve(components.size());
  for (const auto& text : components) {
    Expr e = parse(text, vars);
    if (curve) e = e.substitute(1, Expr::variable(0));
    comp.push_back(e);
  }
  return ParamSurface(n, std::move(domain), std::move(comp));
}

GroupPoint ParamSurface::at(const std::vector<double>& u) const { return GroupPoint(n_, point(u)); }

Eigen::VectorXd ParamSurface::point(const std::vector<double>& u) const {
  Eigen::VectorXd x(space_dim());
  for (int i = 0; i < space_dim(); ++i) x[i] = comp_[static_cast<std::size_t>(i)].eval(u);
  return x;
}

Eigen::MatrixXd ParamSurface::coordinate_partials(const std::vector<double>& u) const {
  Eigen::MatrixXd d(space_dim(), p());
  for (int i = 0; i < space_dim(); ++i)
    for (int j = 0; j < p(); ++j)
      d(i, j) = partials_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(u);
  return d;
}

void ParamSurface::require_inside(const std::vector<double>& u) const {
  if (static_cast<int>(u.size()) != p()) throw DimensionError("surface: parameter arity mismatch");
  if (!domain_.contains(u)) throw DomainError("surface: parameter point outside the domain box");
}

std::vector<PVector> pushforward_partials(const ParamSurface& s, const std::vector<double>& u) {
  s.require_inside(u);
  GroupPoint x = s.at(u);
  Eigen::MatrixXd d = s.coordinate_partials(u);
  std::vector<PVector> out;
  out.reserve(static_cast<std::size_t>(s.p()));
  for (int j = 0; j < s.p(); ++j)
    out.push_back(PVector::from_vector(s.n(), coords_to_frame(x, d.col(j))));
  return out;
}

PVector tangent_pvector(const ParamSurface& s, const std::vector<double>& u) {
  std::vector<PVector> parts = pushforward_partials(s, u);
  PVector t = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) t = wedge(t, parts[i]);
  return t;
}

PVector vertical_tangent(const ParamSurface& s, const std::vector<double>& u) {
  PVector t = tangent_pvector(s, u);
  double sc = norm(t);
  if (!(sc > 0.0)) throw InvariantError("vertical_tangent: degenerate tangent p-vector");
  return vertical_project(t) * (1.0 / sc);
}

bool is_characteristic(const ParamSurface& s, const std::vector<double>& u, double tol) {
  if (!(tol > 0.0)) throw DomainError("is_characteristic: tol must be positive");
  return norm(vertical_tangent(s, u)) <= tol;
}

ParamSurface left_translate(const ParamSurface& s, const GroupPoint& z) {
  if (z.n != s.n()) throw DimensionError("left_translate: group parameter mismatch");
  const int n = s.n();
  const auto& phi = s.components();
  std::vector<Expr> comp(static_cast<std::size_t>(2 * n + 1));
  for (int i = 0; i < 2 * n; ++i)
    comp[static_cast<std::size_t>(i)] = Expr::constant(z.x[i]) + phi[static_cast<std::size_t>(i)];
  Expr last = Expr::constant(z.x[2 * n]) + phi[static_cast<std::size_t>(2 * n)];
  for (int k = 0; k < n; ++k) {
    last = last + Expr::constant(z.x[k]) * phi[static_cast<std::size_t>(k + n)] -
           Expr::constant(z.x[k + n]) * phi[static_cast<std::size_t>(k)];
  }
  comp[static_cast<std::size_t>(2 * n)] = last;
  return ParamSurface(n, s.domain(), std::move(comp));
}

ScalarMap::ScalarMap(int n, std::vector<Expr> components) : n_(n), comp_(std::move(components)) {
  if (n_ < 1) throw DimensionError("ScalarMap: n must be positive");
  const int k = static_cast<int>(comp_.size());
  if (k < 1 || k >= 2 * n_ + 1)
    throw DimensionError("ScalarMap: target dimension k must satisfy 1 <= k < 2n+1");
  partials_.resize(comp_.size());
  for (std::size_t i = 0; i < comp_.size(); ++i) {
    if (comp_[i].min_arity() > 2 * n_ + 1)
      throw DimensionError("ScalarMap: component uses more than 2n+1 coordinates");
    for (int j = 0; j < 2 * n_ + 1; ++j) partials_[i].push_back(comp_[i].diff(j));
  }
}

ScalarMap ScalarMap::from_strings(int n, const std::vector<std::string>& components) {
  std::vector<std::string> vars;
  for (int i = 1; i <= 2 * n + 1; ++i) vars.push_back("x" + std::to_string(i));
  std::vector<Expr> comp;
  comp.reserve(components.size());
  for (const auto& text : components) comp.push_back(parse(text, vars));
  return ScalarMap(n, std::move(comp));
}

Eigen::VectorXd ScalarMap::eval(const GroupPoint& x) const {
  if (x.n != n_) throw DimensionError("ScalarMap: group parameter mismatch");
  std::vector<double> v(x.x.data(), x.x.data() + x.x.size());
  Eigen::VectorXd r(k());
  for (int i = 0; i < k(); ++i) r[i] = comp_[static_cast<std::size_t>(i)].eval(v);
  return r;
}

Eigen::MatrixXd ScalarMap::coordinate_jacobian(const GroupPoint& x) const {
  if (x.n != n_) throw DimensionError("ScalarMap: group parameter mismatch");
  std::vector<double> v(x.x.data(), x.x.data() + x.x.size());
  Eigen::MatrixXd d(k(), 2 * n_ + 1);
  for (int i = 0; i < k(); ++i)
    for (int j = 0; j < 2 * n_ + 1; ++j)
      d(i, j) = partials_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(v);
  return d;
}

}  // namespace heis
