#include "heis/coarea.hpp"

#include <cmath>

namespace heis {

Eigen::MatrixXd frame_jacobian_matrix(const ScalarMap& f, const GroupPoint& x) {
  return f.coordinate_jacobian(x) * frame_at(x);
}

namespace {

// Cauchy-Binet: the sum of squared k x k minors over a column block equals
// det(G G^T) of the block.
double minor_norm(const Eigen::MatrixXd& g) {
  Eigen::MatrixXd gram = g * g.transpose();
  double det = gram.determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

}  // namespace

double horizontal_jacobian(const ScalarMap& f, const GroupPoint& x) {
  Eigen::MatrixXd g = frame_jacobian_matrix(f, x);
  return minor_norm(g.leftCols(2 * x.n));
}

double riemannian_jacobian(const ScalarMap& f, const GroupPoint& x) {
  return minor_norm(frame_jacobian_matrix(f, x));
}

std::pair<double, double> ratio_identity_check(const ScalarMap& f, const ParamSurface& chart,
                                               const std::vector<double>& u) {
  if (f.n() != chart.n()) throw DimensionError("ratio_identity_check: group parameter mismatch");
  if (chart.p() != 2 * chart.n() + 1 - f.k())
    throw DimensionError("ratio_identity_check: chart dimension does not match the level sets of f");
  GroupPoint x = chart.at(u);
  double lhs = norm(vertical_tangent(chart, u));
  double jg = riemannian_jacobian(f, x);
  double jh = horizontal_jacobian(f, x);
  if (!(jg > 1e-12 * std::max(1.0, jh)))
    throw DomainError("ratio_identity_check: J_g vanishes (degenerate level set at this point)");
  return {lhs, jh / jg};
}

PVector horizontal_normal(const ParamSurface& s, const std::vector<double>& u) {
  const int n = s.n(), d = 2 * n + 1;
  if (s.p() != 2 * n) throw DimensionError("horizontal_normal: surface must have codimension one");
  PVector tau = vertical_tangent(s, u);
  const auto& basis = subset_basis(d, 2 * n);
  const std::uint16_t full = static_cast<std::uint16_t>((1u << d) - 1u);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(d);
  for (int j = 1; j <= 2 * n; ++j) {
    std::uint16_t mask = static_cast<std::uint16_t>(full & ~(1u << (j - 1)));
    double cj = tau.c[basis.rank[mask]];
    nu[j - 1] = (j % 2 == 0 ? cj : -cj);
  }
  return PVector::from_vector(n, nu);
}

LevelSetFamily::LevelSetFamily(ScalarMap f, ChartFn chart, Box region, Box levels)
    : f_(std::move(f)), chart_fn_(std::move(chart)), region_(std::move(region)),
      levels_(std::move(levels)) {
  if (!chart_fn_) throw DomainError("LevelSetFamily: empty chart function");
  if (region_.dim() != 2 * f_.n() + 1)
    throw DimensionError("LevelSetFamily: region must be a coordinate box of H^n");
  if (levels_.dim() != f_.k())
    throw DimensionError("LevelSetFamily: level box dimension must equal k");
  // Consistency of the family: f(chart(t)(u)) = t at sample points.
  Eigen::VectorXd t(levels_.dim());
  for (int pass = 0; pass < 3; ++pass) {
    for (int i = 0; i < levels_.dim(); ++i) {
      double lo = levels_.lo[static_cast<std::size_t>(i)], hi = levels_.hi[static_cast<std::size_t>(i)];
      t[i] = pass == 0 ? 0.5 * (lo + hi) : (pass == 1 ? lo + 0.25 * (hi - lo) : lo + 0.75 * (hi - lo));
    }
    ParamSurface chart_t = chart(t);
    std::vector<double> u = chart_t.domain().center();
    Eigen::VectorXd ft = f_.eval(chart_t.at(u));
    if ((ft - t).lpNorm<Eigen::Infinity>() > 1e-9)
      throw InvariantError("LevelSetFamily: chart(t) is not a parametrization of f^{-1}(t)");
  }
}

ParamSurface LevelSetFamily::chart(const Eigen::VectorXd& t) const {
  if (t.size() != levels_.dim()) throw DimensionError("LevelSetFamily: level arity mismatch");
  ParamSurface s = chart_fn_(t);
  if (s.n() != f_.n() || s.p() != 2 * f_.n() + 1 - f_.k())
    throw InvariantError("LevelSetFamily: chart has the wrong dimensions");
  return s;
}

LevelSetFamily make_level_family(const ScalarMap& f,
                                 const std::vector<std::string>& chart_components,
                                 Box chart_domain, Box region, double t_lo, double t_hi) {
  if (f.k() != 1) throw DimensionError("make_level_family: expression charts support k = 1 only");
  const int p = chart_domain.dim();
  std::vector<std::string> vars;
  for (int i = 1; i <= p; ++i) vars.push_back("u" + std::to_string(i));
  vars.push_back("t");
  std::vector<Expr> templ;
  templ.reserve(chart_components.size());
  for (const auto& text : chart_components) templ.push_back(parse(text, vars));
  const int n = f.n();
  auto chart = [n, p, templ, chart_domain](const Eigen::VectorXd& t) {
    std::vector<Expr> comp;
    comp.reserve(templ.size());
    for (const auto& e : templ) comp.push_back(e.substitute(p, Expr::constant(t[0])));
    return ParamSurface(n, chart_domain, std::move(comp));
  };
  return LevelSetFamily(f, chart, std::move(region), Box({t_lo}, {t_hi}));
}

namespace {

std::pair<MeasureReport, MeasureReport> coarea_both_sides(const LevelSetFamily& family,
                                                          const Expr& weight,
                                                          const IntegrationConfig& cfg,
                                                          bool horizontal) {
  cfg.validate();
  const ScalarMap& f = family.map();

  ScalarField lhs_density = [&](const std::vector<double>& xv) {
    GroupPoint x(f.n(), Eigen::Map<const Eigen::VectorXd>(xv.data(),
                                                          static_cast<Eigen::Index>(xv.size())));
    double jac = horizontal ? horizontal_jacobian(f, x) : riemannian_jacobian(f, x);
    return weight.eval(xv) * jac;
  };
  MeasureReport lhs = adaptive_quadrature(family.region(), lhs_density, cfg);

  // Outer integral over the level box by a tensor Gauss-Legendre pair; the
  // inner integrals run concurrently with deterministic per-node reduction.
  auto outer = [&](int order) {
    struct NodeJob {
      Eigen::VectorXd t;
      double w = 0.0;
    };
    std::vector<NodeJob> jobs;
    const int k = family.levels().dim();
    const auto& nodes = gauss_legendre_01(order);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(order);
    for (std::size_t flat = 0; flat < total; ++flat) {
      NodeJob job;
      job.t.resize(k);
      job.w = 1.0;
      for (int i = 0; i < k; ++i) {
        const auto& nd = nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        double len = family.levels().hi[static_cast<std::size_t>(i)] -
                     family.levels().lo[static_cast<std::size_t>(i)];
        job.t[i] = family.levels().lo[static_cast<std::size_t>(i)] + nd.first * len;
        job.w *= nd.second * len;
      }
      jobs.push_back(std::move(job));
      for (int i = 0; i < k; ++i) {
        if (++idx[static_cast<std::size_t>(i)] < order) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
    }
    std::vector<MeasureReport> inner(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
      ParamSurface chart = family.chart(jobs[j].t);
      ScalarField density = [&](const std::vector<double>& u) {
        PVector tangent = tangent_pvector(chart, u);
        double dens = horizontal ? norm(vertical_project(tangent)) : norm(tangent);
        Eigen::VectorXd x = chart.point(u);
        std::vector<double> xv(x.data(), x.data() + x.size());
        return weight.eval(xv) * dens;
      };
      inner[j] = adaptive_quadrature(chart.domain(), density, cfg);
    });
    KahanSum vsum, esum;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      vsum.add(jobs[j].w * inner[j].value);
      esum.add(std::abs(jobs[j].w) * inner[j].error_estimate);
    }
    std::size_t nodes_used = 0;
    for (const auto& r : inner) nodes_used += r.samples_or_nodes;
    return std::tuple<double, double, std::size_t>(vsum.value(), esum.value(), nodes_used);
  };

  auto [fine, inner_err, nodes_fine] = outer(cfg.order);
  auto [coarse, coarse_err, nodes_coarse] = outer(std::max(2, cfg.order / 2));
  (void)coarse_err;
  MeasureReport rhs;
  rhs.value = fine;
  rhs.error_estimate = inner_err + std::abs(fine - coarse);
  rhs.method = Method::Quadrature;
  rhs.samples_or_nodes = nodes_fine + nodes_coarse;
  return {lhs, rhs};
}

}  // namespace

std::pair<MeasureReport, MeasureReport> coarea_check(const LevelSetFamily& family,
                                                     const Expr& weight,
                                                     const IntegrationConfig& cfg) {
  return coarea_both_sides(family, weight, cfg, /*horizontal=*/true);
}

std::pair<MeasureReport, MeasureReport> riemannian_coarea_check(const LevelSetFamily& family,
                                                                const Expr& weight,
                                                                const IntegrationConfig& cfg) {
  return coarea_both_sides(family, weight, cfg, /*horizontal=*/false);
}

}  // namespace heis
