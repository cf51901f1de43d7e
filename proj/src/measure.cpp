#include "heis/measure.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace heis {

MetricSpec::MetricSpec(int n, double lambda, Eigen::VectorXd a)
    : n_(n), lambda_(lambda), a_(std::move(a)) {
  if (n_ < 1) throw DimensionError("MetricSpec: n must be positive");
  if (lambda_ == 0.0 || !std::isfinite(lambda_)) throw DomainError("MetricSpec: lambda must be nonzero");
  if (a_.size() != 2 * n_) throw DimensionError("MetricSpec: a must have length 2n");
  if (!a_.allFinite()) throw DomainError("MetricSpec: a must be finite");
}

MetricSpec MetricSpec::standard(int n) { return MetricSpec(n, 1.0, Eigen::VectorXd::Zero(2 * n)); }

bool MetricSpec::is_standard() const { return lambda_ == 1.0 && a_.isZero(0.0); }

Eigen::MatrixXd MetricSpec::change_of_basis() const {
  const int d = 2 * n_ + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m.col(d - 1).head(2 * n_) = a_;
  m(d - 1, d - 1) = lambda_;
  return m;
}

Eigen::VectorXd MetricSpec::to_tilde_frame(const Eigen::VectorXd& h) const {
  const int d = 2 * n_ + 1;
  if (h.size() != d) throw DimensionError("MetricSpec: coefficient vector length mismatch");
  Eigen::VectorXd r = h;
  double hz = h[d - 1];
  r.head(2 * n_) -= (hz / lambda_) * a_;
  r[d - 1] = hz / lambda_;
  return r;
}

std::vector<PVector> pushforward_partials(const ParamSurface& s, const std::vector<double>& u,
                                          const MetricSpec& m) {
  if (m.n() != s.n()) throw DimensionError("pushforward_partials: metric n mismatch");
  std::vector<PVector> parts = pushforward_partials(s, u);
  if (m.is_standard()) return parts;
  for (auto& v : parts) v = PVector::from_vector(s.n(), m.to_tilde_frame(v.c));
  return parts;
}

PVector tangent_pvector(const ParamSurface& s, const std::vector<double>& u, const MetricSpec& m) {
  std::vector<PVector> parts = pushforward_partials(s, u, m);
  PVector t = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) t = wedge(t, parts[i]);
  return t;
}

PVector vertical_tangent(const ParamSurface& s, const std::vector<double>& u, const MetricSpec& m) {
  PVector t = tangent_pvector(s, u, m);
  double sc = norm(t);
  if (!(sc > 0.0)) throw InvariantError("vertical_tangent: degenerate tangent p-vector");
  return vertical_project(t) * (1.0 / sc);
}

namespace {

ScalarField riemannian_density(const ParamSurface& s, const MetricSpec& m) {
  return [&s, m](const std::vector<double>& u) { return norm(tangent_pvector(s, u, m)); };
}

ScalarField vertical_density(const ParamSurface& s, const MetricSpec& m) {
  return [&s, m](const std::vector<double>& u) {
    return norm(vertical_project(tangent_pvector(s, u, m)));
  };
}

}  // namespace

MeasureReport riemannian_volume(const ParamSurface& s, const MetricSpec& m,
                                const IntegrationConfig& cfg) {
  return adaptive_quadrature(s.domain(), riemannian_density(s, m), cfg);
}

MeasureReport spherical_density_integral(const ParamSurface& s, const MetricSpec& m,
                                         const IntegrationConfig& cfg) {
  return adaptive_quadrature(s.domain(), vertical_density(s, m), cfg);
}

bool has_constant_metric_factor(const DistanceSpec& spec) {
  switch (spec.kind()) {
    case DistanceSpec::Kind::Koranyi:
    case DistanceSpec::Kind::MaxDist:
    case DistanceSpec::Kind::RadialProfile:
      // rho(0, F(.)) depends only on (|x~|, x_{2n+1}) for all three kinds.
      return true;
  }
  return false;
}

MeasureReport spherical_measure(const ParamSurface& s, const DistanceSpec& spec,
                                const IntegrationConfig& cfg) {
  if (!has_constant_metric_factor(spec))
    throw DomainError("spherical_measure: distance without constant metric factor");
  return spherical_density_integral(s, MetricSpec::standard(s.n()), cfg);
}

namespace {

// Orthonormal columns spanning A^{-1} L(tau) together with the group
// parameter; shared by the metric-factor integrators.
struct SliceFrame {
  int n;
  int p;
  Eigen::MatrixXd basis;      // (2n+1) x p, orthonormal
  Eigen::MatrixXd chart;      // A, maps tilde coordinates to standard ones
  double radius;              // half-width of the sampling box
};

SliceFrame slice_frame(const DistanceSpec& spec, const PVector& tau, const MetricSpec& m) {
  if (!(norm(tau) > 0.0)) throw DomainError("metric_factor: tau must be nonzero");
  if (!is_vertical(tau, 1e-10))
    throw DomainError("metric_factor: tau must be a vertical p-vector (contain the Z direction)");
  SliceFrame sf;
  sf.n = tau.n;
  sf.p = tau.p;
  Eigen::MatrixXd factors = simple_factors(tau);  // throws if tau is not simple
  sf.chart = m.change_of_basis();
  Eigen::MatrixXd transformed = sf.chart.inverse() * factors;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(transformed);
  sf.basis = qr.householderQ() * Eigen::MatrixXd::Identity(transformed.rows(), sf.p);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sf.chart.inverse());
  double opnorm = svd.singularValues()(0);
  double rh = spec.horizontal_bound(), rv = spec.vertical_bound();
  sf.radius = opnorm * std::sqrt(rh * rh + rv * rv) * 1.0000001;
  return sf;
}

Indicator slice_indicator(const SliceFrame& sf, const DistanceSpec& spec) {
  return [sf, &spec](const std::vector<double>& z) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(2 * sf.n + 1);
    for (int i = 0; i < sf.p; ++i)
      y += z[static_cast<std::size_t>(i)] * sf.basis.col(i);
    GroupPoint x(sf.n, sf.chart * y);
    return spec.from_origin(x) < 1.0;
  };
}

Box slice_box(const SliceFrame& sf) {
  std::vector<double> lo(static_cast<std::size_t>(sf.p), -sf.radius);
  std::vector<double> hi(static_cast<std::size_t>(sf.p), sf.radius);
  return Box(std::move(lo), std::move(hi));
}

}  // namespace

MeasureReport metric_factor(const DistanceSpec& spec, const PVector& tau,
                            const IntegrationConfig& cfg) {
  return metric_factor(spec, tau, cfg, MetricSpec::standard(tau.n));
}

MeasureReport metric_factor(const DistanceSpec& spec, const PVector& tau,
                            const IntegrationConfig& cfg, const MetricSpec& m) {
  cfg.validate();
  if (m.n() != tau.n) throw DimensionError("metric_factor: metric n mismatch");
  SliceFrame sf = slice_frame(spec, tau, m);
  return stratified_mc(slice_box(sf), slice_indicator(sf, spec), cfg);
}

MeasureReport metric_factor_qmc(const DistanceSpec& spec, const PVector& tau,
                                const IntegrationConfig& cfg) {
  cfg.validate();
  SliceFrame sf = slice_frame(spec, tau, MetricSpec::standard(tau.n));
  Box box = slice_box(sf);
  Indicator inside = slice_indicator(sf, spec);

  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23};
  if (sf.p > 9) throw DimensionError("metric_factor_qmc: degree too large");
  auto halton = [&](std::size_t index, int dim_axis) {
    int b = primes[dim_axis];
    double f = 1.0, r = 0.0;
    std::size_t i = index;
    while (i > 0) {
      f /= b;
      r += f * static_cast<double>(i % static_cast<std::size_t>(b));
      i /= static_cast<std::size_t>(b);
    }
    return r;
  };

  // Randomized (Cranley-Patterson) shifts give a spread-based error bar.
  const int batches = 16;
  const std::size_t per_batch = std::max<std::size_t>(64, cfg.mc_samples / batches);
  std::vector<double> estimates(batches, 0.0);
  parallel_for(static_cast<std::size_t>(batches), cfg.threads, [&](std::size_t bidx) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x9c0de5ULL + bidx)));
    std::vector<double> shift(static_cast<std::size_t>(sf.p));
    for (auto& s : shift) s = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::size_t hits = 0;
    std::vector<double> z(static_cast<std::size_t>(sf.p));
    for (std::size_t i = 0; i < per_batch; ++i) {
      for (int d = 0; d < sf.p; ++d) {
        double t = halton(i + 1, d) + shift[static_cast<std::size_t>(d)];
        t -= std::floor(t);
        z[static_cast<std::size_t>(d)] =
            box.lo[static_cast<std::size_t>(d)] +
            t * (box.hi[static_cast<std::size_t>(d)] - box.lo[static_cast<std::size_t>(d)]);
      }
      if (inside(z)) ++hits;
    }
    estimates[bidx] = box.volume() * static_cast<double>(hits) / static_cast<double>(per_batch);
  });
  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= batches;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= (batches - 1);
  MeasureReport rep;
  rep.value = mean;
  rep.error_estimate = std::sqrt(var / batches);
  rep.method = Method::MonteCarlo;
  rep.samples_or_nodes = per_batch * batches;
  return rep;
}

MeasureReport metric_factor_radial(const DistanceSpec& spec, const PVector& tau,
                                   const IntegrationConfig& cfg) {
  cfg.validate();
  SliceFrame sf = slice_frame(spec, tau, MetricSpec::standard(tau.n));  // runs the contract checks
  const int p = sf.p;
  const double rh = spec.horizontal_bound(), rv = spec.vertical_bound();
  auto profile_value = [&spec, &sf](double s, double t) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * sf.n + 1);
    x[0] = s;
    x[2 * sf.n] = t;
    return spec.from_origin(GroupPoint(sf.n, x));
  };

  if (p == 1) {
    Box box({-1.5 * rv}, {1.5 * rv});
    Indicator inside = [&](const std::vector<double>& z) { return profile_value(0.0, z[0]) < 1.0; };
    return indicator_quadrature(box, [](const std::vector<double>&) { return 1.0; }, inside, cfg);
  }

  // theta_p = sigma_{p-2} int int r^{p-2} [N(r, s) < 1] dr ds over r >= 0.
  double sigma = 2.0 * std::pow(std::numbers::pi, 0.5 * (p - 1)) / std::tgamma(0.5 * (p - 1));
  Box box({0.0, -1.1 * rv}, {1.1 * rh, 1.1 * rv});
  Indicator inside = [&](const std::vector<double>& z) { return profile_value(z[0], z[1]) < 1.0; };
  ScalarField dens = [p](const std::vector<double>& z) {
    return std::pow(z[0], p - 2);
  };
  MeasureReport rep = indicator_quadrature(box, dens, inside, cfg);
  rep.value *= sigma;
  rep.error_estimate *= sigma;
  return rep;
}

MeasureReport blowup_quotient(const ParamSurface& s, const std::vector<double>& u0, double r,
                              const DistanceSpec& spec, const IntegrationConfig& cfg) {
  cfg.validate();
  if (!(r > 0.0)) throw DomainError("blowup_quotient: r must be positive");
  s.require_inside(u0);
  const int p = s.p();
  GroupPoint x0 = s.at(u0);

  std::vector<std::string> warnings;
  if (is_characteristic(s, u0))
    warnings.push_back("base point is characteristic: the blow-up limit does not apply");

  Indicator inside = [&](const std::vector<double>& u) {
    return distance(spec, x0, s.at(u)) < r;
  };

  // Bounding box of the ball region: geometric ladder plus bisection along
  // each half-axis from u0, inflated and clamped to the domain.
  bool touches_boundary = false;
  std::vector<double> lo(u0.size()), hi(u0.size());
  for (int i = 0; i < p; ++i) {
    for (int dir = -1; dir <= 1; dir += 2) {
      double edge = dir < 0 ? u0[static_cast<std::size_t>(i)] - s.domain().lo[static_cast<std::size_t>(i)]
                            : s.domain().hi[static_cast<std::size_t>(i)] - u0[static_cast<std::size_t>(i)];
      auto probe = [&](double t) {
        std::vector<double> u = u0;
        u[static_cast<std::size_t>(i)] += dir * t;
        return inside(u);
      };
      double extent;
      if (edge <= 0.0) {
        extent = 0.0;
        touches_boundary = true;
      } else if (probe(edge)) {
        extent = edge;
        touches_boundary = true;
      } else {
        // largest dyadic step that is still inside the ball region
        double t_in = 0.0, t_out = edge;
        for (int j = 1; j <= 48; ++j) {
          double t = edge * std::pow(0.5, j);
          if (probe(t)) {
            t_in = t;
            break;
          }
          t_out = t;
        }
        for (int it = 0; it < 30 && t_in > 0.0; ++it) {
          double mid = 0.5 * (t_in + t_out);
          if (probe(mid))
            t_in = mid;
          else
            t_out = mid;
        }
        extent = std::min(edge, 1.3 * t_out);
      }
      if (dir < 0)
        lo[static_cast<std::size_t>(i)] = u0[static_cast<std::size_t>(i)] - extent;
      else
        hi[static_cast<std::size_t>(i)] = u0[static_cast<std::size_t>(i)] + extent;
    }
    if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)])) {
      lo[static_cast<std::size_t>(i)] = u0[static_cast<std::size_t>(i)] - 1e-12;
      hi[static_cast<std::size_t>(i)] = u0[static_cast<std::size_t>(i)] + 1e-12;
    }
  }
  if (touches_boundary)
    warnings.push_back("ball region touches the parameter-domain boundary; the quotient is truncated");

  Box region(std::move(lo), std::move(hi));
  MeasureReport num = indicator_quadrature(
      region, riemannian_density(s, MetricSpec::standard(s.n())), inside, cfg);

  MeasureReport rep;
  double scale = std::pow(r, p + 1);
  rep.value = num.value / scale;
  rep.error_estimate = num.error_estimate / scale;
  rep.method = Method::Quadrature;
  rep.samples_or_nodes = num.samples_or_nodes;
  rep.warnings = std::move(warnings);
  for (const auto& w : num.warnings) rep.warnings.push_back(w);
  return rep;
}

MeasureReport ball_volume(int n, const DistanceSpec& spec, const IntegrationConfig& cfg) {
  cfg.validate();
  if (n < 1) throw DimensionError("ball_volume: n must be positive");
  const double rh = spec.horizontal_bound(), rv = spec.vertical_bound();
  std::vector<double> lo(static_cast<std::size_t>(2 * n + 1), -rh);
  std::vector<double> hi(static_cast<std::size_t>(2 * n + 1), rh);
  lo.back() = -rv;
  hi.back() = rv;
  Box box(std::move(lo), std::move(hi));
  Indicator inside = [n, &spec](const std::vector<double>& z) {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
    return spec.from_origin(GroupPoint(n, x)) < 1.0;
  };
  return stratified_mc(box, inside, cfg);
}

std::pair<MeasureReport, MeasureReport> rescaled_measure_invariance(const ParamSurface& s,
                                                                    const MetricSpec& m,
                                                                    const DistanceSpec& spec,
                                                                    const IntegrationConfig& cfg) {
  cfg.validate();
  if (m.n() != s.n()) throw DimensionError("rescaled_measure_invariance: metric n mismatch");

  auto side = [&](const MetricSpec& metric, std::uint64_t seed_salt) {
    MeasureReport surf = spherical_density_integral(s, metric, cfg);
    IntegrationConfig ball_cfg = cfg;
    ball_cfg.seed = splitmix64(cfg.seed ^ seed_salt);
    MeasureReport ball = ball_volume(s.n(), spec, ball_cfg);
    // vol~_{2n+1}(B_1) = |lambda|^{-1} vol_{2n+1}(B_1) (pushforward of Lebesgue).
    double ball_vol = ball.value / std::abs(metric.lambda());
    double ball_err = ball.error_estimate / std::abs(metric.lambda());
    MeasureReport rep;
    rep.value = surf.value / ball_vol;
    double rel =
        std::sqrt(std::pow(surf.error_estimate / std::max(std::abs(surf.value), 1e-300), 2) +
                  std::pow(ball_err / ball_vol, 2));
    rep.error_estimate = std::abs(rep.value) * rel;
    rep.method = Method::MonteCarlo;
    rep.samples_or_nodes = ball.samples_or_nodes;
    rep.warnings = surf.warnings;
    return rep;
  };

  MeasureReport tilde = side(m, 0xa11ce5ULL);
  MeasureReport std_side = side(MetricSpec::standard(s.n()), 0xb0b5ULL);
  return {tilde, std_side};
}

}  // namespace heis
