#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "heis/expr.hpp"
#include "heis/group.hpp"
#include "heis/surface.hpp"

namespace heis::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double a, double b) {
    double t = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return a + (b - a) * t;
  }

  double normal() { return dist_(gen_); }

  Eigen::VectorXd vector(int dim, double a, double b) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(a, b);
    return v;
  }

  GroupPoint point(int n, double scale = 2.0) {
    return GroupPoint(n, vector(2 * n + 1, -scale, scale));
  }

  std::vector<double> in_box(const Box& box, double margin = 0.0) {
    std::vector<double> u(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i) {
      double lo = box.lo[static_cast<std::size_t>(i)], hi = box.hi[static_cast<std::size_t>(i)];
      double pad = margin * (hi - lo);
      u[static_cast<std::size_t>(i)] = uniform(lo + pad, hi - pad);
    }
    return u;
  }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

// Random polynomial of degree <= 2 in the given variable expressions,
// reusable over different variable bindings (u-side chart vs x-side map).
struct QuadraticPoly {
  double c0 = 0.0;
  std::vector<double> lin;
  std::vector<std::vector<double>> quad;  // upper triangle incl. diagonal

  static QuadraticPoly random(Rng& rng, int nvars, double scale) {
    QuadraticPoly q;
    q.c0 = rng.uniform(-scale, scale);
    q.lin.resize(static_cast<std::size_t>(nvars));
    for (auto& c : q.lin) c = rng.uniform(-scale, scale);
    q.quad.assign(static_cast<std::size_t>(nvars),
                  std::vector<double>(static_cast<std::size_t>(nvars), 0.0));
    for (int i = 0; i < nvars; ++i)
      for (int j = i; j < nvars; ++j)
        q.quad[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            rng.uniform(-scale, scale);
    return q;
  }

  Expr instantiate(const std::vector<Expr>& vars) const {
    Expr e = Expr::constant(c0);
    for (std::size_t i = 0; i < lin.size(); ++i)
      e = e + Expr::constant(lin[i]) * vars[i];
    for (std::size_t i = 0; i < lin.size(); ++i)
      for (std::size_t j = i; j < lin.size(); ++j)
        e = e + Expr::constant(quad[i][j]) * vars[i] * vars[j];
    return e;
  }
};

// Graph-form level set: pick k dependent coordinates x_{D_i} = g_i(x_I) and
// return the map f^i = x_{D_i} - g_i together with the chart over the
// independent coordinates. The construction makes f^{-1}(0) equal to the
// chart image with df surjective everywhere.
struct GraphLevelSet {
  ScalarMap f;
  ParamSurface chart;
};

inline GraphLevelSet random_graph_level_set(Rng& rng, int n, int k, double coeff_scale = 0.5) {
  const int d = 2 * n + 1;
  const int p = d - k;
  std::vector<int> indices(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) indices[static_cast<std::size_t>(i)] = i;
  std::shuffle(indices.begin(), indices.end(), rng.raw());
  std::vector<int> dep(indices.begin(), indices.begin() + k);
  std::vector<int> ind(indices.begin() + k, indices.end());
  std::sort(dep.begin(), dep.end());
  std::sort(ind.begin(), ind.end());

  std::vector<QuadraticPoly> gs;
  for (int i = 0; i < k; ++i) gs.push_back(QuadraticPoly::random(rng, p, coeff_scale));

  std::vector<Expr> uvars, xvars_of_ind;
  for (int r = 0; r < p; ++r) {
    uvars.push_back(Expr::variable(r));
    xvars_of_ind.push_back(Expr::variable(ind[static_cast<std::size_t>(r)]));
  }

  std::vector<Expr> chart_comp(static_cast<std::size_t>(d));
  for (int r = 0; r < p; ++r)
    chart_comp[static_cast<std::size_t>(ind[static_cast<std::size_t>(r)])] = Expr::variable(r);
  for (int i = 0; i < k; ++i)
    chart_comp[static_cast<std::size_t>(dep[static_cast<std::size_t>(i)])] =
        gs[static_cast<std::size_t>(i)].instantiate(uvars);

  std::vector<Expr> f_comp;
  for (int i = 0; i < k; ++i)
    f_comp.push_back(Expr::variable(dep[static_cast<std::size_t>(i)]) -
                     gs[static_cast<std::size_t>(i)].instantiate(xvars_of_ind));

  Box dom(std::vector<double>(static_cast<std::size_t>(p), -0.5),
          std::vector<double>(static_cast<std::size_t>(p), 0.5));
  return GraphLevelSet{ScalarMap(n, std::move(f_comp)),
                       ParamSurface(n, std::move(dom), std::move(chart_comp))};
}

}  // namespace heis::test
