#include "heis/integrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>
#include <random>
#include <thread>

#include <gsl/gsl_integration.h>

namespace heis {

void IntegrationConfig::validate() const {
  if (order < 2 || order > 128) throw DomainError("IntegrationConfig: order must be in [2, 128]");
  if (subdivisions < 1) throw DomainError("IntegrationConfig: subdivisions must be positive");
  if (mc_samples < 100) throw DomainError("IntegrationConfig: mc_samples must be at least 100");
  if (!(rel_tol > 0.0)) throw DomainError("IntegrationConfig: rel_tol must be positive");
  if (max_depth < 1 || max_depth > 40) throw DomainError("IntegrationConfig: max_depth must be in [1, 40]");
  if (max_cells < 1) throw DomainError("IntegrationConfig: max_cells must be positive");
  if (threads < 0) throw DomainError("IntegrationConfig: threads must be nonnegative");
}

const char* method_name(Method m) { return m == Method::Quadrature ? "quadrature" : "mc"; }

const std::vector<std::pair<double, double>>& gauss_legendre_01(int order) {
  if (order < 1 || order > 256) throw DomainError("gauss_legendre_01: unsupported order");
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
  if (!table) throw InvariantError("gauss_legendre_01: table allocation failed");
  std::vector<std::pair<double, double>> nodes(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &x, &w, table);
    nodes[static_cast<std::size_t>(i)] = {x, w};
  }
  gsl_integration_glfixed_table_free(table);
  return cache.emplace(order, std::move(nodes)).first->second;
}

namespace {

// Visit the full tensor grid of GL nodes over `box`, calling
// visit(point, weight) for each node.
template <typename Visit>
void for_tensor_nodes(const Box& box, int order, Visit&& visit) {
  const int dim = box.dim();
  const auto& nodes = gauss_legendre_01(order);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> u(static_cast<std::size_t>(dim));
  const std::size_t total = [&] {
    std::size_t t = 1;
    for (int i = 0; i < dim; ++i) t *= static_cast<std::size_t>(order);
    return t;
  }();
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      const auto& nd = nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
      double len = box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)];
      u[static_cast<std::size_t>(i)] = box.lo[static_cast<std::size_t>(i)] + nd.first * len;
      w *= nd.second * len;
    }
    visit(u, w);
    for (int i = 0; i < dim; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < order) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
}

std::vector<Box> split_uniform(const Box& box, int per_axis) {
  const int dim = box.dim();
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<Box> cells;
  cells.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<double> lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      double len = (box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)]) /
                   per_axis;
      lo[static_cast<std::size_t>(i)] =
          box.lo[static_cast<std::size_t>(i)] + idx[static_cast<std::size_t>(i)] * len;
      hi[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)] + len;
    }
    cells.emplace_back(std::move(lo), std::move(hi));
    for (int i = 0; i < dim; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  return cells;
}

int low_order(int order) { return std::max(2, order / 2); }

struct CellEstimate {
  Box box;
  double fine = 0.0;
  double err = 0.0;
  std::size_t id = 0;  // tie-breaker keeps the refinement order deterministic
};

struct CellCompare {
  bool operator()(const CellEstimate& a, const CellEstimate& b) const {
    if (a.err != b.err) return a.err < b.err;
    return a.id > b.id;
  }
};

CellEstimate estimate_cell(Box box, const ScalarField& f, int order, std::size_t id) {
  CellEstimate ce;
  ce.fine = tensor_quadrature(box, f, order);
  double coarse = tensor_quadrature(box, f, low_order(order));
  ce.err = std::abs(ce.fine - coarse);
  ce.box = std::move(box);
  ce.id = id;
  return ce;
}

}  // namespace

double tensor_quadrature(const Box& box, const ScalarField& f, int order) {
  KahanSum sum;
  for_tensor_nodes(box, order, [&](const std::vector<double>& u, double w) { sum.add(w * f(u)); });
  return sum.value();
}

MeasureReport adaptive_quadrature(const Box& box, const ScalarField& f,
                                  const IntegrationConfig& cfg) {
  cfg.validate();
  const int dim = box.dim();
  std::size_t nodes_per_cell = 1;
  for (int i = 0; i < dim; ++i)
    nodes_per_cell *= static_cast<std::size_t>(cfg.order + low_order(cfg.order));

  std::vector<Box> initial = split_uniform(box, cfg.subdivisions);
  std::vector<CellEstimate> first(initial.size());
  parallel_for(initial.size(), cfg.threads, [&](std::size_t i) {
    first[i] = estimate_cell(initial[i], f, cfg.order, i);
  });

  std::priority_queue<CellEstimate, std::vector<CellEstimate>, CellCompare> heap;
  std::size_t next_id = initial.size();
  double total = 0.0, total_err = 0.0;
  for (auto& ce : first) {
    total += ce.fine;
    total_err += ce.err;
    heap.push(std::move(ce));
  }

  std::size_t cells = initial.size();
  while (total_err > cfg.rel_tol * std::max(std::abs(total), 1e-300) && cells < cfg.max_cells) {
    CellEstimate worst = heap.top();
    heap.pop();
    if (worst.err == 0.0) {
      heap.push(std::move(worst));
      break;
    }
    total -= worst.fine;
    total_err -= worst.err;
    for (Box& child : split_uniform(worst.box, 2)) {
      CellEstimate ce = estimate_cell(std::move(child), f, cfg.order, next_id++);
      total += ce.fine;
      total_err += ce.err;
      heap.push(std::move(ce));
      ++cells;
    }
  }

  // Final compensated pass over surviving cells for an order-insensitive sum.
  KahanSum vsum, esum;
  while (!heap.empty()) {
    vsum.add(heap.top().fine);
    esum.add(heap.top().err);
    heap.pop();
  }

  MeasureReport rep;
  rep.value = vsum.value();
  rep.error_estimate = esum.value();
  rep.method = Method::Quadrature;
  rep.samples_or_nodes = cells * nodes_per_cell;
  if (rep.error_estimate > cfg.rel_tol * std::max(std::abs(rep.value), 1e-300))
    rep.warnings.push_back("quadrature tolerance not reached within the cell budget");
  return rep;
}

namespace {

enum class Classification { Inside, Outside, Straddle };

Classification classify(const Box& box, const Indicator& inside) {
  const int dim = box.dim();
  bool any_in = false, any_out = false;
  auto probe = [&](const std::vector<double>& u) {
    if (inside(u))
      any_in = true;
    else
      any_out = true;
  };
  // corners
  std::size_t corners = std::size_t{1} << dim;
  std::vector<double> u(static_cast<std::size_t>(dim));
  for (std::size_t c = 0; c < corners; ++c) {
    for (int i = 0; i < dim; ++i)
      u[static_cast<std::size_t>(i)] =
          (c >> i) & 1 ? box.hi[static_cast<std::size_t>(i)] : box.lo[static_cast<std::size_t>(i)];
    probe(u);
    if (any_in && any_out) return Classification::Straddle;
  }
  // center and face centers
  std::vector<double> mid = box.center();
  probe(mid);
  for (int i = 0; i < dim && !(any_in && any_out); ++i) {
    std::vector<double> face = mid;
    face[static_cast<std::size_t>(i)] = box.lo[static_cast<std::size_t>(i)];
    probe(face);
    if (any_in && any_out) break;
    face[static_cast<std::size_t>(i)] = box.hi[static_cast<std::size_t>(i)];
    probe(face);
  }
  if (any_in && any_out) return Classification::Straddle;
  return any_in ? Classification::Inside : Classification::Outside;
}

struct IndicatorAccum {
  KahanSum value, err;
  std::size_t cells = 0;
};

void indicator_recurse(const Box& box, const ScalarField& f, const Indicator& inside,
                       const IntegrationConfig& cfg, int depth, IndicatorAccum& acc) {
  Classification cls =
      depth < 2 ? Classification::Straddle : classify(box, inside);  // force early subdivision
  ++acc.cells;
  if (cls == Classification::Outside) return;
  if (cls == Classification::Inside) {
    double fine = tensor_quadrature(box, f, cfg.order);
    double coarse = tensor_quadrature(box, f, low_order(cfg.order));
    acc.value.add(fine);
    acc.err.add(std::abs(fine - coarse));
    return;
  }
  if (depth >= cfg.max_depth) {
    // Boundary cell at the refinement floor: integrate f with the indicator
    // sampled at the quadrature nodes and bound the unresolved remainder.
    KahanSum masked, full;
    for_tensor_nodes(box, cfg.order, [&](const std::vector<double>& u, double w) {
      double fv = f(u);
      full.add(w * fv);
      if (inside(u)) masked.add(w * fv);
    });
    acc.value.add(masked.value());
    acc.err.add(std::max(masked.value(), full.value() - masked.value()));
    return;
  }
  for (const Box& child : split_uniform(box, 2))
    indicator_recurse(child, f, inside, cfg, depth + 1, acc);
}

}  // namespace

MeasureReport indicator_quadrature(const Box& box, const ScalarField& f, const Indicator& inside,
                                   const IntegrationConfig& cfg) {
  cfg.validate();
  IndicatorAccum acc;
  indicator_recurse(box, f, inside, cfg, 0, acc);
  MeasureReport rep;
  rep.value = acc.value.value();
  rep.error_estimate = acc.err.value();
  rep.method = Method::Quadrature;
  rep.samples_or_nodes = acc.cells;
  return rep;
}

MeasureReport stratified_mc(const Box& box, const Indicator& inside, const IntegrationConfig& cfg) {
  cfg.validate();
  const int dim = box.dim();

  // Pick a stratification grid with at least ~256 samples per stratum.
  int per_axis = 1;
  while (true) {
    int next = per_axis + 1;
    double strata = std::pow(static_cast<double>(next), dim);
    if (strata > 4096.0 || static_cast<double>(cfg.mc_samples) / strata < 256.0) break;
    per_axis = next;
  }
  std::vector<Box> strata = split_uniform(box, per_axis);
  const std::size_t per_stratum = cfg.mc_samples / strata.size();

  struct StratumResult {
    double mean = 0.0;
    double var = 0.0;
  };
  std::vector<StratumResult> results(strata.size());
  parallel_for(strata.size(), cfg.threads, [&](std::size_t s) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x517cc1b727220a95ULL + s)));
    const Box& cell = strata[s];
    std::vector<double> u(static_cast<std::size_t>(dim));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < per_stratum; ++i) {
      for (int j = 0; j < dim; ++j) {
        double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        u[static_cast<std::size_t>(j)] =
            cell.lo[static_cast<std::size_t>(j)] +
            t * (cell.hi[static_cast<std::size_t>(j)] - cell.lo[static_cast<std::size_t>(j)]);
      }
      if (inside(u)) ++hits;
    }
    double mean = static_cast<double>(hits) / static_cast<double>(per_stratum);
    results[s].mean = mean;
    results[s].var = mean * (1.0 - mean) / static_cast<double>(per_stratum);
  });

  KahanSum vsum, varsum;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    double vol = strata[s].volume();
    vsum.add(vol * results[s].mean);
    varsum.add(vol * vol * results[s].var);
  }
  MeasureReport rep;
  rep.value = vsum.value();
  rep.error_estimate = std::sqrt(varsum.value());
  rep.method = Method::MonteCarlo;
  rep.samples_or_nodes = per_stratum * strata.size();
  return rep;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max<std::size_t>(1, hw ? hw : 1);
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  std::atomic<std::size_t> next{0};
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace heis
