#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heis/common.hpp"

namespace heis {

struct IntegrationConfig {
  int order = 12;                    // Gauss-Legendre points per axis
  int subdivisions = 2;              // initial uniform split per axis
  std::size_t mc_samples = 1000000;  // Monte Carlo budget
  std::uint64_t seed = 12345;
  double rel_tol = 1e-8;             // target relative tolerance for adaptive quadrature
  int max_depth = 12;                // refinement depth along indicator boundaries
  std::size_t max_cells = 65536;     // adaptive cell budget
  int threads = 0;                   // 0 = hardware concurrency

  void validate() const;
};

enum class Method { Quadrature, MonteCarlo };

struct MeasureReport {
  double value = 0.0;
  double error_estimate = 0.0;
  Method method = Method::Quadrature;
  std::size_t samples_or_nodes = 0;
  std::vector<std::string> warnings;
};

const char* method_name(Method m);

// Gauss-Legendre nodes/weights on [0, 1]; cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre_01(int order);

using ScalarField = std::function<double(const std::vector<double>&)>;
using Indicator = std::function<bool(const std::vector<double>&)>;

// Tensor-product Gauss-Legendre integral over a box, single panel.
double tensor_quadrature(const Box& box, const ScalarField& f, int order);

// Globally adaptive tensor quadrature: refines the cell with the largest
// order-pair error estimate until rel_tol or the cell budget is reached.
// Failure to reach tolerance is reported in the warnings, not thrown.
MeasureReport adaptive_quadrature(const Box& box, const ScalarField& f,
                                  const IntegrationConfig& cfg);

// Integral of f over {u in box : inside(u)}. Cells straddling the indicator
// boundary are refined to cfg.max_depth; interior cells use plain tensor
// quadrature. The error estimate bounds the unresolved boundary strip.
MeasureReport indicator_quadrature(const Box& box, const ScalarField& f, const Indicator& inside,
                                   const IntegrationConfig& cfg);

// Stratified Monte Carlo estimate of the measure of {u in box : inside(u)}.
// Stratum streams are seeded from cfg.seed deterministically, so the result
// does not depend on thread scheduling.
MeasureReport stratified_mc(const Box& box, const Indicator& inside, const IntegrationConfig& cfg);

// Deterministic worker pool: results are stored per index and reduced in
// index order by the caller.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace heis
