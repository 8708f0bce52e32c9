#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tumble/calculus.hpp"
#include "tumble/observe.hpp"
#include "tumble/problem.hpp"

namespace fixture {

using namespace tumble;

/// exp(-(x - m)^2 / (2 s^2)) cut to zero beyond `cut` standard deviations.
inline std::vector<double> gaussian(const SpaceGrid& g, double m, double s, double cut = 8.0) {
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double z = (g.x(j) - m) / s;
    if (std::abs(z) <= cut) out[j] = std::exp(-0.5 * z * z);
  }
  return out;
}

inline std::vector<double> uniform_breakpoints(double lo, double hi, std::size_t cells) {
  std::vector<double> b(cells + 1);
  for (std::size_t r = 0; r <= cells; ++r) {
    b[r] = lo + (hi - lo) * static_cast<double>(r) / static_cast<double>(cells);
  }
  return b;
}

inline KernelVector random_kernel(std::size_t cells, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  KernelVector k(2 * cells);
  for (double& v : k) v = u(rng);
  return k;
}

/// R cells on [0, 1] inside the window [-0.5, 1.5]; a Gaussian bump crossing
/// every cell and `detectors` indicators of half width 0.1 spread over [0.05, 0.95].
inline InverseProblem smooth_problem(std::size_t cells, std::size_t n_points, const KernelVector& k_star,
                                     double T = 0.3, double C_K = 2.0, std::size_t detectors = 8,
                                     SolverOptions opts = {}) {
  SpaceGrid grid(-0.5, 1.5, n_points);
  TimeGrid tgrid = build_time_grid(T, grid, C_K);
  auto prof = gaussian(grid, 0.5, 0.1, 6.0);
  auto minus = gaussian(grid, 0.45, 0.08, 6.0);
  PhaseField phi(prof, minus);
  MeasurementSet ms;
  ms.final_time = T;
  for (std::size_t l = 0; l < detectors; ++l) {
    const double c = 0.05 + 0.9 * static_cast<double>(l) / static_cast<double>(detectors - 1);
    ms.functions.push_back(make_indicator(c, 0.1, 1.0, grid));
  }
  auto bp = uniform_breakpoints(0.0, 1.0, cells);
  DataVector y = synthesize_data(unflatten(k_star, bp), phi, ms, grid, tgrid, opts);
  return InverseProblem{grid, tgrid, bp, phi, ms, y, opts};
}

}  // namespace fixture
