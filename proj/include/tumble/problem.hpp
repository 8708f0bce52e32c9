#pragma once

#include <vector>

#include "tumble/kernel.hpp"
#include "tumble/mesh.hpp"
#include "tumble/observe.hpp"
#include "tumble/phase.hpp"
#include "tumble/solver.hpp"

namespace tumble {

/// Everything the loss needs besides the kernel values: geometry, the
/// initial state, the detectors and the recorded data.
struct InverseProblem {
  SpaceGrid grid;
  TimeGrid tgrid;
  std::vector<double> breakpoints;
  PhaseField phi;
  MeasurementSet measurements;
  DataVector data;
  SolverOptions solver{};

  std::size_t cells() const noexcept { return breakpoints.size() - 1; }
  std::size_t parameters() const noexcept { return 2 * cells(); }
  KernelField field(const KernelVector& k) const { return unflatten(k, breakpoints); }
};

/// y_l = M_l(K_star) from a single forward solve.
DataVector synthesize_data(const KernelField& k_star, const PhaseField& phi,
                           const MeasurementSet& measurements, const SpaceGrid& grid,
                           const TimeGrid& tgrid, const SolverOptions& opts = {});

}  // namespace tumble
