#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "tumble/mesh.hpp"
#include "tumble/phase.hpp"

namespace tumble {

struct IndicatorShape {
  double center = 0.0;
  double half_width = 0.0;
  double amplitude = 1.0;
};

/// (1/eta) * xi((x - center)/eta) with xi(s) = exp(1 - 1/(1 - s^2)).
struct MollifiedShape {
  double center = 0.0;
  double eta = 0.0;
};

/// A detector test function mu_l sampled on the grid.
struct TestFunction {
  std::vector<double> samples;
  std::variant<IndicatorShape, MollifiedShape> descriptor;

  /// sum_j |mu_j| w_j
  double l1_norm(const SpaceGrid& grid) const noexcept;
};

struct MeasurementSet {
  std::vector<TestFunction> functions;
  double final_time = 0.0;

  std::size_t size() const noexcept { return functions.size(); }
};

/// Ground-truth readings y_l.
using DataVector = std::vector<double>;

/// Standard bump: exp(1 - 1/(1-s^2)) on |s| < 1, zero elsewhere.
double standard_bump(double s) noexcept;

TestFunction make_indicator(double center, double half_width, double amplitude,
                            const SpaceGrid& grid);
TestFunction make_mollified(double center, double eta, const SpaceGrid& grid);

/// Resample the descriptor of `mu` on another grid.
TestFunction resample(const TestFunction& mu, const SpaceGrid& grid);

/// Trapezoid quadrature of (f_+ + f_-)(T) * mu over the window.
double measure(const PhaseField& final_state, const TestFunction& mu, const SpaceGrid& grid);
double measure(const PhaseTrajectory& traj, const TestFunction& mu, const SpaceGrid& grid);

std::vector<double> measure_all(const PhaseField& final_state, const MeasurementSet& set,
                                const SpaceGrid& grid);

}  // namespace tumble
