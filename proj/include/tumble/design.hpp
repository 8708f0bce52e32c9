#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tumble/eigen.hpp"
#include "tumble/optimize.hpp"
#include "tumble/problem.hpp"

namespace tumble {

/// Counting measure on {+1, -1}.
inline constexpr double kVelocitySetSize = 2.0;

enum class BumpShape {
  /// Gaussian, sigma = d/3, cut at +-d and shifted to vanish there.
  TruncatedGaussian,
  /// Constant on [center - d, center + d].
  Plateau,
};

/// Per-cell bumps at the cell centres and detector pairs at centre +- T.
struct DesignSpec {
  std::vector<double> breakpoints;
  double bump_half_width = 0.0;         // d
  double measurement_half_width = 0.0;  // d_mu
  double final_time = 0.0;              // T
  double bump_amplitude = 1.0;
  double measurement_amplitude = 0.0;   // C_mu bar
  BumpShape shape = BumpShape::TruncatedGaussian;

  std::size_t cells() const noexcept { return breakpoints.size() - 1; }
  double center(std::size_t r) const noexcept {
    return 0.5 * (breakpoints[r] + breakpoints[r + 1]);
  }
  double min_cell_width() const noexcept;
  /// delta = (d + d_mu) / T
  double separation_ratio() const noexcept {
    return (bump_half_width + measurement_half_width) / final_time;
  }
  /// Detector centres in measurement order: cell r gives 2r (left) and 2r+1 (right).
  std::vector<double> measurement_centers() const;
};

struct DesignViolation {
  std::string name;
  std::string detail;
};

/// Checks the four design inequalities with |V| = 2; empty means valid.
std::vector<DesignViolation> validate_design(const DesignSpec& spec, double C_K);

struct DesignOptions {
  /// d = d_mu = shape_constant * T^2
  double shape_constant = 20.0;
  double bump_amplitude = 1.0;
  /// <= 0 selects unit detector mass 1/(2 d_mu).
  double measurement_amplitude = 0.0;
  BumpShape shape = BumpShape::TruncatedGaussian;
};

struct Design {
  DesignSpec spec;
  PhaseField phi;
  MeasurementSet measurements;
};

/// Bump profile of cell r sampled on the grid.
std::vector<double> bump_profile(const DesignSpec& spec, std::size_t r, const SpaceGrid& grid);

/// Samples a spec on the grid (breakpoints and cell centres must be nodes).
Design sample_design(const DesignSpec& spec, const SpaceGrid& grid);

/// Uniform cells on `domain`, T maximised by bisection under validate_design.
Design build_design(std::size_t cells, Interval domain, double C_K, const SpaceGrid& grid,
                    const DesignOptions& opts = {});

/// One decoupled two-parameter problem on the nodes of its own cell.
struct CellProblem {
  std::size_t cell = 0;
  std::size_t first_node = 0;  // offset of the sub-grid inside the joint grid
  std::size_t measurements[2] = {0, 0};
  InverseProblem problem;
};

/// Restricts a design-D problem to its R cell problems.
std::vector<CellProblem> split_cell_problems(const DesignSpec& spec, const InverseProblem& joint);

struct CellReconstruction {
  KernelVector k;                  // concatenated, length 2R
  std::vector<RunHistory> histories;
  std::vector<double> wall_seconds;
  double total_seconds = 0.0;
};

/// Solves every cell problem (in parallel over `threads` workers) from the
/// matching slice of k0 and concatenates by cell index. A SpectralAt policy is
/// sliced per cell.
CellReconstruction reconstruct_cells(const std::vector<CellProblem>& cells,
                                     const KernelVector& k0, const OptimizerConfig& config,
                                     unsigned threads);

struct BlockDefect {
  double max_block = 0.0;  // max off-diagonal 2x2 block Frobenius norm / ||H||_F
  double off_mass = 0.0;   // Frobenius norm of all off-diagonal blocks / ||H||_F
};

BlockDefect block_defect(const SymmetricMatrix& h);

}  // namespace tumble
