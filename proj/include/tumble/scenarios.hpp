#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tumble/config.hpp"
#include "tumble/csv.hpp"
#include "tumble/design.hpp"
#include "tumble/optimize.hpp"
#include "tumble/problem.hpp"

namespace tumble {

/// A configured inverse problem with synthetic data, ground truth and initial guess.
struct Experiment {
  ExperimentConfig config;
  InverseProblem problem;
  KernelVector k_star;
  KernelVector k0;
  std::optional<DesignSpec> design;
};

/// Resolves the design (or manual layout), samples it and synthesizes y = M(K_star).
Experiment build_experiment(const ExperimentConfig& config);

/// Column names k_1_1, k_1_2, ..., k_R_2.
std::vector<std::string> kernel_columns(std::size_t cells);

OptimizerConfig optimizer_config(const Experiment& exp);

CsvTable history_table(const RunHistory& history, std::size_t cells);
CsvTable data_table(const DataVector& data);
CsvTable trajectory_table(const PhaseTrajectory& traj, const SpaceGrid& grid,
                          const TimeGrid& tgrid);

/// Forward solve at K_star: rows (l, y).
CsvTable run_synth(const Experiment& exp);

/// gd_run from K0: RunHistory table.
CsvTable run_convergence(const Experiment& exp);

/// Rows (r, k_r_1, k_r_2, loss) with all other cells at K_star.
CsvTable run_landscape(const Experiment& exp);

/// Rows (axis_a, axis_b, lambda_min) of the finite-difference Hessian over the sweep.
CsvTable run_eigmap(const Experiment& exp);

struct IllcondResult {
  CsvTable summary;
  std::vector<CsvTable> histories;
};

/// Moves one detector through c + offset * T and reconstructs at each position.
IllcondResult run_illcond(const Experiment& exp);

struct DesignReconResult {
  CsvTable cells;   // per-cell and joint solutions
  CsvTable timing;  // wall-clock seconds, not reproducible
  BlockDefect defect;
  double max_joint_difference = 0.0;
};

/// Per-cell parallel reconstruction against the joint one.
DesignReconResult run_design_recon(const Experiment& exp);

/// Structured text describing a design.
std::string design_json(const DesignSpec& spec, double C_K);

}  // namespace tumble
