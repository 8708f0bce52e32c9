#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tumble/design.hpp"
#include "tumble/kernel.hpp"
#include "tumble/mesh.hpp"
#include "tumble/optimize.hpp"
#include "tumble/solver.hpp"

namespace tumble {

struct GridConfig {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n_points = 0;
  double cfl_safety = kDefaultCflSafety;
};

/// One additive piece of hand-specified initial data (same in both velocities
/// unless `velocity` is +1 or -1).
struct InitialPiece {
  enum class Kind { Gaussian, Plateau } kind = Kind::Gaussian;
  double center = 0.0;
  double sigma = 0.1;    // gaussian
  double cutoff = 6.0;   // gaussian, in units of sigma
  double lo = 0.0;       // plateau
  double hi = 0.0;       // plateau
  double amplitude = 1.0;
  int velocity = 0;
};

struct DetectorSpec {
  enum class Kind { Indicator, Mollified } kind = Kind::Indicator;
  double center = 0.0;
  double half_width = 0.0;  // indicator
  double amplitude = 0.0;   // indicator; <= 0 means 1/(2 half_width)
  double eta = 0.0;         // mollified
};

/// Experiment laid out by hand rather than by the design rule.
struct ManualSetup {
  double final_time = 0.0;
  std::vector<double> breakpoints;
  std::vector<InitialPiece> initial;
  std::vector<DetectorSpec> detectors;
};

struct DesignSetup {
  std::size_t cells = 0;
  Interval domain{0.0, 1.0};
  DesignOptions options;
  /// When set, used verbatim instead of the bisection (for `design validate`).
  std::optional<DesignSpec> explicit_spec;
};

struct StepConfig {
  enum class Policy { Spectral, Fixed, Override } policy = Policy::Spectral;
  /// Spectral reference: "k_star" or "k0".
  std::string at = "k_star";
  double eta = 0.0;
};

struct OptimizerSettings {
  std::size_t max_iters = 2000;
  double tol_grad = 1e-10;
  double tol_loss = 1e-14;
  bool projection = true;
  double spectral_eps = 1e-8;
  StepConfig step;
};

struct LandscapeSettings {
  std::vector<std::size_t> cells;  // 1-based
  std::size_t points = 41;
  double half_range = 0.5;
};

struct EigmapSettings {
  std::size_t points = 21;
  double lo = 0.0;
  double hi = 1.0;
  /// Flat parameter indices of the two swept axes (0-based).
  std::size_t axis_a = 0;
  std::size_t axis_b = 3;
};

struct IllcondSettings {
  std::size_t moved_measurement = 0;  // 0-based detector index
  std::size_t reference_cell = 0;     // c_1 is this cell's centre
  std::vector<double> offsets{-1.0, 0.5, 0.8, 1.0};  // x_1 = c_1 + offset * T
  std::size_t fallback_position = 2;  // whose step replaces a degenerate one
  double rank_tol = 1e-8;
};

struct ExperimentConfig {
  std::string scenario;
  std::string label;
  GridConfig grid;
  double C_K = 1.0;
  SolverOptions solver;
  std::vector<CellRates> k_star;
  std::optional<DesignSetup> design;
  std::optional<ManualSetup> manual;
  /// K0 = scale * K_star unless explicit values are given.
  double initial_scale = 1.2;
  std::vector<double> initial_values;
  OptimizerSettings optimizer;
  LandscapeSettings landscape;
  EigmapSettings eigmap;
  IllcondSettings illcond;
  unsigned threads = 1;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace tumble
