#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "tumble/calculus.hpp"

namespace tumble {

/// eta = 2 lambda_min / lambda_max^2 of the Hessian at `reference`, computed once.
struct SpectralAt {
  KernelVector reference;
};
struct FixedStep {
  double eta = 0.0;
};
/// Step supplied by the caller after a degenerate spectrum.
struct OverrideStep {
  double eta = 0.0;
};
using StepPolicy = std::variant<SpectralAt, FixedStep, OverrideStep>;

struct OptimizerConfig {
  std::size_t max_iters = 2000;
  StepPolicy step = FixedStep{1.0};
  double tol_grad = 1e-10;
  double tol_loss = 1e-14;
  bool projection = true;
  double spectral_eps = 1e-8;
  unsigned threads = 1;
};

struct IterationRecord {
  std::size_t iter = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double eta = 0.0;
  KernelVector k;
};

enum class StopReason { MaxIters, GradTolerance, LossTolerance };

struct RunHistory {
  std::vector<IterationRecord> records;
  StopReason reason = StopReason::MaxIters;
  /// Number of components clamped to zero over the whole run.
  std::size_t projections = 0;

  const IterationRecord& last() const { return records.back(); }
};

struct SpectralStep {
  std::optional<double> eta;  // empty when the spectrum is degenerate
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Step size from already computed extreme eigenvalues.
SpectralStep spectral_step_from(double lambda_min, double lambda_max, double eps = 1e-8) noexcept;

/// eta = 2 lambda_min / lambda_max^2 of eigen_sym(fd_hessian(K_ref)).
SpectralStep spectral_step(const InverseProblem& problem, const KernelVector& k_ref,
                           double eps = 1e-8, unsigned threads = 1);

/// Gradient descent K <- P(K - eta grad C(K)). Throws DegenerateSpectrum when a
/// SpectralAt policy yields no step and Divergence on a non-finite loss.
RunHistory gd_run(const InverseProblem& problem, const KernelVector& k0,
                  const OptimizerConfig& config);

/// Least-squares slope and R^2 of log(loss) against iteration over records
/// [first, last).
struct LogLinearFit {
  double slope = 0.0;
  double r_squared = 0.0;
};
LogLinearFit fit_log_loss(const RunHistory& history, std::size_t first, std::size_t last);

}  // namespace tumble
