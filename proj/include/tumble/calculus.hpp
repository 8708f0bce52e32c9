#pragma once

#include <cstddef>
#include <vector>

#include "tumble/eigen.hpp"
#include "tumble/kernel.hpp"
#include "tumble/problem.hpp"

namespace tumble {

using GradientVector = std::vector<double>;

struct LossResult {
  double value = 0.0;
  std::vector<double> residuals;  // M_l(K) - y_l
  PhaseTrajectory trajectory;
};

/// (1/2L) sum_l (M_l(K) - y_l)^2 with the forward trajectory kept for reuse.
LossResult loss(const InverseProblem& problem, const KernelVector& k);

/// int_0^T int_{I_r} f(v')(g(v') - g(v)) dx dt from one forward and one
/// adjoint solve, trapezoid in time and space.
GradientVector gradient(const InverseProblem& problem, const KernelVector& k);

struct Evaluation {
  double loss = 0.0;
  std::vector<double> residuals;
  GradientVector gradient;
};

/// Loss and gradient sharing the forward solve.
Evaluation evaluate(const InverseProblem& problem, const KernelVector& k);

/// Pairs a forward and an adjoint trajectory into the cell-wise gradient.
GradientVector pair_states(const SpaceGrid& grid, const TimeGrid& tgrid, const KernelField& field,
                           const PhaseTrajectory& f, const PhaseTrajectory& g);

/// dM_l/dK from an adjoint solve with final condition -mu_l.
GradientVector measurement_gradient(const InverseProblem& problem, const KernelVector& k,
                                    std::size_t l);
GradientVector measurement_gradient(const InverseProblem& problem, const KernelVector& k,
                                    const PhaseTrajectory& forward, std::size_t l);

/// All L measurement gradients sharing one forward solve.
std::vector<GradientVector> measurement_gradients(const InverseProblem& problem,
                                                  const KernelVector& k, unsigned threads = 1);

/// (1/L) sum_l grad M_l (x) grad M_l.
SymmetricMatrix gauss_newton_hessian(const InverseProblem& problem, const KernelVector& k,
                                     unsigned threads = 1);

inline constexpr double kHessianStepRule = 1e-4;
inline constexpr double kGradientCheckStepRule = 1e-5;

struct FdHessian {
  SymmetricMatrix matrix;
  /// max |A - A^T| / max |A| before symmetrization.
  double symmetry_defect = 0.0;
};

/// Central differences of the adjoint gradient, h_j = h_rule (1 + |K_j|),
/// shrunk (or one-sided at zero) to stay in the nonnegative orthant.
FdHessian fd_hessian(const InverseProblem& problem, const KernelVector& k,
                     double h_rule = kHessianStepRule, unsigned threads = 1);

/// Central differences of the loss; oracle for the adjoint gradient.
GradientVector fd_gradient(const InverseProblem& problem, const KernelVector& k,
                           double h_rule = kGradientCheckStepRule);

/// sqrt(2R) 2 C_phi C_mu e^{2 C_K |V| T} T.
double measurement_gradient_bound(std::size_t cells, double C_phi, double C_mu, double C_K,
                                  double final_time) noexcept;

double l2_norm(const std::vector<double>& v) noexcept;
double relative_l2_error(const std::vector<double>& approx, const std::vector<double>& exact);

}  // namespace tumble
