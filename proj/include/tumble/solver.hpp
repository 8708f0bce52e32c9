#pragma once

#include <span>
#include <utility>

#include "tumble/kernel.hpp"
#include "tumble/mesh.hpp"
#include "tumble/observe.hpp"
#include "tumble/phase.hpp"

namespace tumble {

/// How the tumbling operator is coupled to the Lax-Wendroff transport step.
enum class CollisionCoupling {
  /// f <- LW(f) + dt * K(f_old): first order in time.
  Explicit,
  /// exact collision over dt/2, LW, exact collision over dt/2: second order.
  Strang,
};

struct SolverOptions {
  CollisionCoupling coupling = CollisionCoupling::Strang;
  /// Refuse to run when the support plus T reaches the truncation boundary.
  bool enforce_containment = true;
};

/// Tumbling increments of the two-velocity system; dp + dm == 0.
inline std::pair<double, double> collision(double k1, double k2, double fp, double fm) noexcept {
  const double dp = k1 * fm - k2 * fp;
  return {dp, -dp};
}

/// f(t_n) for n = 0..N, starting from phi.
PhaseTrajectory forward_solve(const SpaceGrid& grid, const TimeGrid& tgrid,
                              const KernelField& field, const PhaseField& phi,
                              const SolverOptions& opts = {});

/// Adjoint state g(t_n) for n = 0..N with g(t_N) = psi, solving
/// -g_t - v g_x = K~(g) backward in time. Uses the time-reversed forward scheme,
/// which is the transpose of the forward step for either coupling.
PhaseTrajectory adjoint_solve(const SpaceGrid& grid, const TimeGrid& tgrid,
                              const KernelField& field, const PhaseField& psi,
                              const SolverOptions& opts = {});

/// psi(x) = -(1/L) sum_l mu_l(x) r_l, identical in both velocities.
PhaseField aggregate_final_condition(const MeasurementSet& measurements,
                                     std::span<const double> residuals);

/// e^{2|V| C_K t} * sup|phi| with |V| = 2.
double forward_sup_bound(double C_K, double t, double phi_sup) noexcept;
/// e^{2|V| C_K (T - t)} * ||psi||_{L1} with |V| = 2.
double adjoint_l1_bound(double C_K, double time_to_go, double psi_l1) noexcept;

}  // namespace tumble
