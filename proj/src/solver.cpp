#include "tumble/solver.hpp"

#include <cmath>
#include <string>

#include "tumble/error.hpp"

namespace tumble {
namespace {

constexpr double kVelocityCount = 2.0;

// One Lax-Wendroff step at Courant number nu = v dt/dx with zero ghost nodes.
void lax_wendroff(const std::vector<double>& f, double nu, std::vector<double>& out) {
  const std::size_t n = f.size();
  const double a = 0.5 * nu;
  const double b = 0.5 * nu * nu;
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? f[j - 1] : 0.0;
    const double right = j + 1 < n ? f[j + 1] : 0.0;
    out[j] = f[j] - a * (right - left) + b * (right - 2.0 * f[j] + left);
  }
}

// exp(tau C) for the forward collision matrix, node by node.
void relax_forward(const NodeRates& k, double tau, PhaseField& f) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double s = k.k1[j] + k.k2[j];
    if (s == 0.0) continue;
    const double total = f.plus[j] + f.minus[j];
    const double p_eq = k.k1[j] / s * total;
    const double p = p_eq + (f.plus[j] - p_eq) * std::exp(-s * tau);
    f.plus[j] = p;
    f.minus[j] = total - p;
  }
}

// exp(tau C^T): k1 g_+ + k2 g_- is conserved and g_+ - g_- decays.
void relax_adjoint(const NodeRates& k, double tau, PhaseField& g) {
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = k.k1[j] + k.k2[j];
    if (s == 0.0) continue;
    const double w1 = k.k1[j] / s;
    const double w2 = k.k2[j] / s;
    const double mean = w1 * g.plus[j] + w2 * g.minus[j];
    const double diff = (g.plus[j] - g.minus[j]) * std::exp(-s * tau);
    g.plus[j] = mean + w2 * diff;
    g.minus[j] = mean - w1 * diff;
  }
}

void check_finite(const PhaseField& f, std::size_t step, const char* which) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!std::isfinite(f.plus[j]) || !std::isfinite(f.minus[j])) {
      throw Divergence(std::string(which) + ": non-finite state at step " + std::to_string(step));
    }
  }
}

void check_inputs(const SpaceGrid& grid, const TimeGrid& tgrid, const KernelField& field,
                  const PhaseField& data, const SolverOptions& opts, const char* which) {
  if (data.plus.size() != grid.size() || data.minus.size() != grid.size()) {
    throw InvalidArgument(std::string(which) + ": phase field length does not match grid");
  }
  check_aligned(field, grid);
  if (opts.enforce_containment && !data.empty() &&
      !support_margin_check(grid, data.support(grid), tgrid.final_time())) {
    const Interval s = data.support(grid);
    throw BoundaryContamination(std::string(which) + ": support [" + std::to_string(s.lo) + ", " +
                                std::to_string(s.hi) + "] dilated by T reaches the boundary");
  }
}

// Shared time loop. `sign` is +1 for the forward problem and -1 for the
// time-reversed adjoint; the adjoint transports at -v and uses C^T.
PhaseTrajectory march(const SpaceGrid& grid, const TimeGrid& tgrid, const KernelField& field,
                      const PhaseField& start, const SolverOptions& opts, bool adjoint) {
  const NodeRates k = node_rates(field, grid);
  const double dt = tgrid.dt();
  const double nu = dt / grid.dx();
  const double nu_plus = adjoint ? -nu : nu;
  const char* which = adjoint ? "adjoint_solve" : "forward_solve";

  PhaseTrajectory traj;
  traj.reserve(tgrid.steps() + 1);
  traj.push_back(start);
  PhaseField cur = start;
  PhaseField next(grid.size());
  for (std::size_t n = 0; n < tgrid.steps(); ++n) {
    if (opts.coupling == CollisionCoupling::Strang) {
      adjoint ? relax_adjoint(k, 0.5 * dt, cur) : relax_forward(k, 0.5 * dt, cur);
      lax_wendroff(cur.plus, nu_plus, next.plus);
      lax_wendroff(cur.minus, -nu_plus, next.minus);
      adjoint ? relax_adjoint(k, 0.5 * dt, next) : relax_forward(k, 0.5 * dt, next);
    } else {
      lax_wendroff(cur.plus, nu_plus, next.plus);
      lax_wendroff(cur.minus, -nu_plus, next.minus);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (adjoint) {
          const double d = cur.minus[j] - cur.plus[j];
          next.plus[j] += dt * k.k2[j] * d;
          next.minus[j] -= dt * k.k1[j] * d;
        } else {
          const auto [dp, dm] = collision(k.k1[j], k.k2[j], cur.plus[j], cur.minus[j]);
          next.plus[j] += dt * dp;
          next.minus[j] += dt * dm;
        }
      }
    }
    check_finite(next, n + 1, which);
    std::swap(cur, next);
    traj.push_back(cur);
  }
  return traj;
}

}  // namespace

PhaseTrajectory forward_solve(const SpaceGrid& grid, const TimeGrid& tgrid,
                              const KernelField& field, const PhaseField& phi,
                              const SolverOptions& opts) {
  check_inputs(grid, tgrid, field, phi, opts, "forward_solve");
  return march(grid, tgrid, field, phi, opts, false);
}

PhaseTrajectory adjoint_solve(const SpaceGrid& grid, const TimeGrid& tgrid,
                              const KernelField& field, const PhaseField& psi,
                              const SolverOptions& opts) {
  check_inputs(grid, tgrid, field, psi, opts, "adjoint_solve");
  PhaseTrajectory reversed = march(grid, tgrid, field, psi, opts, true);
  return PhaseTrajectory(std::make_move_iterator(reversed.rbegin()),
                         std::make_move_iterator(reversed.rend()));
}

PhaseField aggregate_final_condition(const MeasurementSet& measurements,
                                     std::span<const double> residuals) {
  if (residuals.size() != measurements.size()) {
    throw InvalidArgument("aggregate_final_condition: " + std::to_string(residuals.size()) +
                          " residuals for " + std::to_string(measurements.size()) +
                          " measurements");
  }
  if (measurements.size() == 0) throw InvalidArgument("aggregate_final_condition: empty set");
  const std::size_t n = measurements.functions.front().samples.size();
  const double scale = -1.0 / static_cast<double>(measurements.size());
  std::vector<double> psi(n, 0.0);
  for (std::size_t l = 0; l < measurements.size(); ++l) {
    if (residuals[l] == 0.0) continue;
    const auto& mu = measurements.functions[l].samples;
    for (std::size_t j = 0; j < n; ++j) psi[j] += mu[j] * residuals[l];
  }
  for (double& v : psi) v *= scale;
  return PhaseField::isotropic(psi);
}

double forward_sup_bound(double C_K, double t, double phi_sup) noexcept {
  return std::exp(2.0 * kVelocityCount * C_K * t) * phi_sup;
}

double adjoint_l1_bound(double C_K, double time_to_go, double psi_l1) noexcept {
  return std::exp(2.0 * kVelocityCount * C_K * time_to_go) * psi_l1;
}

}  // namespace tumble
