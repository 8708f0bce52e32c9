#include "tumble/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tumble/error.hpp"
#include "tumble/parallel.hpp"

namespace tumble {

DataVector synthesize_data(const KernelField& k_star, const PhaseField& phi,
                           const MeasurementSet& measurements, const SpaceGrid& grid,
                           const TimeGrid& tgrid, const SolverOptions& opts) {
  const PhaseTrajectory traj = forward_solve(grid, tgrid, k_star, phi, opts);
  return measure_all(traj.back(), measurements, grid);
}

LossResult loss(const InverseProblem& problem, const KernelVector& k) {
  LossResult out;
  out.trajectory = forward_solve(problem.grid, problem.tgrid, problem.field(k), problem.phi,
                                 problem.solver);
  const auto m = measure_all(out.trajectory.back(), problem.measurements, problem.grid);
  if (m.size() != problem.data.size()) {
    throw InvalidArgument("loss: " + std::to_string(problem.data.size()) + " data for " +
                          std::to_string(m.size()) + " measurements");
  }
  out.residuals.resize(m.size());
  double s = 0.0;
  for (std::size_t l = 0; l < m.size(); ++l) {
    out.residuals[l] = m[l] - problem.data[l];
    s += out.residuals[l] * out.residuals[l];
  }
  out.value = s / (2.0 * static_cast<double>(m.size()));
  return out;
}

GradientVector pair_states(const SpaceGrid& grid, const TimeGrid& tgrid, const KernelField& field,
                           const PhaseTrajectory& f, const PhaseTrajectory& g) {
  const NodeRates owners = node_rates(field, grid);
  GradientVector grad(2 * field.cells(), 0.0);
  for (std::size_t n = 0; n <= tgrid.steps(); ++n) {
    const double wt = tgrid.weight(n);
    const PhaseField& fn = f[n];
    const PhaseField& gn = g[n];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double diff = gn.minus[j] - gn.plus[j];
      if (diff == 0.0) continue;
      const double w = wt * grid.weight(j);
      const std::size_t r = owners.cell[j];
      // (r,1): K(+1,-1) moves mass out of v=-1; (r,2): K(-1,+1) out of v=+1
      grad[2 * r] += w * fn.minus[j] * diff;
      grad[2 * r + 1] -= w * fn.plus[j] * diff;
    }
  }
  return grad;
}

Evaluation evaluate(const InverseProblem& problem, const KernelVector& k) {
  LossResult l = loss(problem, k);
  Evaluation out;
  out.loss = l.value;
  out.residuals = l.residuals;
  const bool at_truth =
      std::all_of(l.residuals.begin(), l.residuals.end(), [](double r) { return r == 0.0; });
  if (at_truth) {
    out.gradient.assign(problem.parameters(), 0.0);
    return out;
  }
  const KernelField field = problem.field(k);
  const PhaseField psi = aggregate_final_condition(problem.measurements, l.residuals);
  const PhaseTrajectory g =
      adjoint_solve(problem.grid, problem.tgrid, field, psi, problem.solver);
  out.gradient = pair_states(problem.grid, problem.tgrid, field, l.trajectory, g);
  return out;
}

GradientVector gradient(const InverseProblem& problem, const KernelVector& k) {
  return evaluate(problem, k).gradient;
}

GradientVector measurement_gradient(const InverseProblem& problem, const KernelVector& k,
                                    const PhaseTrajectory& forward, std::size_t l) {
  if (l >= problem.measurements.size()) throw InvalidArgument("measurement_gradient: bad index");
  const KernelField field = problem.field(k);
  std::vector<double> neg(problem.grid.size());
  const auto& mu = problem.measurements.functions[l].samples;
  for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -mu[j];
  const PhaseField psi = PhaseField::isotropic(neg);
  if (psi.empty()) return GradientVector(problem.parameters(), 0.0);
  const PhaseTrajectory g = adjoint_solve(problem.grid, problem.tgrid, field, psi, problem.solver);
  return pair_states(problem.grid, problem.tgrid, field, forward, g);
}

GradientVector measurement_gradient(const InverseProblem& problem, const KernelVector& k,
                                    std::size_t l) {
  const PhaseTrajectory f =
      forward_solve(problem.grid, problem.tgrid, problem.field(k), problem.phi, problem.solver);
  return measurement_gradient(problem, k, f, l);
}

std::vector<GradientVector> measurement_gradients(const InverseProblem& problem,
                                                  const KernelVector& k, unsigned threads) {
  const PhaseTrajectory f =
      forward_solve(problem.grid, problem.tgrid, problem.field(k), problem.phi, problem.solver);
  return parallel_map(problem.measurements.size(), threads,
                      [&](std::size_t l) { return measurement_gradient(problem, k, f, l); });
}

SymmetricMatrix gauss_newton_hessian(const InverseProblem& problem, const KernelVector& k,
                                     unsigned threads) {
  const auto grads = measurement_gradients(problem, k, threads);
  const std::size_t n = problem.parameters();
  SymmetricMatrix h(n);
  const double scale = 1.0 / static_cast<double>(grads.size());
  for (const auto& g : grads) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) h.add(i, j, scale * g[i] * g[j]);
    }
  }
  return h;
}

namespace {

struct Stencil {
  double minus_step;  // distance to the lower sample (0 for one-sided)
  double plus_step;
};

Stencil stencil(double kj, double h_rule) {
  const double h = h_rule * (1.0 + std::abs(kj));
  if (kj - h >= 0.0) return {h, h};
  if (kj > 0.0) return {kj, kj};
  return {0.0, h};
}

}  // namespace

FdHessian fd_hessian(const InverseProblem& problem, const KernelVector& k, double h_rule,
                     unsigned threads) {
  const std::size_t n = problem.parameters();
  std::vector<Stencil> steps(n);
  for (std::size_t j = 0; j < n; ++j) steps[j] = stencil(k[j], h_rule);
  // 2n independent gradient evaluations, index 2j = lower, 2j+1 = upper
  const auto grads = parallel_map(2 * n, threads, [&](std::size_t idx) {
    const std::size_t j = idx / 2;
    KernelVector kk = k;
    kk[j] += (idx % 2 == 0) ? -steps[j].minus_step : steps[j].plus_step;
    return gradient(problem, kk);
  });
  std::vector<double> rows(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double width = steps[j].minus_step + steps[j].plus_step;
    for (std::size_t i = 0; i < n; ++i) {
      // column j
      rows[i * n + j] = (grads[2 * j + 1][i] - grads[2 * j][i]) / width;
    }
  }
  double defect = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      defect = std::max(defect, std::abs(rows[i * n + j] - rows[j * n + i]));
      scale = std::max(scale, std::abs(rows[i * n + j]));
    }
  }
  FdHessian out{SymmetricMatrix::symmetrized(n, std::move(rows)), 0.0};
  out.symmetry_defect = scale > 0.0 ? defect / scale : 0.0;
  return out;
}

GradientVector fd_gradient(const InverseProblem& problem, const KernelVector& k, double h_rule) {
  GradientVector out(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const Stencil s = stencil(k[j], h_rule);
    KernelVector lo = k, hi = k;
    lo[j] -= s.minus_step;
    hi[j] += s.plus_step;
    out[j] = (loss(problem, hi).value - loss(problem, lo).value) / (s.minus_step + s.plus_step);
  }
  return out;
}

double measurement_gradient_bound(std::size_t cells, double C_phi, double C_mu, double C_K,
                                  double final_time) noexcept {
  return std::sqrt(2.0 * static_cast<double>(cells)) * 2.0 * C_phi * C_mu *
         std::exp(2.0 * C_K * 2.0 * final_time) * final_time;
}

double l2_norm(const std::vector<double>& v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double relative_l2_error(const std::vector<double>& approx, const std::vector<double>& exact) {
  if (approx.size() != exact.size()) throw InvalidArgument("relative_l2_error: size mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) num += (approx[i] - exact[i]) * (approx[i] - exact[i]);
  const double den = l2_norm(exact);
  return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

}  // namespace tumble
