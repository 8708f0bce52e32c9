#include "tumble/optimize.hpp"

#include <cmath>
#include <string>

#include "tumble/error.hpp"

namespace tumble {

SpectralStep spectral_step_from(double lambda_min, double lambda_max, double eps) noexcept {
  SpectralStep s{std::nullopt, lambda_min, lambda_max};
  if (lambda_max > 0.0 && lambda_min > eps * lambda_max) {
    s.eta = 2.0 * lambda_min / (lambda_max * lambda_max);
  }
  return s;
}

SpectralStep spectral_step(const InverseProblem& problem, const KernelVector& k_ref, double eps,
                           unsigned threads) {
  const FdHessian h = fd_hessian(problem, k_ref, kHessianStepRule, threads);
  const EigenResult eig = eigen_sym(h.matrix);
  return spectral_step_from(eig.min(), eig.max(), eps);
}

namespace {

double resolve_step(const InverseProblem& problem, const OptimizerConfig& config) {
  return std::visit(
      [&](const auto& policy) -> double {
        using P = std::decay_t<decltype(policy)>;
        if constexpr (std::is_same_v<P, SpectralAt>) {
          const SpectralStep s =
              spectral_step(problem, policy.reference, config.spectral_eps, config.threads);
          if (!s.eta) {
            throw DegenerateSpectrum("spectral step: lambda_min = " + std::to_string(s.lambda_min) +
                                     " is not above eps * lambda_max = " +
                                     std::to_string(config.spectral_eps * s.lambda_max));
          }
          return *s.eta;
        } else {
          if (!(policy.eta > 0.0)) throw InvalidArgument("gd_run: step size must be positive");
          return policy.eta;
        }
      },
      config.step);
}

}  // namespace

RunHistory gd_run(const InverseProblem& problem, const KernelVector& k0,
                  const OptimizerConfig& config) {
  if (config.max_iters < 1) throw InvalidArgument("gd_run: max_iters must be at least 1");
  if (!(config.tol_grad > 0.0) || !(config.tol_loss > 0.0)) {
    throw InvalidArgument("gd_run: tolerances must be positive");
  }
  if (k0.size() != problem.parameters()) throw InvalidArgument("gd_run: wrong K0 length");
  for (double v : k0) {
    if (!(v >= 0.0)) throw InvalidArgument("gd_run: K0 must be nonnegative");
  }
  const double eta = resolve_step(problem, config);

  RunHistory history;
  KernelVector k = k0;
  for (std::size_t iter = 0;; ++iter) {
    const KernelVector& last_good = history.records.empty() ? k0 : history.last().k;
    Evaluation e;
    try {
      e = evaluate(problem, k);
    } catch (const Divergence& d) {
      throw Divergence("gd_run: iteration " + std::to_string(iter) + ": " + d.what(), last_good);
    }
    if (!std::isfinite(e.loss)) {
      throw Divergence("gd_run: non-finite loss at iteration " + std::to_string(iter), last_good);
    }
    const double gnorm = l2_norm(e.gradient);
    history.records.push_back({iter, e.loss, gnorm, eta, k});
    if (e.loss <= config.tol_loss) {
      history.reason = StopReason::LossTolerance;
      break;
    }
    if (gnorm <= config.tol_grad) {
      history.reason = StopReason::GradTolerance;
      break;
    }
    if (iter + 1 >= config.max_iters) {
      history.reason = StopReason::MaxIters;
      break;
    }
    for (std::size_t i = 0; i < k.size(); ++i) {
      k[i] -= eta * e.gradient[i];
      if (config.projection && k[i] < 0.0) {
        k[i] = 0.0;
        ++history.projections;
      }
      if (!std::isfinite(k[i])) {
        throw Divergence("gd_run: non-finite iterate after iteration " + std::to_string(iter),
                         history.last().k);
      }
    }
  }
  return history;
}

LogLinearFit fit_log_loss(const RunHistory& history, std::size_t first, std::size_t last) {
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < last && i < history.records.size(); ++i) {
    const double l = history.records[i].loss;
    if (l > 0.0) {
      xs.push_back(static_cast<double>(history.records[i].iter));
      ys.push_back(std::log(l));
    }
  }
  if (xs.size() < 2) throw InvalidArgument("fit_log_loss: need two positive losses");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LogLinearFit fit;
  fit.slope = sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace tumble
