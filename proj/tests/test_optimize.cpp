#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tumble/design.hpp"
#include "tumble/error.hpp"
#include "tumble/optimize.hpp"

using namespace tumble;

namespace {

struct DesignFixture {
  Design design;
  InverseProblem problem;
  KernelVector k_star;
};

DesignFixture small_design(std::size_t cells = 2, std::size_t n = 1001) {
  SpaceGrid g(0.0, 1.0, n);
  Design d = build_design(cells, {0.0, 1.0}, 1.0, g);
  KernelVector ks;
  for (std::size_t r = 0; r < cells; ++r) {
    ks.push_back(0.3 + 0.1 * static_cast<double>(r));
    ks.push_back(0.7 - 0.05 * static_cast<double>(r));
  }
  TimeGrid t = build_time_grid(d.spec.final_time, g, 1.0);
  DataVector y = synthesize_data(unflatten(ks, d.spec.breakpoints), d.phi, d.measurements, g, t);
  InverseProblem p{g, t, d.spec.breakpoints, d.phi, d.measurements, y};
  return {d, p, ks};
}

KernelVector scaled(const KernelVector& k, double s) {
  KernelVector out = k;
  for (double& v : out) v *= s;
  return out;
}

}  // namespace

TEST_CASE("spectral step formula") {
  auto s = spectral_step_from(1.0, 4.0);
  REQUIRE(s.eta);
  CHECK(*s.eta == 0.125);
  const EigenResult e = eigen_sym(SymmetricMatrix::diagonal({4.0, 1.0}));
  CHECK(*spectral_step_from(e.min(), e.max()).eta == 0.125);
  CHECK(*spectral_step_from(1.0, 1.0).eta == 2.0);
  CHECK_FALSE(spectral_step_from(0.0, 3.0).eta);
  CHECK_FALSE(spectral_step_from(1e-9, 1.0).eta);
  CHECK_FALSE(spectral_step_from(-1.0, 1.0).eta);
}

TEST_CASE("starting at the ground truth stops immediately") {
  auto f = small_design();
  OptimizerConfig cfg;
  cfg.step = FixedStep{1.0};
  const RunHistory h = gd_run(f.problem, f.k_star, cfg);
  REQUIRE(h.records.size() == 1);
  CHECK(h.records[0].grad_norm == 0.0);
  CHECK(h.records[0].k == f.k_star);
}

TEST_CASE("design run converges geometrically") {
  auto f = small_design();
  OptimizerConfig cfg;
  cfg.step = SpectralAt{f.k_star};
  cfg.tol_loss = 1e-28;
  cfg.tol_grad = 1e-300;
  const KernelVector k0 = scaled(f.k_star, 1.2);
  const RunHistory h = gd_run(f.problem, k0, cfg);
  CHECK(h.records.front().k == k0);
  CHECK(h.reason == StopReason::LossTolerance);
  CHECK(h.projections == 0);
  for (std::size_t i = 1; i < h.records.size(); ++i) {
    CHECK(h.records[i].loss <= h.records[i - 1].loss);
    CHECK(h.records[i].iter == h.records[i - 1].iter + 1);
  }
  for (std::size_t i = 0; i < k0.size(); ++i) CHECK(std::abs(h.last().k[i] - f.k_star[i]) < 1e-6);
  const auto fit = fit_log_loss(h, h.records.size() / 2, h.records.size());
  CHECK(fit.slope < -0.05);
  CHECK(fit.r_squared >= 0.9);
  CHECK(loss(f.problem, h.last().k).value == h.last().loss);
}

TEST_CASE("degenerate spectra") {
  auto f = small_design();
  InverseProblem p = f.problem;
  // both detectors of the first cell at the same place
  p.measurements.functions[0] = p.measurements.functions[1];
  p.data = synthesize_data(p.field(f.k_star), p.phi, p.measurements, p.grid, p.tgrid);
  OptimizerConfig cfg;
  cfg.step = SpectralAt{f.k_star};
  cfg.spectral_eps = 1e-6;
  CHECK_THROWS_AS(gd_run(p, scaled(f.k_star, 1.2), cfg), DegenerateSpectrum);

  const auto ok = spectral_step(f.problem, f.k_star);
  REQUIRE(ok.eta);
  cfg.step = OverrideStep{*ok.eta};
  cfg.max_iters = 300;
  cfg.tol_loss = 1e-300;
  cfg.tol_grad = 1e-300;
  const RunHistory h = gd_run(p, scaled(f.k_star, 1.2), cfg);
  const double offset = std::hypot(h.last().k[0] - f.k_star[0], h.last().k[1] - f.k_star[1]);
  CHECK(offset > 1e-3);
  CHECK(h.last().loss < 1e-3 * h.records.front().loss);
  // the second cell is unaffected
  CHECK(std::abs(h.last().k[2] - f.k_star[2]) < 1e-6);
}

TEST_CASE("projection and divergence") {
  auto f = small_design();
  OptimizerConfig cfg;
  cfg.step = FixedStep{1e300};
  cfg.max_iters = 5;
  InverseProblem p = f.problem;
  p.solver.coupling = CollisionCoupling::Explicit;
  p.data = synthesize_data(p.field(f.k_star), p.phi, p.measurements, p.grid, p.tgrid, p.solver);
  const KernelVector k0 = scaled(f.k_star, 1.2);
  try {
    gd_run(p, k0, cfg);
    FAIL("expected divergence");
  } catch (const Divergence& d) {
    CHECK(d.last_good().size() == k0.size());
  }
  cfg.step = FixedStep{1e12};
  cfg.max_iters = 3;
  const RunHistory h = gd_run(f.problem, k0, cfg);
  CHECK(h.projections > 0);
  for (const auto& r : h.records)
    for (double v : r.k) CHECK(v >= 0.0);
}

TEST_CASE("optimizer argument checks") {
  auto f = small_design();
  OptimizerConfig cfg;
  cfg.step = FixedStep{1.0};
  CHECK_THROWS_AS(gd_run(f.problem, {1.0}, cfg), InvalidArgument);
  CHECK_THROWS_AS(gd_run(f.problem, {-0.1, 0.2, 0.3, 0.4}, cfg), InvalidArgument);
  cfg.tol_loss = 0.0;
  CHECK_THROWS_AS(gd_run(f.problem, f.k_star, cfg), InvalidArgument);
  cfg.tol_loss = 1e-14;
  cfg.step = FixedStep{-1.0};
  CHECK_THROWS_AS(gd_run(f.problem, f.k_star, cfg), InvalidArgument);
  cfg.step = FixedStep{1.0};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(gd_run(f.problem, f.k_star, cfg), InvalidArgument);
}

TEST_CASE("log-linear fit") {
  RunHistory h;
  for (std::size_t i = 0; i < 20; ++i) h.records.push_back({i, std::pow(0.5, static_cast<double>(i)), 0, 0, {}});
  const auto fit = fit_log_loss(h, 0, 20);
  CHECK(fit.slope == doctest::Approx(std::log(0.5)));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_log_loss(h, 5, 6), InvalidArgument);
}
