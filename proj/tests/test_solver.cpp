#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tumble/error.hpp"
#include "tumble/solver.hpp"

using namespace tumble;

namespace {

double shift_error(std::size_t n) {
  SpaceGrid g(-2.0, 2.0, n);
  TimeGrid t = build_time_grid(0.5, g, 1.0);
  PhaseField phi = PhaseField::isotropic(fixture::gaussian(g, 0.0, 0.2, 7.0));
  auto traj = forward_solve(g, t, KernelField::constant(-2.0, 2.0, {0, 0}), phi);
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    err = std::max(err, std::abs(traj.back().plus[j] - std::exp(-0.5 * std::pow((x - 0.5) / 0.2, 2))));
    err = std::max(err, std::abs(traj.back().minus[j] - std::exp(-0.5 * std::pow((x + 0.5) / 0.2, 2))));
  }
  return err;
}

double pairing(const PhaseField& f, const PhaseField& g, const SpaceGrid& grid) {
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    s += (f.plus[j] * g.plus[j] + f.minus[j] * g.minus[j]) * grid.weight(j);
  }
  return s;
}

double l1(const std::vector<double>& v, const SpaceGrid& g) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += std::abs(v[j]) * g.weight(j);
  return s;
}

}  // namespace

TEST_CASE("collision increments") {
  CHECK(collision(0, 0, 3.0, -1.0) == std::pair{0.0, 0.0});
  CHECK(collision(1, 1, 2, 2) == std::pair{0.0, 0.0});
  CHECK(collision(1, 0, 0, 1) == std::pair{1.0, -1.0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 5);
  for (int i = 0; i < 100; ++i) {
    auto [dp, dm] = collision(u(rng), u(rng), u(rng), u(rng));
    CHECK(dp + dm == 0.0);
  }
}

TEST_CASE("free transport is a second order shift") {
  const double e1 = shift_error(401);
  const double e2 = shift_error(801);
  CHECK(e1 < 1e-3);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("flat plateau follows the two-state ODE") {
  SpaceGrid g(-3.0, 3.0, 601);
  const double T = 0.5, k = 0.8, a = 2.0, b = 0.5;
  std::vector<double> p(g.size(), 0.0), m(g.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (std::abs(g.x(j)) <= 1.5) {
      p[j] = a;
      m[j] = b;
    }
  }
  const std::size_t c = g.nearest_node(0.0);
  TimeGrid t = build_time_grid(T, g, 1.0);
  KernelField K = KernelField::constant(-3.0, 3.0, {k, k});
  SUBCASE("strang coupling") {
    auto traj = forward_solve(g, t, K, PhaseField(p, m));
    for (std::size_t n : {std::size_t{0}, t.steps() / 2, t.steps()}) {
      CHECK(traj[n].plus[c] == doctest::Approx(oracle::plateau_plus(a, b, k, t.t(n))).epsilon(1e-12));
      CHECK(traj[n].minus[c] == doctest::Approx(oracle::plateau_minus(a, b, k, t.t(n))).epsilon(1e-12));
    }
  }
  SUBCASE("explicit coupling is first order") {
    SolverOptions o{CollisionCoupling::Explicit, true};
    auto traj = forward_solve(g, t, K, PhaseField(p, m), o);
    const double exact = oracle::plateau_plus(a, b, k, T);
    const double err = std::abs(traj.back().plus[c] - exact);
    CHECK(err < 5.0 * k * k * t.dt() * std::abs(a - b));
    CHECK(err > 0.0);
  }
}

TEST_CASE("mass is conserved") {
  std::mt19937_64 rng(21);
  SpaceGrid g(-1.0, 2.0, 601);
  auto k = fixture::random_kernel(5, 0.0, 2.0, rng);
  auto bp = fixture::uniform_breakpoints(0.0, 1.0, 5);
  PhaseField phi(fixture::gaussian(g, 0.4, 0.1, 6.0), fixture::gaussian(g, 0.6, 0.07, 6.0));
  for (auto coupling : {CollisionCoupling::Strang, CollisionCoupling::Explicit}) {
    auto traj = forward_solve(g, build_time_grid(0.6, g, 2.0), unflatten(k, bp), phi, {coupling, true});
    const double m0 = traj.front().mass(g);
    for (const auto& f : traj) CHECK(std::abs(f.mass(g) - m0) <= 1e-12 * m0);
  }
}

TEST_CASE("forward states stay nonnegative for smooth data") {
  std::mt19937_64 rng(8);
  SpaceGrid g(-1.0, 2.0, 601);
  auto bp = fixture::uniform_breakpoints(0.0, 1.0, 4);
  PhaseField phi = PhaseField::isotropic(fixture::gaussian(g, 0.5, 0.1));
  auto traj = forward_solve(g, build_time_grid(0.5, g, 2.0), unflatten(fixture::random_kernel(4, 0, 2, rng), bp), phi);
  double lo = 0.0;
  for (const auto& f : traj) {
    for (std::size_t j = 0; j < g.size(); ++j) lo = std::min({lo, f.plus[j], f.minus[j]});
  }
  CHECK(lo >= -1e-8 * phi.max_abs());
}

TEST_CASE("solver preconditions") {
  SpaceGrid g(0.0, 1.0, 101);
  TimeGrid t = build_time_grid(0.3, g, 1.0);
  KernelField K = KernelField::constant(0.0, 1.0, {1, 1});
  SUBCASE("support too close to the boundary") {
    PhaseField phi = PhaseField::isotropic(fixture::gaussian(g, 0.5, 0.04, 4.0));
    CHECK_NOTHROW(forward_solve(g, t, K, phi));
    PhaseField wide = PhaseField::isotropic(fixture::gaussian(g, 0.5, 0.1, 4.0));
    CHECK_THROWS_AS(forward_solve(g, t, K, wide), BoundaryContamination);
    CHECK_THROWS_AS(adjoint_solve(g, t, K, wide), BoundaryContamination);
    CHECK_NOTHROW(forward_solve(g, t, K, wide, {CollisionCoupling::Strang, false}));
  }
  SUBCASE("non-finite state") {
    PhaseField phi = PhaseField::isotropic(fixture::gaussian(g, 0.5, 0.04, 4.0));
    phi.plus[50] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(forward_solve(g, t, K, phi), Divergence);
  }
  SUBCASE("explicit coupling blows up far beyond the collision limit") {
    PhaseField phi = PhaseField::isotropic(fixture::gaussian(g, 0.5, 0.04, 4.0));
    KernelField stiff = KernelField::constant(0.0, 1.0, {1e12, 1e12});
    CHECK_THROWS_AS(forward_solve(g, t, stiff, phi, {CollisionCoupling::Explicit, true}), Divergence);
  }
  SUBCASE("length and alignment") {
    CHECK_THROWS_AS(forward_solve(g, t, K, PhaseField(50)), InvalidArgument);
    KernelField off({0.0, 0.503, 1.0}, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(forward_solve(g, t, off, PhaseField(101)), InvalidArgument);
  }
}

TEST_CASE("adjoint: reversed free transport and zero data") {
  SpaceGrid g(-2.0, 2.0, 801);
  TimeGrid t = build_time_grid(0.5, g, 1.0);
  KernelField zero = KernelField::constant(-2.0, 2.0, {0, 0});
  PhaseField psi = PhaseField::isotropic(fixture::gaussian(g, 0.0, 0.2, 7.0));
  auto traj = adjoint_solve(g, t, zero, psi);
  REQUIRE(traj.size() == t.steps() + 1);
  CHECK(traj.back() == psi);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    // g(0, x, +1) = psi(x + T), g(0, x, -1) = psi(x - T)
    err = std::max(err, std::abs(traj.front().plus[j] - std::exp(-0.5 * std::pow((x + 0.5) / 0.2, 2))));
    err = std::max(err, std::abs(traj.front().minus[j] - std::exp(-0.5 * std::pow((x - 0.5) / 0.2, 2))));
  }
  CHECK(err < 1e-4);

  auto zero_traj = adjoint_solve(g, t, KernelField::constant(-2.0, 2.0, {1, 2}), PhaseField(g.size()));
  for (const auto& s : zero_traj) CHECK(s.empty());
}

TEST_CASE("forward and adjoint pairing is preserved") {
  std::mt19937_64 rng(99);
  for (auto coupling : {CollisionCoupling::Strang, CollisionCoupling::Explicit}) {
    for (std::size_t n : {301u, 601u}) {
      SpaceGrid g(-1.0, 2.0, n);
      TimeGrid t = build_time_grid(0.4, g, 2.0);
      auto bp = fixture::uniform_breakpoints(0.0, 1.0, 4);
      KernelField K = unflatten(fixture::random_kernel(4, 0.2, 2.0, rng), bp);
      PhaseField f0(fixture::gaussian(g, 0.3, 0.08), fixture::gaussian(g, 0.7, 0.1));
      PhaseField psi(fixture::gaussian(g, 0.6, 0.1), fixture::gaussian(g, 0.2, 0.05));
      SolverOptions o{coupling, true};
      auto f = forward_solve(g, t, K, f0, o);
      auto gt = adjoint_solve(g, t, K, psi, o);
      const double p0 = pairing(f.front(), gt.front(), g);
      const double pT = pairing(f.back(), gt.back(), g);
      CHECK(std::abs(p0 - pT) <= 1e-12 * std::abs(pT));
      for (std::size_t k = 0; k <= t.steps(); k += 7) {
        CHECK(std::abs(pairing(f[k], gt[k], g) - pT) <= 1e-12 * std::abs(pT));
      }
    }
  }
}

TEST_CASE("final condition aggregation") {
  SpaceGrid g(0.0, 1.0, 101);
  MeasurementSet ms{{make_indicator(0.5, 0.1, 1.0, g), make_indicator(0.5, 0.1, 1.0, g)}, 0.1};
  CHECK(aggregate_final_condition(ms, std::vector<double>{0, 0}).empty());
  CHECK(aggregate_final_condition(ms, std::vector<double>{1, -1}).empty());
  MeasurementSet one{{make_indicator(0.5, 0.1, 1.0, g)}, 0.1};
  PhaseField psi = aggregate_final_condition(one, std::vector<double>{1.0});
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(psi.plus[j] == -one.functions[0].samples[j]);
    CHECK(psi.minus[j] == psi.plus[j]);
  }
  CHECK_THROWS_AS(aggregate_final_condition(one, std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST_CASE("a priori bounds on random instances") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double C_K = 0.5 + 2.0 * u(rng);
    SpaceGrid g(-1.0, 2.0, 301);
    TimeGrid t = build_time_grid(0.5, g, C_K);
    auto bp = fixture::uniform_breakpoints(0.0, 1.0, 4);
    KernelField K = unflatten(fixture::random_kernel(4, 0.0, C_K, rng), bp);
    PhaseField phi(fixture::gaussian(g, 0.3 + 0.4 * u(rng), 0.1), fixture::gaussian(g, 0.5, 0.05));
    auto f = forward_solve(g, t, K, phi);
    for (std::size_t n = 0; n <= t.steps(); ++n) {
      CHECK(f[n].max_abs() <= 1.01 * forward_sup_bound(C_K, t.t(n), phi.max_abs()));
    }
    auto prof = fixture::gaussian(g, 0.5, 0.1);
    const auto neg = fixture::gaussian(g, 0.4, 0.05);
    for (std::size_t j = 0; j < prof.size(); ++j) prof[j] -= 1.5 * neg[j];
    PhaseField psi = PhaseField::isotropic(prof);
    auto gt = adjoint_solve(g, t, K, psi);
    for (std::size_t n = 0; n <= t.steps(); ++n) {
      const double tau = t.final_time() - t.t(n);
      CHECK(l1(gt[n].plus, g) <= 1.01 * adjoint_l1_bound(C_K, tau, l1(psi.plus, g)));
      CHECK(l1(gt[n].minus, g) <= 1.01 * adjoint_l1_bound(C_K, tau, l1(psi.minus, g)));
    }
  }
}
