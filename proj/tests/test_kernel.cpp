#include <doctest.h>

#include <random>

#include "tumble/error.hpp"
#include "tumble/kernel.hpp"

using namespace tumble;

TEST_CASE("cell index is half open") {
  KernelField f({0.0, 0.5, 1.0}, {{1, 0}, {0, 1}});
  CHECK(f.cell_index(0.25) == 0);
  CHECK(f.cell_index(0.5) == 1);
  CHECK(f.cell_index(0.0) == 0);
  CHECK_THROWS_AS(f.cell_index(1.0), OutOfDomain);
  CHECK_THROWS_AS(f.cell_index(-0.1), OutOfDomain);
  CHECK(f.owning_cell(-3.0) == 0);
  CHECK(f.owning_cell(7.0) == 1);
}

TEST_CASE("rates at a position") {
  KernelField one = KernelField::constant(0.0, 1.0, {2, 3});
  CHECK(one.rates_at(0.3) == CellRates{2, 3});
  KernelField flat = KernelField::uniform(-1.0, 1.0, {{0.7, 0.7}, {0.7, 0.7}, {0.7, 0.7}});
  for (double x : {-1.0, -0.2, 0.1, 0.99}) CHECK(flat.rates_at(x) == CellRates{0.7, 0.7});
  KernelField two({0.0, 0.5, 1.0}, {{1, 0}, {0, 1}});
  CHECK(two.rates_at(0.75) == CellRates{0, 1});
  CHECK(two.max_rate() == 1.0);
}

TEST_CASE("rates are constant inside each cell") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<CellRates> v(6);
  for (auto& c : v) c = {u(rng), u(rng)};
  KernelField f = KernelField::uniform(0.0, 3.0, v);
  std::uniform_real_distribution<double> x(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = x(rng);
    const std::size_t r = f.cell_index(a);
    const double b = 0.5 * r + 0.5 * (a - 0.5 * r) * 0.999;  // another point of the same cell
    CHECK(f.cell_index(b) == r);
    CHECK(f.rates_at(a) == f.rates_at(b));
  }
}

TEST_CASE("flatten and unflatten") {
  CHECK(flatten(KernelField::constant(0, 1, {0.25, 0.5})) == KernelVector{0.25, 0.5});
  KernelField two({0.0, 0.5, 1.0}, {{1, 2}, {3, 4}});
  CHECK(flatten(two) == KernelVector{1, 2, 3, 4});
  CHECK(unflatten(flatten(two), two.breakpoints()) == two);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CellRates> v(1 + trial % 7);
    for (auto& c : v) c = {u(rng), u(rng)};
    KernelField f = KernelField::uniform(-2.0, 5.0, v);
    CHECK(unflatten(flatten(f), f.breakpoints()) == f);
  }
  CHECK_THROWS_AS(unflatten(KernelVector{1, 2, 3}, {0.0, 0.5, 1.0}), InvalidArgument);
}

TEST_CASE("kernel construction errors") {
  CHECK_THROWS_AS(KernelField({0.0, 1.0}, {{-1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(KernelField({0.0, 1.0, 0.5}, {{1, 0}, {1, 1}}), InvalidArgument);
  CHECK_THROWS_AS(KernelField({0.0, 1.0}, {}), InvalidArgument);
  CHECK_THROWS_AS(KernelField({0.0, 1.0}, {{1, 0}, {1, 1}}), InvalidArgument);
}

TEST_CASE("breakpoints must sit on nodes") {
  SpaceGrid g(0.0, 1.0, 101);
  CHECK_NOTHROW(check_aligned(KernelField({0.0, 0.5, 1.0}, {{1, 1}, {1, 1}}), g));
  CHECK_THROWS_AS(check_aligned(KernelField({0.0, 0.505, 1.0}, {{1, 1}, {1, 1}}), g),
                  InvalidArgument);
  // within 1e-12 dx is accepted
  CHECK_NOTHROW(check_aligned(KernelField({0.0, 0.5 + 1e-16, 1.0}, {{1, 1}, {1, 1}}), g));
}

TEST_CASE("node rates follow the owning cell") {
  SpaceGrid g(-1.0, 2.0, 31);
  KernelField f({0.0, 0.5, 1.0}, {{1, 2}, {3, 4}});
  NodeRates nr = node_rates(f, g);
  CHECK(nr.k1[g.nearest_node(-1.0)] == 1);
  CHECK(nr.k1[g.nearest_node(0.5)] == 3);
  CHECK(nr.k2[g.nearest_node(0.4)] == 2);
  CHECK(nr.cell[g.nearest_node(2.0)] == 1);
}
