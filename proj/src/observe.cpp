#include "tumble/observe.hpp"

#include <algorithm>
#include <cmath>

#include "tumble/error.hpp"

namespace tumble {

double PhaseField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : plus) m = std::max(m, std::abs(v));
  for (double v : minus) m = std::max(m, std::abs(v));
  return m;
}

bool PhaseField::empty() const noexcept {
  auto zero = [](double v) { return v == 0.0; };
  return std::all_of(plus.begin(), plus.end(), zero) &&
         std::all_of(minus.begin(), minus.end(), zero);
}

Interval PhaseField::support(const SpaceGrid& grid) const {
  std::size_t lo = size(), hi = 0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (plus[j] != 0.0 || minus[j] != 0.0) {
      lo = std::min(lo, j);
      hi = j;
    }
  }
  if (lo == size()) {
    const double mid = 0.5 * (grid.x_min() + grid.x_max());
    return {mid, mid};
  }
  return {grid.x(lo), grid.x(hi)};
}

double PhaseField::mass(const SpaceGrid& grid) const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += (plus[j] + minus[j]) * grid.weight(j);
  return s;
}

double TestFunction::l1_norm(const SpaceGrid& grid) const noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) s += std::abs(samples[j]) * grid.weight(j);
  return s;
}

double standard_bump(double s) noexcept {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

TestFunction make_indicator(double center, double half_width, double amplitude,
                            const SpaceGrid& grid) {
  if (!(half_width >= grid.dx() * (1.0 - 1e-12))) {
    throw InvalidArgument("make_indicator: half width below grid spacing");
  }
  if (center - half_width < grid.x_min() || center + half_width > grid.x_max()) {
    throw InvalidArgument("make_indicator: support outside the grid");
  }
  const double tol = 1e-9 * grid.dx();
  TestFunction mu{std::vector<double>(grid.size(), 0.0),
                  IndicatorShape{center, half_width, amplitude}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::abs(grid.x(j) - center) <= half_width + tol) mu.samples[j] = amplitude;
  }
  return mu;
}

TestFunction make_mollified(double center, double eta, const SpaceGrid& grid) {
  if (!(eta >= 2.0 * grid.dx() * (1.0 - 1e-12))) {
    throw InvalidArgument("make_mollified: eta must be at least 2 dx");
  }
  if (center - eta < grid.x_min() || center + eta > grid.x_max()) {
    throw InvalidArgument("make_mollified: support outside the grid");
  }
  TestFunction mu{std::vector<double>(grid.size(), 0.0), MollifiedShape{center, eta}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    mu.samples[j] = standard_bump((grid.x(j) - center) / eta) / eta;
  }
  return mu;
}

TestFunction resample(const TestFunction& mu, const SpaceGrid& grid) {
  return std::visit(
      [&](const auto& d) -> TestFunction {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, IndicatorShape>) {
          return make_indicator(d.center, d.half_width, d.amplitude, grid);
        } else {
          return make_mollified(d.center, d.eta, grid);
        }
      },
      mu.descriptor);
}

double measure(const PhaseField& final_state, const TestFunction& mu, const SpaceGrid& grid) {
  double s = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (mu.samples[j] == 0.0) continue;
    s += (final_state.plus[j] + final_state.minus[j]) * mu.samples[j] * grid.weight(j);
  }
  return s;
}

double measure(const PhaseTrajectory& traj, const TestFunction& mu, const SpaceGrid& grid) {
  return measure(traj.back(), mu, grid);
}

std::vector<double> measure_all(const PhaseField& final_state, const MeasurementSet& set,
                                const SpaceGrid& grid) {
  std::vector<double> out;
  out.reserve(set.size());
  for (const auto& mu : set.functions) out.push_back(measure(final_state, mu, grid));
  return out;
}

}  // namespace tumble
