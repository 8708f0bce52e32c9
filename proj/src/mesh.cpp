#include "tumble/mesh.hpp"

#include <cmath>
#include <string>

#include "tumble/error.hpp"

namespace tumble {

SpaceGrid::SpaceGrid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw InvalidArgument("SpaceGrid: need finite x_min < x_max");
  }
  if (n_points < 3) {
    throw InvalidArgument("SpaceGrid: need at least 3 points, got " + std::to_string(n_points));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

std::size_t SpaceGrid::nearest_node(double pos) const noexcept {
  const double s = std::round((pos - x_min_) / dx_);
  if (s <= 0.0) return 0;
  if (s >= static_cast<double>(n_points_ - 1)) return n_points_ - 1;
  return static_cast<std::size_t>(s);
}

bool SpaceGrid::is_node(double pos, double rel_tol) const noexcept {
  if (pos < x_min_ - rel_tol * dx_ || pos > x_max_ + rel_tol * dx_) return false;
  return std::abs(x(nearest_node(pos)) - pos) <= rel_tol * dx_;
}

TimeGrid::TimeGrid(double final_time, std::size_t n_steps)
    : final_time_(final_time), n_steps_(n_steps), dt_(0.0) {
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw InvalidArgument("TimeGrid: final time must be positive");
  }
  if (n_steps == 0) throw InvalidArgument("TimeGrid: need at least one step");
  dt_ = final_time / static_cast<double>(n_steps);
}

TimeGrid build_time_grid(double final_time, const SpaceGrid& grid, double C_K,
                         double cfl_safety) {
  if (!(final_time > 0.0)) throw InvalidArgument("build_time_grid: T must be positive");
  if (!(C_K > 0.0)) throw InvalidArgument("build_time_grid: C_K must be positive");
  if (!(cfl_safety > 0.0) || cfl_safety > 1.0) {
    throw InvalidArgument("build_time_grid: cfl_safety must lie in (0, 1]");
  }
  const double limit = cfl_safety * std::min(grid.dx(), 1.0 / C_K);
  const double ratio = final_time / limit;
  auto n_steps = static_cast<std::size_t>(std::ceil(ratio));
  // ceil of a ratio that is an integer up to round-off must not add a step
  if (n_steps > 1 && std::abs(ratio - static_cast<double>(n_steps - 1)) <= 1e-12 * ratio) {
    --n_steps;
  }
  TimeGrid tg(final_time, std::max<std::size_t>(n_steps, 1));
  if (tg.dt() > limit * (1.0 + 1e-12)) {
    TimeGrid bumped(final_time, tg.steps() + 1);
    return bumped;
  }
  return tg;
}

bool support_margin_check(const SpaceGrid& grid, Interval support, double final_time) {
  return support.lo - final_time > grid.x_min() && support.hi + final_time < grid.x_max();
}

}  // namespace tumble
