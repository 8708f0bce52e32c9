#pragma once

#include <cstddef>

namespace tumble {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Uniform node-centred mesh of [x_min, x_max].
class SpaceGrid {
 public:
  SpaceGrid(double x_min, double x_max, std::size_t n_points);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  std::size_t size() const noexcept { return n_points_; }
  double dx() const noexcept { return dx_; }

  /// Node position; the last node is x_max exactly.
  double x(std::size_t j) const noexcept {
    return j + 1 == n_points_ ? x_max_ : x_min_ + static_cast<double>(j) * dx_;
  }

  /// Index of the node nearest to `pos` (clamped to the grid).
  std::size_t nearest_node(double pos) const noexcept;

  /// True if `pos` lies on a node to within `rel_tol * dx`.
  bool is_node(double pos, double rel_tol = 1e-12) const noexcept;

  /// Trapezoid weight of node j (dx inside, dx/2 at the two window ends).
  double weight(std::size_t j) const noexcept {
    return (j == 0 || j + 1 == n_points_) ? 0.5 * dx_ : dx_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

class TimeGrid {
 public:
  TimeGrid(double final_time, std::size_t n_steps);

  double final_time() const noexcept { return final_time_; }
  std::size_t steps() const noexcept { return n_steps_; }
  double dt() const noexcept { return dt_; }
  double t(std::size_t n) const noexcept {
    return n == n_steps_ ? final_time_ : static_cast<double>(n) * dt_;
  }
  /// Trapezoid weight of time node n.
  double weight(std::size_t n) const noexcept {
    return (n == 0 || n == n_steps_) ? 0.5 * dt_ : dt_;
  }

 private:
  double final_time_;
  std::size_t n_steps_;
  double dt_;
};

inline constexpr double kDefaultCflSafety = 0.9;

/// Time mesh obeying dt <= cfl_safety * min(dx, 1/C_K) (|v| = 1).
TimeGrid build_time_grid(double final_time, const SpaceGrid& grid, double C_K,
                         double cfl_safety = kDefaultCflSafety);

/// True iff [lo - T, hi + T] lies strictly inside (x_min, x_max).
bool support_margin_check(const SpaceGrid& grid, Interval support, double final_time);

}  // namespace tumble
