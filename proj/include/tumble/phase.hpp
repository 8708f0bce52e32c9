#pragma once

#include <cstddef>
#include <vector>

#include "tumble/mesh.hpp"

namespace tumble {

/// Densities at v = +1 and v = -1 on every grid node.
struct PhaseField {
  std::vector<double> plus;
  std::vector<double> minus;

  PhaseField() = default;
  explicit PhaseField(std::size_t n) : plus(n, 0.0), minus(n, 0.0) {}
  PhaseField(std::vector<double> p, std::vector<double> m) : plus(std::move(p)), minus(std::move(m)) {}

  std::size_t size() const noexcept { return plus.size(); }
  /// Same profile in both velocity components.
  static PhaseField isotropic(const std::vector<double>& profile) { return {profile, profile}; }

  double max_abs() const noexcept;
  /// Smallest closed interval of node positions holding every nonzero value;
  /// nullopt-like empty result is signalled by `empty()`.
  bool empty() const noexcept;
  Interval support(const SpaceGrid& grid) const;
  /// sum_j (plus + minus)_j * w_j with trapezoid weights.
  double mass(const SpaceGrid& grid) const noexcept;

  friend bool operator==(const PhaseField&, const PhaseField&) = default;
};

/// One PhaseField per time node t_0..t_N.
using PhaseTrajectory = std::vector<PhaseField>;

}  // namespace tumble
