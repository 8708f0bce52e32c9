#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tumble/mesh.hpp"

namespace tumble {

/// Directed tumbling rates of one cell.
/// k1 = K(+1,-1): rate into v=+1 from v=-1; k2 = K(-1,+1): rate into v=-1 from v=+1.
struct CellRates {
  double k1 = 0.0;
  double k2 = 0.0;
  friend bool operator==(const CellRates&, const CellRates&) = default;
};

/// Flat parameter vector (K_{1,1}, K_{1,2}, K_{2,1}, ..., K_{R,2}).
using KernelVector = std::vector<double>;

/// Piecewise-constant kernel on cells I_r = [a_{r-1}, a_r), r = 0..R-1.
///
/// Cell indices are 0-based in code and 1-based in files (column k_r_i).
class KernelField {
 public:
  KernelField(std::vector<double> breakpoints, std::vector<CellRates> values);

  /// Constant kernel on a single cell.
  static KernelField constant(double a0, double a1, CellRates rates);
  /// R equal cells on [lo, hi] with the given rates.
  static KernelField uniform(double lo, double hi, std::vector<CellRates> values);

  std::size_t cells() const noexcept { return values_.size(); }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<CellRates>& values() const noexcept { return values_; }
  const CellRates& rates(std::size_t r) const { return values_.at(r); }

  /// Unique r with a_r <= x < a_{r+1}; throws OutOfDomain outside [a_0, a_R).
  std::size_t cell_index(double x) const;

  /// Like cell_index, but the first and last cells extend to -inf and +inf.
  std::size_t owning_cell(double x) const noexcept;

  CellRates rates_at(double x) const { return values_[cell_index(x)]; }

  double max_rate() const noexcept;

  friend bool operator==(const KernelField&, const KernelField&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<CellRates> values_;
};

KernelVector flatten(const KernelField& field);
KernelField unflatten(std::span<const double> vec, std::vector<double> breakpoints);

/// Throws InvalidArgument unless every breakpoint is within 1e-12*dx of a node.
void check_aligned(const KernelField& field, const SpaceGrid& grid);

/// Per-node rates (owning_cell convention) used by the solvers.
struct NodeRates {
  std::vector<double> k1;
  std::vector<double> k2;
  std::vector<std::size_t> cell;
};

NodeRates node_rates(const KernelField& field, const SpaceGrid& grid);

}  // namespace tumble
