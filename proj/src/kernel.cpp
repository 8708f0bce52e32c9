#include "tumble/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tumble/error.hpp"

namespace tumble {

KernelField::KernelField(std::vector<double> breakpoints, std::vector<CellRates> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("KernelField: need at least one cell");
  if (breakpoints_.size() != values_.size() + 1) {
    throw InvalidArgument("KernelField: " + std::to_string(breakpoints_.size()) +
                          " breakpoints for " + std::to_string(values_.size()) + " cells");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) throw InvalidArgument("KernelField: non-finite breakpoint");
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw InvalidArgument("KernelField: breakpoints must be strictly increasing");
    }
  }
  for (const auto& v : values_) {
    if (!std::isfinite(v.k1) || !std::isfinite(v.k2)) {
      throw InvalidArgument("KernelField: non-finite rate");
    }
    if (v.k1 < 0.0 || v.k2 < 0.0) throw InvalidArgument("KernelField: negative rate");
  }
}

KernelField KernelField::constant(double a0, double a1, CellRates rates) {
  return KernelField({a0, a1}, {rates});
}

KernelField KernelField::uniform(double lo, double hi, std::vector<CellRates> values) {
  const std::size_t R = values.size();
  if (R == 0) throw InvalidArgument("KernelField::uniform: need at least one cell");
  std::vector<double> bp(R + 1);
  for (std::size_t r = 0; r <= R; ++r) {
    bp[r] = r == R ? hi : lo + (hi - lo) * static_cast<double>(r) / static_cast<double>(R);
  }
  return KernelField(std::move(bp), std::move(values));
}

std::size_t KernelField::cell_index(double x) const {
  if (!(x >= breakpoints_.front()) || !(x < breakpoints_.back())) {
    throw OutOfDomain("cell_index: x = " + std::to_string(x) + " outside [" +
                      std::to_string(breakpoints_.front()) + ", " +
                      std::to_string(breakpoints_.back()) + ")");
  }
  return owning_cell(x);
}

std::size_t KernelField::owning_cell(double x) const noexcept {
  // first interior breakpoint strictly greater than x
  const auto first = breakpoints_.begin() + 1;
  const auto last = breakpoints_.end() - 1;
  return static_cast<std::size_t>(std::upper_bound(first, last, x) - first);
}

double KernelField::max_rate() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max({m, v.k1, v.k2});
  return m;
}

KernelVector flatten(const KernelField& field) {
  KernelVector out;
  out.reserve(2 * field.cells());
  for (const auto& v : field.values()) {
    out.push_back(v.k1);
    out.push_back(v.k2);
  }
  return out;
}

KernelField unflatten(std::span<const double> vec, std::vector<double> breakpoints) {
  if (breakpoints.size() < 2 || vec.size() != 2 * (breakpoints.size() - 1)) {
    throw InvalidArgument("unflatten: vector of length " + std::to_string(vec.size()) +
                          " does not match " + std::to_string(breakpoints.size()) +
                          " breakpoints");
  }
  std::vector<CellRates> values(vec.size() / 2);
  for (std::size_t r = 0; r < values.size(); ++r) values[r] = {vec[2 * r], vec[2 * r + 1]};
  return KernelField(std::move(breakpoints), std::move(values));
}

void check_aligned(const KernelField& field, const SpaceGrid& grid) {
  for (double a : field.breakpoints()) {
    if (!grid.is_node(a)) {
      throw InvalidArgument("breakpoint " + std::to_string(a) + " is not on a grid node");
    }
  }
}

NodeRates node_rates(const KernelField& field, const SpaceGrid& grid) {
  NodeRates out;
  const std::size_t n = grid.size();
  out.k1.resize(n);
  out.k2.resize(n);
  out.cell.resize(n);
  // snap interior breakpoints to their node so that x_j == a_r lands in cell r+1
  std::vector<std::size_t> edge_nodes;
  for (std::size_t r = 1; r + 1 < field.breakpoints().size(); ++r) {
    edge_nodes.push_back(grid.nearest_node(field.breakpoints()[r]));
  }
  std::size_t r = 0;
  for (std::size_t j = 0; j < n; ++j) {
    while (r < edge_nodes.size() && j >= edge_nodes[r]) ++r;
    out.cell[j] = r;
    out.k1[j] = field.values()[r].k1;
    out.k2[j] = field.values()[r].k2;
  }
  return out;
}

}  // namespace tumble
