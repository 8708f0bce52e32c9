#include "tumble/design.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "tumble/error.hpp"
#include "tumble/parallel.hpp"

namespace tumble {

double DesignSpec::min_cell_width() const noexcept {
  double w = breakpoints[1] - breakpoints[0];
  for (std::size_t r = 1; r < cells(); ++r) w = std::min(w, breakpoints[r + 1] - breakpoints[r]);
  return w;
}

std::vector<double> DesignSpec::measurement_centers() const {
  std::vector<double> c;
  c.reserve(2 * cells());
  for (std::size_t r = 0; r < cells(); ++r) {
    c.push_back(center(r) - final_time);
    c.push_back(center(r) + final_time);
  }
  return c;
}

std::vector<DesignViolation> validate_design(const DesignSpec& spec, double C_K) {
  std::vector<DesignViolation> out;
  auto fail = [&](const char* name, double lhs, const char* op, double rhs) {
    std::ostringstream s;
    s.precision(17);
    s << lhs << " " << op << " " << rhs << " does not hold";
    out.push_back({name, s.str()});
  };
  const double d = spec.bump_half_width;
  const double d_mu = spec.measurement_half_width;
  const double T = spec.final_time;
  const double width = spec.min_cell_width();

  if (!(d < width / 4.0)) fail("bump_half_width", d, "<", width / 4.0);
  if (!(d_mu <= d)) fail("measurement_half_width", d_mu, "<=", d);
  const double delta = spec.separation_ratio();
  const double time_bound =
      std::min((1.0 - delta) * 0.09 / (C_K * kVelocitySetSize), width / 4.0 - d / 2.0);
  if (!(T < time_bound)) fail("measurement_time", T, "<", time_bound);
  const double ratio_bound = std::exp(-T * C_K * kVelocitySetSize);
  if (!(delta < ratio_bound)) fail("separation_ratio", delta, "<", ratio_bound);
  return out;
}

std::vector<double> bump_profile(const DesignSpec& spec, std::size_t r, const SpaceGrid& grid) {
  const double c = spec.center(r);
  const double d = spec.bump_half_width;
  const double tol = 1e-9 * grid.dx();
  std::vector<double> out(grid.size(), 0.0);
  const double sigma = d / 3.0;
  const double floor = std::exp(-0.5 * (d / sigma) * (d / sigma));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double s = std::abs(grid.x(j) - c);
    if (s > d + tol) continue;
    if (spec.shape == BumpShape::Plateau) {
      out[j] = spec.bump_amplitude;
    } else {
      const double g = std::exp(-0.5 * (s / sigma) * (s / sigma));
      out[j] = spec.bump_amplitude * std::max(0.0, (g - floor) / (1.0 - floor));
    }
  }
  return out;
}

Design sample_design(const DesignSpec& spec, const SpaceGrid& grid) {
  for (std::size_t r = 0; r < spec.cells(); ++r) {
    if (!grid.is_node(spec.breakpoints[r]) || !grid.is_node(spec.breakpoints[r + 1]) ||
        !grid.is_node(spec.center(r))) {
      throw InvalidArgument("design: cell edges and centres must be grid nodes");
    }
  }
  if (spec.measurement_half_width < grid.dx()) {
    throw InfeasibleDesign("design: detector half width " +
                           std::to_string(spec.measurement_half_width) +
                           " is below the grid spacing " + std::to_string(grid.dx()));
  }
  Design out;
  out.spec = spec;
  std::vector<double> phi(grid.size(), 0.0);
  for (std::size_t r = 0; r < spec.cells(); ++r) {
    const auto b = bump_profile(spec, r, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) phi[j] += b[j];
  }
  out.phi = PhaseField::isotropic(phi);
  out.measurements.final_time = spec.final_time;
  for (double c : spec.measurement_centers()) {
    out.measurements.functions.push_back(
        make_indicator(c, spec.measurement_half_width, spec.measurement_amplitude, grid));
  }
  return out;
}

Design build_design(std::size_t cells, Interval domain, double C_K, const SpaceGrid& grid,
                    const DesignOptions& opts) {
  if (cells == 0) throw InvalidArgument("build_design: need at least one cell");
  if (!(domain.lo < domain.hi)) throw InvalidArgument("build_design: empty domain");
  if (!(opts.shape_constant > 0.0)) throw InvalidArgument("build_design: shape constant must be positive");
  DesignSpec spec;
  spec.breakpoints.resize(cells + 1);
  for (std::size_t r = 0; r <= cells; ++r) {
    spec.breakpoints[r] = r == cells ? domain.hi
                                     : domain.lo + (domain.hi - domain.lo) * static_cast<double>(r) /
                                                       static_cast<double>(cells);
  }
  spec.bump_amplitude = opts.bump_amplitude;
  spec.shape = opts.shape;

  auto with_time = [&](double T) {
    DesignSpec s = spec;
    s.final_time = T;
    s.bump_half_width = opts.shape_constant * T * T;
    s.measurement_half_width = s.bump_half_width;
    return s;
  };
  double lo = 0.0;
  double hi = spec.min_cell_width() / 4.0;
  if (!validate_design(with_time(hi), C_K).empty()) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (validate_design(with_time(mid), C_K).empty() ? lo : hi) = mid;
    }
  } else {
    lo = hi;
  }
  if (!(lo > 0.0)) throw InfeasibleDesign("build_design: no feasible measurement time");
  spec = with_time(lo);
  if (!validate_design(spec, C_K).empty()) {
    throw InfeasibleDesign("build_design: bisection ended on an infeasible time");
  }
  spec.measurement_amplitude = opts.measurement_amplitude > 0.0
                                   ? opts.measurement_amplitude
                                   : 1.0 / (2.0 * spec.measurement_half_width);
  return sample_design(spec, grid);
}

std::vector<CellProblem> split_cell_problems(const DesignSpec& spec, const InverseProblem& joint) {
  const SpaceGrid& g = joint.grid;
  if (joint.measurements.size() != 2 * spec.cells() || joint.cells() != spec.cells()) {
    throw InvalidArgument("split_cell_problems: problem does not match the design");
  }
  std::vector<CellProblem> out;
  out.reserve(spec.cells());
  for (std::size_t r = 0; r < spec.cells(); ++r) {
    const std::size_t j0 = g.nearest_node(spec.breakpoints[r]);
    const std::size_t j1 = g.nearest_node(spec.breakpoints[r + 1]);
    const std::size_t n = j1 - j0 + 1;
    SpaceGrid sub(g.x(j0), g.x(j1), n);
    auto slice = [&](const std::vector<double>& v) {
      return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(j0),
                                 v.begin() + static_cast<std::ptrdiff_t>(j1 + 1));
    };
    MeasurementSet ms;
    ms.final_time = joint.measurements.final_time;
    DataVector y;
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& mu = joint.measurements.functions[2 * r + i];
      ms.functions.push_back({slice(mu.samples), mu.descriptor});
      y.push_back(joint.data[2 * r + i]);
    }
    InverseProblem p{sub,
                     joint.tgrid,
                     {g.x(j0), g.x(j1)},
                     PhaseField(slice(joint.phi.plus), slice(joint.phi.minus)),
                     std::move(ms),
                     std::move(y),
                     joint.solver};
    out.push_back({r, j0, {2 * r, 2 * r + 1}, std::move(p)});
  }
  return out;
}

CellReconstruction reconstruct_cells(const std::vector<CellProblem>& cells,
                                     const KernelVector& k0, const OptimizerConfig& config,
                                     unsigned threads) {
  using clock = std::chrono::steady_clock;
  struct Result {
    RunHistory history;
    double seconds;
  };
  const auto start = clock::now();
  auto results = parallel_map(cells.size(), threads, [&](std::size_t i) {
    const std::size_t r = cells[i].cell;
    const auto t0 = clock::now();
    OptimizerConfig cfg = config;
    cfg.threads = 1;
    if (auto* s = std::get_if<SpectralAt>(&cfg.step)) {
      s->reference = {s->reference.at(2 * r), s->reference.at(2 * r + 1)};
    }
    RunHistory h = gd_run(cells[i].problem, {k0.at(2 * r), k0.at(2 * r + 1)}, cfg);
    return Result{std::move(h), std::chrono::duration<double>(clock::now() - t0).count()};
  });
  CellReconstruction out;
  out.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
  out.k.assign(k0.size(), 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t r = cells[i].cell;
    out.k[2 * r] = results[i].history.last().k[0];
    out.k[2 * r + 1] = results[i].history.last().k[1];
    out.wall_seconds.push_back(results[i].seconds);
    out.histories.push_back(std::move(results[i].history));
  }
  return out;
}

BlockDefect block_defect(const SymmetricMatrix& h) {
  const std::size_t n = h.size();
  const double total = h.frobenius();
  BlockDefect out;
  if (total == 0.0) return out;
  double off = 0.0;
  for (std::size_t bi = 0; bi < n / 2; ++bi) {
    for (std::size_t bj = 0; bj < n / 2; ++bj) {
      if (bi == bj) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) s += h(2 * bi + i, 2 * bj + j) * h(2 * bi + i, 2 * bj + j);
      off += s;
      out.max_block = std::max(out.max_block, std::sqrt(s));
    }
  }
  out.max_block /= total;
  out.off_mass = std::sqrt(off) / total;
  return out;
}

}  // namespace tumble
