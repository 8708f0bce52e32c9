#include "tumble/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "tumble/calculus.hpp"
#include "tumble/eigen.hpp"
#include "tumble/error.hpp"
#include "tumble/parallel.hpp"

namespace tumble {
namespace {

std::vector<double> initial_profile(const InitialPiece& p, const SpaceGrid& grid) {
  std::vector<double> out(grid.size(), 0.0);
  const double tol = 1e-9 * grid.dx();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    if (p.kind == InitialPiece::Kind::Plateau) {
      if (x >= p.lo - tol && x <= p.hi + tol) out[j] = p.amplitude;
      continue;
    }
    const double s = std::abs(x - p.center) / p.sigma;
    if (s > p.cutoff) continue;
    const double floor = std::exp(-0.5 * p.cutoff * p.cutoff);
    out[j] = p.amplitude * std::max(0.0, (std::exp(-0.5 * s * s) - floor) / (1.0 - floor));
  }
  return out;
}

TestFunction detector(const DetectorSpec& d, const SpaceGrid& grid) {
  if (d.kind == DetectorSpec::Kind::Mollified) return make_mollified(d.center, d.eta, grid);
  const double amp = d.amplitude > 0.0 ? d.amplitude : 1.0 / (2.0 * d.half_width);
  return make_indicator(d.center, d.half_width, amp, grid);
}

std::string join(const KernelVector& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ' ';
    s += format_double(k[i]);
  }
  return s;
}

const char* reason_name(StopReason r) {
  switch (r) {
    case StopReason::GradTolerance: return "grad_tolerance";
    case StopReason::LossTolerance: return "loss_tolerance";
    case StopReason::MaxIters: break;
  }
  return "max_iters";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n, lo);
  for (std::size_t i = 1; i < n; ++i) {
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

void describe(CsvTable& t, const Experiment& exp) {
  t.metadata.emplace_back("scenario", exp.config.scenario);
  if (!exp.config.label.empty()) t.metadata.emplace_back("label", exp.config.label);
  t.metadata.emplace_back("cells", std::to_string(exp.problem.cells()));
  t.metadata.emplace_back("final_time", format_double(exp.problem.tgrid.final_time()));
  t.metadata.emplace_back("n_points", std::to_string(exp.problem.grid.size()));
  t.metadata.emplace_back("n_steps", std::to_string(exp.problem.tgrid.steps()));
  t.metadata.emplace_back("k_star", join(exp.k_star));
}

const DesignSpec& require_design(const Experiment& exp, const char* who) {
  if (!exp.design) throw ConfigError(std::string(who) + ": needs a 'design' section");
  return *exp.design;
}

}  // namespace

std::vector<std::string> kernel_columns(std::size_t cells) {
  std::vector<std::string> out;
  for (std::size_t r = 1; r <= cells; ++r) {
    out.push_back("k_" + std::to_string(r) + "_1");
    out.push_back("k_" + std::to_string(r) + "_2");
  }
  return out;
}

Experiment build_experiment(const ExperimentConfig& config) {
  if (config.grid.n_points < 3) throw ConfigError("config: grid.n_points must be at least 3");
  if (!(config.C_K > 0.0)) throw ConfigError("config: C_K must be positive");
  SpaceGrid grid(config.grid.x_min, config.grid.x_max, config.grid.n_points);

  std::optional<DesignSpec> spec;
  std::vector<double> breakpoints;
  PhaseField phi;
  MeasurementSet ms;
  if (config.design) {
    const DesignSetup& ds = *config.design;
    Design d = ds.explicit_spec ? sample_design(*ds.explicit_spec, grid)
                                : build_design(ds.cells, ds.domain, config.C_K, grid, ds.options);
    spec = d.spec;
    breakpoints = d.spec.breakpoints;
    phi = std::move(d.phi);
    ms = std::move(d.measurements);
  } else {
    const ManualSetup& m = *config.manual;
    breakpoints = m.breakpoints;
    phi = PhaseField(grid.size());
    for (const auto& piece : m.initial) {
      const auto prof = initial_profile(piece, grid);
      for (std::size_t j = 0; j < grid.size(); ++j) {
        if (piece.velocity >= 0) phi.plus[j] += prof[j];
        if (piece.velocity <= 0) phi.minus[j] += prof[j];
      }
    }
    ms.final_time = m.final_time;
    for (const auto& d : m.detectors) ms.functions.push_back(detector(d, grid));
  }
  if (config.k_star.size() + 1 != breakpoints.size()) {
    throw ConfigError("config: k_star has " + std::to_string(config.k_star.size()) +
                      " cells, the layout has " + std::to_string(breakpoints.size() - 1));
  }
  for (const auto& c : config.k_star) {
    if (c.k1 < 0.0 || c.k2 < 0.0 || c.k1 > config.C_K || c.k2 > config.C_K) {
      throw ConfigError("config: k_star entries must lie in [0, C_K]");
    }
  }
  KernelField truth(breakpoints, config.k_star);
  TimeGrid tgrid = build_time_grid(ms.final_time, grid, config.C_K, config.grid.cfl_safety);
  DataVector y = synthesize_data(truth, phi, ms, grid, tgrid, config.solver);

  Experiment exp{config,
                 InverseProblem{grid, tgrid, breakpoints, std::move(phi), std::move(ms),
                                std::move(y), config.solver},
                 flatten(truth),
                 {},
                 spec};
  if (!config.initial_values.empty()) {
    if (config.initial_values.size() != exp.k_star.size()) {
      throw ConfigError("config: initial_guess.values must have 2R entries");
    }
    exp.k0 = config.initial_values;
  } else {
    exp.k0 = exp.k_star;
    for (double& v : exp.k0) v *= config.initial_scale;
  }
  return exp;
}

OptimizerConfig optimizer_config(const Experiment& exp) {
  const OptimizerSettings& s = exp.config.optimizer;
  OptimizerConfig c;
  c.max_iters = s.max_iters;
  c.tol_grad = s.tol_grad;
  c.tol_loss = s.tol_loss;
  c.projection = s.projection;
  c.spectral_eps = s.spectral_eps;
  c.threads = exp.config.threads;
  switch (s.step.policy) {
    case StepConfig::Policy::Spectral:
      c.step = SpectralAt{s.step.at == "k0" ? exp.k0 : exp.k_star};
      break;
    case StepConfig::Policy::Fixed: c.step = FixedStep{s.step.eta}; break;
    case StepConfig::Policy::Override: c.step = OverrideStep{s.step.eta}; break;
  }
  return c;
}

CsvTable history_table(const RunHistory& history, std::size_t cells) {
  CsvTable t;
  t.header = {"iter", "loss", "grad_norm", "eta"};
  for (auto& c : kernel_columns(cells)) t.header.push_back(std::move(c));
  for (const auto& rec : history.records) {
    std::vector<double> row{static_cast<double>(rec.iter), rec.loss, rec.grad_norm, rec.eta};
    row.insert(row.end(), rec.k.begin(), rec.k.end());
    t.add_row(std::move(row));
  }
  t.metadata.emplace_back("stop_reason", reason_name(history.reason));
  t.metadata.emplace_back("projections", std::to_string(history.projections));
  return t;
}

CsvTable data_table(const DataVector& data) {
  CsvTable t;
  t.header = {"l", "y"};
  for (std::size_t l = 0; l < data.size(); ++l) t.add_row({static_cast<double>(l), data[l]});
  return t;
}

CsvTable trajectory_table(const PhaseTrajectory& traj, const SpaceGrid& grid,
                          const TimeGrid& tgrid) {
  CsvTable t;
  t.header = {"t", "x", "f_plus", "f_minus"};
  t.rows.reserve(traj.size() * grid.size());
  for (std::size_t n = 0; n < traj.size(); ++n) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      t.add_row({tgrid.t(n), grid.x(j), traj[n].plus[j], traj[n].minus[j]});
    }
  }
  return t;
}

CsvTable run_synth(const Experiment& exp) {
  CsvTable t = data_table(exp.problem.data);
  describe(t, exp);
  return t;
}

CsvTable run_convergence(const Experiment& exp) {
  const RunHistory h = gd_run(exp.problem, exp.k0, optimizer_config(exp));
  CsvTable t = history_table(h, exp.problem.cells());
  describe(t, exp);
  return t;
}

CsvTable run_landscape(const Experiment& exp) {
  const LandscapeSettings& s = exp.config.landscape;
  const std::size_t R = exp.problem.cells();
  if (s.cells.empty()) throw ConfigError("landscape: 'cells' list is empty");
  if (s.points < 2) throw ConfigError("landscape: need at least 2 points per axis");
  if (!(s.half_range > 0.0)) throw ConfigError("landscape: half_range must be positive");
  CsvTable t;
  t.header = {"r", "k_r_1", "k_r_2", "loss"};
  describe(t, exp);
  for (std::size_t r1 : s.cells) {
    if (r1 == 0 || r1 > R) throw ConfigError("landscape: cell index out of range");
    const std::size_t r = r1 - 1;
    const double a = exp.k_star[2 * r];
    const double b = exp.k_star[2 * r + 1];
    const auto xs = linspace(std::max(0.0, a - s.half_range), a + s.half_range, s.points);
    const auto ys = linspace(std::max(0.0, b - s.half_range), b + s.half_range, s.points);
    const auto losses = parallel_map(s.points * s.points, exp.config.threads, [&](std::size_t i) {
      KernelVector k = exp.k_star;
      k[2 * r] = xs[i / s.points];
      k[2 * r + 1] = ys[i % s.points];
      return loss(exp.problem, k).value;
    });
    for (std::size_t i = 0; i < losses.size(); ++i) {
      t.add_row({static_cast<double>(r1), xs[i / s.points], ys[i % s.points], losses[i]});
    }
  }
  return t;
}

CsvTable run_eigmap(const Experiment& exp) {
  const EigmapSettings& s = exp.config.eigmap;
  const std::size_t P = exp.problem.parameters();
  if (s.axis_a >= P || s.axis_b >= P || s.axis_a == s.axis_b) {
    throw ConfigError("eigmap: axes must be two distinct parameter indices");
  }
  if (s.points < 2 || !(s.lo >= 0.0) || !(s.hi > s.lo)) {
    throw ConfigError("eigmap: invalid sweep range");
  }
  const auto names = kernel_columns(exp.problem.cells());
  const auto vals = linspace(s.lo, s.hi, s.points);
  const auto lmin = parallel_map(s.points * s.points, exp.config.threads, [&](std::size_t i) {
    KernelVector k = exp.k_star;
    k[s.axis_a] = vals[i / s.points];
    k[s.axis_b] = vals[i % s.points];
    return eigen_sym(fd_hessian(exp.problem, k).matrix).min();
  });
  CsvTable t;
  t.header = {names[s.axis_a], names[s.axis_b], "lambda_min"};
  describe(t, exp);
  t.metadata.emplace_back("k_star_a", format_double(exp.k_star[s.axis_a]));
  t.metadata.emplace_back("k_star_b", format_double(exp.k_star[s.axis_b]));
  for (std::size_t i = 0; i < lmin.size(); ++i) {
    t.add_row({vals[i / s.points], vals[i % s.points], lmin[i]});
  }
  return t;
}

IllcondResult run_illcond(const Experiment& exp) {
  const DesignSpec& spec = require_design(exp, "illcond");
  const IllcondSettings& s = exp.config.illcond;
  const InverseProblem& base = exp.problem;
  if (s.moved_measurement >= base.measurements.size()) {
    throw ConfigError("illcond: moved_measurement out of range");
  }
  if (s.reference_cell >= base.cells()) throw ConfigError("illcond: reference_cell out of range");
  if (s.offsets.empty() || s.fallback_position >= s.offsets.size()) {
    throw ConfigError("illcond: fallback_position out of range");
  }
  const auto& moved = base.measurements.functions[s.moved_measurement];
  const auto* ind = std::get_if<IndicatorShape>(&moved.descriptor);
  if (!ind) throw ConfigError("illcond: the moved detector must be an indicator");
  const double c = spec.center(s.reference_cell);
  const double T = spec.final_time;
  const bool at_k0 = exp.config.optimizer.step.at == "k0";

  struct Position {
    InverseProblem problem;
    double x = 0.0;
    EigenResult eig;
    std::size_t rank = 0;
    SpectralStep step;
  };
  std::vector<Position> pos;
  for (double p : s.offsets) {
    Position q{base, c + p * T, {}, 0, {}};
    q.problem.measurements.functions[s.moved_measurement] =
        make_indicator(q.x, ind->half_width, ind->amplitude, base.grid);
    q.problem.data = synthesize_data(base.field(exp.k_star), base.phi, q.problem.measurements,
                                     base.grid, base.tgrid, base.solver);
    q.eig = eigen_sym(gauss_newton_hessian(q.problem, exp.k_star, exp.config.threads));
    q.rank = numerical_rank(q.eig, s.rank_tol);
    const KernelVector& ref = at_k0 ? exp.k0 : exp.k_star;
    if (at_k0) {
      const EigenResult e = eigen_sym(fd_hessian(q.problem, ref, kHessianStepRule,
                                                 exp.config.threads).matrix);
      q.step = spectral_step_from(e.min(), e.max(), exp.config.optimizer.spectral_eps);
    } else {
      q.step = spectral_step_from(q.eig.min(), q.eig.max(), exp.config.optimizer.spectral_eps);
    }
    pos.push_back(std::move(q));
  }
  if (exp.config.optimizer.step.policy == StepConfig::Policy::Spectral &&
      !pos[s.fallback_position].step.eta) {
    throw DegenerateSpectrum("illcond: the fallback position has no spectral step");
  }

  IllcondResult out;
  out.summary.header = {"position", "offset",     "x1",        "lambda_min", "lambda_max",
                        "eta",      "overridden", "rank",      "iterations", "final_loss",
                        "k1_offset"};
  describe(out.summary, exp);
  out.summary.metadata.emplace_back("reference_center", format_double(c));
  OptimizerConfig base_cfg = optimizer_config(exp);
  const std::size_t r = s.reference_cell;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    OptimizerConfig cfg = base_cfg;
    bool overridden = false;
    double eta = 0.0;
    if (exp.config.optimizer.step.policy == StepConfig::Policy::Spectral) {
      overridden = !pos[i].step.eta.has_value();
      eta = overridden ? *pos[s.fallback_position].step.eta : *pos[i].step.eta;
      if (overridden) {
        cfg.step = OverrideStep{eta};
      } else {
        cfg.step = FixedStep{eta};
      }
    } else {
      eta = exp.config.optimizer.step.eta;
    }
    const RunHistory h = gd_run(pos[i].problem, exp.k0, cfg);
    const auto& k = h.last().k;
    const double e1 = k[2 * r] - exp.k_star[2 * r];
    const double e2 = k[2 * r + 1] - exp.k_star[2 * r + 1];
    out.summary.add_row({static_cast<double>(i), s.offsets[i], pos[i].x, pos[i].eig.min(),
                         pos[i].eig.max(), eta, overridden ? 1.0 : 0.0,
                         static_cast<double>(pos[i].rank), static_cast<double>(h.last().iter),
                         h.last().loss, std::hypot(e1, e2)});
    CsvTable ht = history_table(h, base.cells());
    describe(ht, exp);
    ht.metadata.emplace_back("position", std::to_string(i));
    ht.metadata.emplace_back("x1", format_double(pos[i].x));
    out.histories.push_back(std::move(ht));
  }
  return out;
}

DesignReconResult run_design_recon(const Experiment& exp) {
  const DesignSpec& spec = require_design(exp, "design-recon");
  const OptimizerConfig cfg = optimizer_config(exp);
  const auto cells = split_cell_problems(spec, exp.problem);
  const CellReconstruction rec = reconstruct_cells(cells, exp.k0, cfg, exp.config.threads);
  const RunHistory joint = gd_run(exp.problem, exp.k0, cfg);
  const KernelVector& kj = joint.last().k;

  DesignReconResult out;
  out.defect = block_defect(
      fd_hessian(exp.problem, exp.k_star, kHessianStepRule, exp.config.threads).matrix);
  CsvTable& t = out.cells;
  t.header = {"r", "k_r_1", "k_r_2", "joint_1", "joint_2", "star_1", "star_2", "iterations"};
  describe(t, exp);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t r = cells[i].cell;
    out.max_joint_difference = std::max({out.max_joint_difference,
                                         std::abs(rec.k[2 * r] - kj[2 * r]),
                                         std::abs(rec.k[2 * r + 1] - kj[2 * r + 1])});
    t.add_row({static_cast<double>(r + 1), rec.k[2 * r], rec.k[2 * r + 1], kj[2 * r],
               kj[2 * r + 1], exp.k_star[2 * r], exp.k_star[2 * r + 1],
               static_cast<double>(rec.histories[i].last().iter)});
  }
  t.metadata.emplace_back("joint_iterations", std::to_string(joint.last().iter));
  t.metadata.emplace_back("block_max", format_double(out.defect.max_block));
  t.metadata.emplace_back("block_off_mass", format_double(out.defect.off_mass));
  t.metadata.emplace_back("max_joint_difference", format_double(out.max_joint_difference));

  out.timing.header = {"r", "wall_seconds"};
  out.timing.metadata.emplace_back("threads", std::to_string(resolve_threads(exp.config.threads)));
  out.timing.metadata.emplace_back("total_seconds", format_double(rec.total_seconds));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.timing.add_row({static_cast<double>(cells[i].cell + 1), rec.wall_seconds[i]});
  }
  return out;
}

std::string design_json(const DesignSpec& spec, double C_K) {
  nlohmann::ordered_json j;
  j["cells"] = spec.cells();
  j["breakpoints"] = spec.breakpoints;
  j["bump_half_width"] = spec.bump_half_width;
  j["measurement_half_width"] = spec.measurement_half_width;
  j["final_time"] = spec.final_time;
  j["bump_amplitude"] = spec.bump_amplitude;
  j["measurement_amplitude"] = spec.measurement_amplitude;
  j["shape"] = spec.shape == BumpShape::Plateau ? "plateau" : "gaussian";
  std::vector<double> centers;
  for (std::size_t r = 0; r < spec.cells(); ++r) centers.push_back(spec.center(r));
  j["centers"] = centers;
  j["measurement_centers"] = spec.measurement_centers();
  j["separation_ratio"] = spec.separation_ratio();
  j["C_K"] = C_K;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : validate_design(spec, C_K)) {
    violations.push_back({{"name", v.name}, {"detail", v.detail}});
  }
  j["violations"] = violations;
  return j.dump(2) + "\n";
}

}  // namespace tumble
