#include "tumble/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tumble/error.hpp"

namespace tumble {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError("config: missing '" + std::string(key) + "' in " + where);
  }
  return j.at(key);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

BumpShape parse_shape(const std::string& s) {
  if (s == "gaussian") return BumpShape::TruncatedGaussian;
  if (s == "plateau") return BumpShape::Plateau;
  throw ConfigError("config: unknown bump shape '" + s + "'");
}

InitialPiece parse_piece(const json& j) {
  InitialPiece p;
  const auto type = require(j, "type", "initial piece").get<std::string>();
  p.amplitude = get_or(j, "amplitude", 1.0);
  p.velocity = get_or(j, "velocity", 0);
  if (p.velocity != 0 && p.velocity != 1 && p.velocity != -1) {
    throw ConfigError("config: initial piece velocity must be -1, 0 or 1");
  }
  if (type == "gaussian") {
    p.kind = InitialPiece::Kind::Gaussian;
    p.center = require(j, "center", "gaussian piece").get<double>();
    p.sigma = require(j, "sigma", "gaussian piece").get<double>();
    p.cutoff = get_or(j, "cutoff", 6.0);
  } else if (type == "plateau") {
    p.kind = InitialPiece::Kind::Plateau;
    p.lo = require(j, "lo", "plateau piece").get<double>();
    p.hi = require(j, "hi", "plateau piece").get<double>();
  } else {
    throw ConfigError("config: unknown initial piece type '" + type + "'");
  }
  return p;
}

DetectorSpec parse_detector(const json& j) {
  DetectorSpec d;
  const auto type = require(j, "type", "detector").get<std::string>();
  d.center = require(j, "center", "detector").get<double>();
  if (type == "indicator") {
    d.kind = DetectorSpec::Kind::Indicator;
    d.half_width = require(j, "half_width", "indicator").get<double>();
    d.amplitude = get_or(j, "amplitude", 0.0);
  } else if (type == "mollified") {
    d.kind = DetectorSpec::Kind::Mollified;
    d.eta = require(j, "eta", "mollified detector").get<double>();
  } else {
    throw ConfigError("config: unknown detector type '" + type + "'");
  }
  return d;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  c.scenario = get_or<std::string>(j, "scenario", "");
  c.label = get_or<std::string>(j, "label", "");
  const json& g = require(j, "grid", "top level");
  c.grid.x_min = require(g, "x_min", "grid").get<double>();
  c.grid.x_max = require(g, "x_max", "grid").get<double>();
  c.grid.n_points = require(g, "n_points", "grid").get<std::size_t>();
  c.grid.cfl_safety = get_or(g, "cfl_safety", kDefaultCflSafety);
  c.C_K = require(j, "C_K", "top level").get<double>();
  if (j.contains("solver")) {
    const auto coupling = get_or<std::string>(j.at("solver"), "coupling", "strang");
    if (coupling == "strang") {
      c.solver.coupling = CollisionCoupling::Strang;
    } else if (coupling == "explicit") {
      c.solver.coupling = CollisionCoupling::Explicit;
    } else {
      throw ConfigError("config: unknown coupling '" + coupling + "'");
    }
  }
  for (const auto& pair : require(j, "k_star", "top level")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ConfigError("config: k_star entries must be [k1, k2] pairs");
    }
    c.k_star.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  if (j.contains("design")) {
    const json& d = j.at("design");
    DesignSetup s;
    s.cells = require(d, "cells", "design").get<std::size_t>();
    const auto dom = get_or<std::vector<double>>(d, "domain", {0.0, 1.0});
    if (dom.size() != 2) throw ConfigError("config: design.domain must be [lo, hi]");
    s.domain = {dom[0], dom[1]};
    s.options.shape_constant = get_or(d, "shape_constant", s.options.shape_constant);
    s.options.bump_amplitude = get_or(d, "bump_amplitude", s.options.bump_amplitude);
    s.options.measurement_amplitude =
        get_or(d, "measurement_amplitude", s.options.measurement_amplitude);
    s.options.shape = parse_shape(get_or<std::string>(d, "shape", "gaussian"));
    if (d.contains("final_time")) {
      DesignSpec spec;
      spec.breakpoints.resize(s.cells + 1);
      for (std::size_t r = 0; r <= s.cells; ++r) {
        spec.breakpoints[r] = r == s.cells ? s.domain.hi
                                           : s.domain.lo + (s.domain.hi - s.domain.lo) *
                                                               static_cast<double>(r) /
                                                               static_cast<double>(s.cells);
      }
      spec.final_time = d.at("final_time").get<double>();
      spec.bump_half_width = require(d, "bump_half_width", "design").get<double>();
      spec.measurement_half_width = require(d, "measurement_half_width", "design").get<double>();
      spec.bump_amplitude = s.options.bump_amplitude;
      spec.measurement_amplitude = s.options.measurement_amplitude > 0.0
                                       ? s.options.measurement_amplitude
                                       : 1.0 / (2.0 * spec.measurement_half_width);
      spec.shape = s.options.shape;
      s.explicit_spec = spec;
    }
    c.design = s;
  }
  if (j.contains("manual")) {
    const json& m = j.at("manual");
    ManualSetup s;
    s.final_time = require(m, "final_time", "manual").get<double>();
    s.breakpoints = require(m, "breakpoints", "manual").get<std::vector<double>>();
    for (const auto& p : require(m, "initial", "manual")) s.initial.push_back(parse_piece(p));
    for (const auto& d : require(m, "detectors", "manual")) s.detectors.push_back(parse_detector(d));
    c.manual = s;
  }
  if (c.design.has_value() == c.manual.has_value()) {
    throw ConfigError("config: exactly one of 'design' and 'manual' is required");
  }
  if (j.contains("initial_guess")) {
    const json& ig = j.at("initial_guess");
    c.initial_scale = get_or(ig, "scale", c.initial_scale);
    c.initial_values = get_or<std::vector<double>>(ig, "values", {});
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    auto& s = c.optimizer;
    s.max_iters = get_or(o, "max_iters", s.max_iters);
    s.tol_grad = get_or(o, "tol_grad", s.tol_grad);
    s.tol_loss = get_or(o, "tol_loss", s.tol_loss);
    s.projection = get_or(o, "projection", s.projection);
    s.spectral_eps = get_or(o, "spectral_eps", s.spectral_eps);
    if (o.contains("step")) {
      const json& st = o.at("step");
      const auto policy = get_or<std::string>(st, "policy", "spectral");
      if (policy == "spectral") {
        s.step.policy = StepConfig::Policy::Spectral;
        s.step.at = get_or<std::string>(st, "at", "k_star");
        if (s.step.at != "k_star" && s.step.at != "k0") {
          throw ConfigError("config: step.at must be 'k_star' or 'k0'");
        }
      } else if (policy == "fixed" || policy == "override") {
        s.step.policy =
            policy == "fixed" ? StepConfig::Policy::Fixed : StepConfig::Policy::Override;
        s.step.eta = require(st, "eta", "optimizer.step").get<double>();
      } else {
        throw ConfigError("config: unknown step policy '" + policy + "'");
      }
    }
  }
  if (j.contains("landscape")) {
    const json& l = j.at("landscape");
    c.landscape.cells = get_or<std::vector<std::size_t>>(l, "cells", {});
    c.landscape.points = get_or(l, "points", c.landscape.points);
    c.landscape.half_range = get_or(l, "half_range", c.landscape.half_range);
  }
  if (j.contains("eigmap")) {
    const json& e = j.at("eigmap");
    c.eigmap.points = get_or(e, "points", c.eigmap.points);
    c.eigmap.lo = get_or(e, "lo", c.eigmap.lo);
    c.eigmap.hi = get_or(e, "hi", c.eigmap.hi);
    const auto axes = get_or<std::vector<std::size_t>>(e, "axes", {0, 3});
    if (axes.size() != 2) throw ConfigError("config: eigmap.axes must hold two indices");
    c.eigmap.axis_a = axes[0];
    c.eigmap.axis_b = axes[1];
  }
  if (j.contains("illcond")) {
    const json& i = j.at("illcond");
    auto& s = c.illcond;
    s.moved_measurement = get_or(i, "moved_measurement", s.moved_measurement);
    s.reference_cell = get_or(i, "reference_cell", s.reference_cell);
    s.offsets = get_or(i, "offsets", s.offsets);
    s.fallback_position = get_or(i, "fallback_position", s.fallback_position);
    s.rank_tol = get_or(i, "rank_tol", s.rank_tol);
  }
  c.threads = get_or(j, "threads", c.threads);
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  try {
    return from_json(json::parse(json_text, nullptr, true, true));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace tumble
