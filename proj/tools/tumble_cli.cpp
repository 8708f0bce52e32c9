#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tumble/config.hpp"
#include "tumble/error.hpp"
#include "tumble/scenarios.hpp"
#include "tumble/solver.hpp"

namespace fs = std::filesystem;
using namespace tumble;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kInfeasible = 4 };

struct Common {
  std::string config;
  std::string out;
  unsigned threads = 0;
  bool threads_set = false;
};

void add_common(CLI::App* app, Common& c, bool needs_out = true) {
  app->add_option("--config", c.config, "experiment configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* o = app->add_option("--out", c.out, "output CSV path");
  if (needs_out) o->required();
  app->add_option_function<unsigned>(
      "--threads",
      [&c](unsigned n) {
        c.threads = n;
        c.threads_set = true;
      },
      "worker threads (0 = all hardware threads)");
}

Experiment load(const Common& c) {
  ExperimentConfig cfg = load_config(c.config);
  if (c.threads_set) cfg.threads = c.threads;
  return build_experiment(cfg);
}

/// out.csv -> out_<suffix>.csv
fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_filename(out.stem().string() + "_" + suffix + out.extension().string());
  return p;
}

DataVector read_data(const fs::path& path) {
  const CsvTable t = read_csv_file(path);
  return t.column_values("y");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of piecewise-constant tumbling kernels from density measurements"};
  app.require_subcommand(1);

  Common synth_opts;
  std::string dump_path;
  auto* synth = app.add_subcommand("synth", "synthesize measurement data at the ground truth");
  add_common(synth, synth_opts);
  synth->add_option("--dump-trajectory", dump_path, "write the forward trajectory (t, x, f_plus, f_minus)");

  Common rec_opts;
  std::string data_path;
  auto* reconstruct = app.add_subcommand("reconstruct", "gradient descent from the initial guess");
  add_common(reconstruct, rec_opts);
  reconstruct->add_option("--data", data_path, "measured data CSV (columns l, y)")
      ->check(CLI::ExistingFile);

  Common land_opts;
  auto* landscape = app.add_subcommand("landscape", "per-cell loss surfaces around the ground truth");
  add_common(landscape, land_opts);

  Common eig_opts;
  auto* eigmap = app.add_subcommand("eigmap", "minimal Hessian eigenvalue over a 2D sweep");
  add_common(eigmap, eig_opts);

  Common ill_opts;
  auto* illcond = app.add_subcommand("illcond", "detector merging and loss of convexity");
  add_common(illcond, ill_opts);

  auto* design = app.add_subcommand("design", "inspect the measurement design");
  design->require_subcommand(1);
  Common val_opts;
  auto* validate = design->add_subcommand("validate", "check the design inequalities");
  add_common(validate, val_opts, false);
  Common emit_opts;
  auto* emit = design->add_subcommand("emit", "write the resolved design as JSON");
  add_common(emit, emit_opts, false);

  Common dr_opts;
  auto* design_recon = app.add_subcommand("design-recon", "per-cell parallel reconstruction");
  add_common(design_recon, dr_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*synth) {
      const Experiment exp = load(synth_opts);
      write_csv_file(synth_opts.out, run_synth(exp));
      if (!dump_path.empty()) {
        const auto traj = forward_solve(exp.problem.grid, exp.problem.tgrid,
                                        exp.problem.field(exp.k_star), exp.problem.phi,
                                        exp.problem.solver);
        write_csv_file(dump_path, trajectory_table(traj, exp.problem.grid, exp.problem.tgrid));
      }
    } else if (*reconstruct) {
      Experiment exp = load(rec_opts);
      if (!data_path.empty()) {
        DataVector y = read_data(data_path);
        if (y.size() != exp.problem.data.size()) {
          throw ConfigError("data file has " + std::to_string(y.size()) + " rows, expected " +
                            std::to_string(exp.problem.data.size()));
        }
        exp.problem.data = std::move(y);
      }
      write_csv_file(rec_opts.out, run_convergence(exp));
    } else if (*landscape) {
      write_csv_file(land_opts.out, run_landscape(load(land_opts)));
    } else if (*eigmap) {
      write_csv_file(eig_opts.out, run_eigmap(load(eig_opts)));
    } else if (*illcond) {
      const IllcondResult res = run_illcond(load(ill_opts));
      const fs::path out = ill_opts.out;
      write_csv_file(out, res.summary);
      for (std::size_t i = 0; i < res.histories.size(); ++i) {
        write_csv_file(sibling(out, "pos" + std::to_string(i)), res.histories[i]);
      }
    } else if (*validate || *emit) {
      const Common& c = *validate ? val_opts : emit_opts;
      ExperimentConfig cfg = load_config(c.config);
      if (!cfg.design) throw ConfigError("design: config has no 'design' section");
      const Experiment exp = build_experiment(cfg);
      const std::string text = design_json(*exp.design, cfg.C_K);
      if (c.out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(c.out) << text;
      }
      if (*validate && !validate_design(*exp.design, cfg.C_K).empty()) return kInfeasible;
    } else if (*design_recon) {
      const DesignReconResult res = run_design_recon(load(dr_opts));
      const fs::path out = dr_opts.out;
      write_csv_file(out, res.cells);
      write_csv_file(sibling(out, "timing"), res.timing);
    }
  } catch (const InfeasibleDesign& e) {
    std::cerr << "infeasible design: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const OutOfDomain& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
