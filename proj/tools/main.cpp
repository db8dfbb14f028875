// Command-line driver. Subcommands:
//   run             execute a scenario, write manifest + CSV + snapshots
//   list-scenarios  print the known scenario names
//   print-config    print the fully resolved configuration and exit
// Every config key can come from --config FILE and be overridden by flags.
// Exit codes: 0 success, 2 configuration error, 3 numerical or I/O failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vlaherm/config.hpp"
#include "vlaherm/run.hpp"
#include "vlaherm/scenario.hpp"

namespace {

struct Flags {
  std::string config_path, scenario, method, poisson, out_dir, snapshot_times;
  int nx = 0, nh = 0, degree = -1, diag_every = 1;
  double dt = 0.0, cfl = 0.0, t_final = -1.0, gamma = -1.0, beta = 1.0;
  bool filter = true;

  CLI::Option *o_scenario = nullptr, *o_method = nullptr, *o_poisson = nullptr,
              *o_out_dir = nullptr, *o_snaps = nullptr, *o_nx = nullptr, *o_nh = nullptr,
              *o_degree = nullptr, *o_diag = nullptr, *o_dt = nullptr, *o_cfl = nullptr,
              *o_t_final = nullptr, *o_gamma = nullptr, *o_beta = nullptr, *o_filter = nullptr;
};

void add_config_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "config file (key = value lines)");
  f.o_scenario = cmd->add_option("--scenario", f.scenario,
                                 "scenario: landau, two_stream, bump_on_tail, ion_acoustic");
  f.o_nx = cmd->add_option("--nx", f.nx, "cells (dg) or wave count (fourier)");
  f.o_nh = cmd->add_option("--nh", f.nh, "Hermite mode count");
  f.o_degree = cmd->add_option("--degree", f.degree, "DG polynomial degree");
  f.o_dt = cmd->add_option("--dt", f.dt, "explicit time step (0 = derive from cfl)");
  f.o_cfl = cmd->add_option("--cfl", f.cfl, "step safety factor");
  f.o_t_final = cmd->add_option("--t-final", f.t_final, "final time");
  f.o_method = cmd->add_option("--method", f.method, "spatial method: dg | fourier");
  f.o_poisson = cmd->add_option("--poisson", f.poisson, "field solver: ldg | mixed | spectral");
  f.o_beta = cmd->add_option("--beta", f.beta, "LDG potential-jump penalty");
  f.o_gamma = cmd->add_option("--gamma", f.gamma, "velocity-scaling dissipation constant");
  f.o_filter = cmd->add_flag("--filter,!--no-filter", f.filter, "apply the spectral filter");
  f.o_out_dir = cmd->add_option("--out-dir", f.out_dir, "output directory");
  f.o_diag = cmd->add_option("--diag-every", f.diag_every, "diagnostics cadence in steps");
  f.o_snaps = cmd->add_option("--snapshot-times", f.snapshot_times, "comma-separated times");
}

vlaherm::RunConfig build_config(const Flags& f) {
  vlaherm::RunConfig cfg;
  if (!f.config_path.empty()) cfg = vlaherm::parse_config_file(f.config_path);
  if (f.o_scenario->count()) cfg.scenario = f.scenario;
  if (f.o_method->count()) cfg.method = f.method;
  if (f.o_poisson->count()) cfg.poisson = f.poisson;
  if (f.o_nx->count()) cfg.nx = f.nx;
  if (f.o_nh->count()) cfg.nh = f.nh;
  if (f.o_degree->count()) cfg.degree = f.degree;
  if (f.o_dt->count()) cfg.dt = f.dt;
  if (f.o_cfl->count()) cfg.cfl = f.cfl;
  if (f.o_t_final->count()) cfg.t_final = f.t_final;
  if (f.o_gamma->count()) cfg.gamma = f.gamma;
  if (f.o_beta->count()) cfg.beta = f.beta;
  if (f.o_filter->count()) cfg.filter = f.filter;
  if (f.o_out_dir->count()) cfg.out_dir = f.out_dir;
  if (f.o_diag->count()) cfg.diag_every = f.diag_every;
  if (f.o_snaps->count()) {
    cfg.snapshot_times = vlaherm::detail::parse_times("snapshot_times", f.snapshot_times);
    cfg.snapshot_times_set = true;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D-1V kinetic plasma solver: rescaled Hermite velocity spectrum, DG or Fourier in space"};
  app.require_subcommand(1);

  Flags run_flags, print_flags;
  CLI::App* cmd_run = app.add_subcommand("run", "run a scenario and write artifacts");
  add_config_flags(cmd_run, run_flags);
  CLI::App* cmd_list = app.add_subcommand("list-scenarios", "print known scenario names");
  CLI::App* cmd_print = app.add_subcommand("print-config", "print the resolved configuration");
  add_config_flags(cmd_print, print_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }

  try {
    if (cmd_list->parsed()) {
      for (const auto& n : vlaherm::scenario_names()) std::cout << n << '\n';
      return 0;
    }
    if (cmd_print->parsed()) {
      vlaherm::ResolvedConfig rc = vlaherm::resolve(build_config(print_flags));
      vlaherm::write_manifest(std::cout, rc);
      return 0;
    }
    vlaherm::ResolvedConfig rc = vlaherm::resolve(build_config(run_flags));
    vlaherm::run_to_files(rc, std::cout);
    return 0;
  } catch (const vlaherm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const vlaherm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const vlaherm::IoError& e) {
    std::cerr << "i/o failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
