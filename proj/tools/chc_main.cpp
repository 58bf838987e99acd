#include <CLI11.hpp>
#include <iostream>

#include "chc/errors.hpp"
#include "chc/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"coupled heat / phase-field slab simulator"};
  app.require_subcommand(1);

  chc::CliOptions opts;
  std::string output_flag;

  auto* simulate = app.add_subcommand("simulate", "advance the coupled system");
  simulate->add_option("--config", opts.config_path, "run configuration file")
      ->required();
  simulate->add_option("--restart", opts.restart_path,
                       "resume from this snapshot");
  simulate->add_option("--output", output_flag, "output directory override");

  auto* steady = app.add_subcommand("steady", "solve the stationary system");
  steady->add_option("--config", opts.config_path, "run configuration file")
      ->required();
  steady->add_option("--seed-snapshot", opts.seed_snapshot,
                     "seed state for the Newton solve");
  steady->add_option("--output", output_flag, "output directory override");

  auto* fit = app.add_subcommand("fit-decay",
                                 "fit the distance-to-equilibrium decay law");
  fit->add_option("--csv", opts.csv_path, "diagnostics CSV of the run")
      ->required();
  fit->add_option("--equilibrium", opts.equilibrium_path,
                  "equilibrium snapshot")
      ->required();
  fit->add_option("--t-min", opts.t_min, "start of the fit window");

  auto* verify = app.add_subcommand("verify",
                                    "check the invariants of a diagnostics CSV");
  verify->add_option("--csv", opts.csv_path, "diagnostics CSV to check")
      ->required();

  CLI11_PARSE(app, argc, argv);
  opts.output_dir = output_flag;

  try {
    if (simulate->parsed()) return chc::run_simulate(opts, std::cout);
    if (steady->parsed()) return chc::run_steady(opts, std::cout);
    if (fit->parsed()) return chc::run_fit_decay(opts, std::cout);
    if (verify->parsed()) return chc::run_verify(opts, std::cout);
  } catch (const chc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const chc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const chc::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
