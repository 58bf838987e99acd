#pragma once

#include <ostream>
#include <string>

#include "chc/config.hpp"
#include "chc/integrator.hpp"

namespace chc {

struct CliOptions {
  std::string config_path;
  std::string output_dir;        // overrides [output] dir when nonempty
  std::string restart_path;      // simulate: resume from this snapshot
  std::string seed_snapshot;     // steady: seed state
  std::string csv_path;          // fit-decay, verify
  std::string equilibrium_path;  // fit-decay
  double t_min = 0.0;            // fit-decay window start
};

// Initial data for the configured scenario.
SystemState build_scenario(const RunConfig& rc);

// Subcommand bodies. Each returns a process exit code: 0 success, 1 failed
// verification. Configuration problems throw ConfigError (exit 2) and
// numerical failures NumericalError (exit 3); the CLI translates.
int run_simulate(const CliOptions& o, std::ostream& out);
int run_steady(const CliOptions& o, std::ostream& out);
int run_fit_decay(const CliOptions& o, std::ostream& out);
int run_verify(const CliOptions& o, std::ostream& out);

}  // namespace chc
