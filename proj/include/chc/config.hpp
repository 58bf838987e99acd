#pragma once

#include <cstdint>
#include <string>

#include "chc/grid.hpp"
#include "chc/integrator.hpp"
#include "chc/model.hpp"

namespace chc {

struct ScenarioConfig {
  std::string name;  // constant-equilibrium | spinodal | mean-ode
  double theta0 = 0.0;
  double chi0 = 0.0;              // constant-equilibrium, mean-ode
  double q_amplitude = 0.0;       // constant-equilibrium
  double amplitude = 0.05;        // spinodal
  std::uint64_t seed = 1;         // spinodal
  double mean_chi = 0.0;          // spinodal
  double stripe_amplitude = 0.0;  // spinodal
  double mean_chi1 = 0.0;         // mean-ode
};

// Parsed run description. Sections: [grid], [params], [stepper],
// [diagnostics], [scenario], [output]. Unknown sections or keys are
// configuration errors, as are scenario keys that the named scenario does
// not use. kappa weights may be given as "auto" (the default), which picks
// the largest admissible values on the grid, capped at 1e-2.
struct RunConfig {
  GridSpec grid;
  Model model;
  StepperConfig stepper;
  ScenarioConfig scenario;
  double kappa1 = -1.0;  // negative: choose automatically
  double kappa2 = -1.0;
  std::string output_dir = "out";

  void validate() const;  // throws ConfigError
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical parameter string hashed into snapshot headers, so a restart
// refuses data produced under different physics or resolution.
std::string params_digest_string(const RunConfig& rc);

}  // namespace chc
