#pragma once

#include <functional>
#include <vector>

#include "chc/banded.hpp"
#include "chc/fft_workspace.hpp"
#include "chc/grid.hpp"
#include "chc/model.hpp"

namespace chc {

// Full dynamic state. xi is maintained equal to trace(chi). mean_chi and
// mean_v carry the quadrature means through the exact scalar recursions
//   mean_v(n+1)   = mean_v(n) / (1 + dt/epsilon)
//   mean_chi(n+1) = mean_chi(n) + (epsilon dt / (epsilon + dt)) mean_v(n)
// and the fields are re-pinned to them after every linear solve, so the
// conservation identities hold at the 1e-12 level over long runs instead of
// accumulating solver rounding. Snapshots store both scalars so a restarted
// run reproduces the original trajectory bit for bit.
struct SystemState {
  InteriorField theta;
  FluxField q;
  InteriorField chi;
  BoundaryField xi;
  InteriorField v;
  double t = 0.0;
  double mean_chi = 0.0;
  double mean_v = 0.0;

  explicit SystemState(const GridSpec& g)
      : theta(g), q(g), chi(g), xi(g), v(g) {}
};

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double cadence = 1e-2;       // diagnostics output spacing
  double snapshot_every = 0.0; // 0 disables periodic snapshots
  double stability_lo = -1.5;  // state range for the dt ceiling check
  double stability_hi = 1.5;

  void validate() const;  // throws ConfigError
};

// Empirical time step ceiling from the explicit treatment of f:
// safety / max(|f'| over [lo, hi], 1). A heuristic, not a theorem.
double stability_ceiling(const Model& m, double lo, double hi,
                         double safety = 1.0);

// One IMEX step: flux update (pointwise implicit), phase solve (per-x-
// wavenumber banded systems in y with the dynamic wall rows eliminated into
// the matrix), then the temperature update from the new flux divergence and
// phase increment, which makes the total heat content an algebraic invariant.
class Stepper {
 public:
  Stepper(const GridSpec& g, const Model& m, double dt);

  void step(SystemState& s);

  // Repeated step() with an observer fired at t = 0, every cadence, and at
  // the final time. The observer sees the state after the step.
  void run(SystemState& s, double t_end, double cadence,
           const std::function<void(const SystemState&)>& observer);

  double dt() const { return dt_; }
  const Model& model() const { return model_; }

 private:
  GridSpec grid_;
  Model model_;
  double dt_;
  FftWorkspace fft_;
  std::vector<BandedLU> phase_lu_;  // one factorization per x wavenumber
  long steps_taken_ = 0;

  void build_phase_systems();
};

}  // namespace chc
