#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chc/grid.hpp"
#include "chc/integrator.hpp"
#include "chc/model.hpp"
#include "chc/operators.hpp"

namespace chc {

// Coupling weights and reference data for the energy functionals. The
// reference means are the quadrature means of the initial data (theta, chi,
// v); together with dt they fix the conserved total, the discrete mean split
// of v, and the equilibrium shift used by the shifted potentials.
struct DiagnosticsConfig {
  double kappa1 = 1e-2;
  double kappa2 = 1e-2;
  double dt = 1e-3;
  double ref_mean_theta = 0.0;
  double ref_mean_chi = 0.0;
  double ref_mean_v = 0.0;
};

// The smallness constraints the coupling weights must satisfy for the
// combined functional to stay equivalent to the squared state norm and for
// its decay inequality to close. C = lambda_1^{-1/2} is the Poincare
// constant of the grid (lambda_1 the smallest nonzero eigenvalue of A).
// Throws ConfigError naming the first violated constraint.
void kappa_preflight(const GridSpec& g, double kappa1, double kappa2);

// Largest admissible weights on this grid, each capped at the 1e-2 default:
// kappa2 from the flux-coupling constraints, then kappa1 from kappa2.
void kappa_auto(const GridSpec& g, double& kappa1, double& kappa2);

struct DiagnosticRecord {
  double t = 0.0;
  double conserved_total = 0.0;  // int (theta + chi)
  double mean_chi = 0.0;
  double mean_v = 0.0;
  double x_norm = 0.0;
  double energy_Y = 0.0;
  double lyap_E = 0.0;
  double func_G = 0.0;
  double lyap_H = 0.0;      // lyap_E + kappa2 * func_G by construction
  double dissipation_D = 0.0;
  double curl_norm = 0.0;
  double trace_residual = 0.0;  // Gamma norm of xi - trace(chi)
};

// Fixed CSV column order; part of the external output contract.
const std::vector<std::string>& diagnostic_columns();
std::vector<double> to_row(const DiagnosticRecord& r);

class Diagnostics {
 public:
  Diagnostics(const GridSpec& g, const Model& m, const DiagnosticsConfig& c);

  DiagnosticRecord record(const SystemState& s);

  // Only the combined functional lyap_E + kappa2 * func_G, skipping the
  // columns that need extra inverse-Laplacian solves; used where the
  // functional is sampled every step.
  double lyap_H_value(const SystemState& s);

  // Norm of the full state quintuple (theta, q, (chi, xi), v) in
  // L2 x L2 x H1-pair x V*.
  double x_norm(const SystemState& s);
  // Same norm applied to the componentwise difference of two states.
  double distance(const SystemState& a, const SystemState& b);

  const DiagnosticsConfig& config() const { return cfg_; }

 private:
  GridSpec grid_;
  Model model_;
  DiagnosticsConfig cfg_;
  A0Solver a0_;

  double vstar_sq(const InteriorField& u);
};

// X-norm distance between two states on the same grid; the standalone form
// used when no full Diagnostics instance is wanted.
double state_distance(A0Solver& a0, const SystemState& a, const SystemState& b);

// Sup distance of the sampled means from the continuous-in-time relaxation
// laws <v>(t) = <v0> exp(-t/eps) and
// <chi>(t) = <chi0> + eps <v0> (1 - exp(-t/eps)).
// Returned as (chi error, v error).
std::pair<double, double> mean_trajectory_error(
    const std::vector<DiagnosticRecord>& rows, const DiagnosticsConfig& c,
    double eps);

}  // namespace chc
