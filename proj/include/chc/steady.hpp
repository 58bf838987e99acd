#pragma once

#include <utility>
#include <vector>

#include "chc/grid.hpp"
#include "chc/model.hpp"

namespace chc {

struct Equilibrium {
  InteriorField chi;
  BoundaryField xi;
  double theta_inf = 0.0;
  double mu_inf = 0.0;
  double residual_norm = 0.0;
  int newton_iterations = 0;
};

// Shifted interface functional on zero-mean bulk input:
//   Upsilon(u, v) = 1/2 int |grad u|^2 + 1/2 int_Gamma |grad_Gamma v|^2
//                 + int F(u + shift) + int_Gamma G(v + shift).
// The quadratic parts are the exact Galerkin forms of the discrete
// operators, so the gradient pairing below differentiates it exactly.
// Throws NumericalError when the bulk input has nonzero mean.
double upsilon(const GridSpec& g, const Model& m, const InteriorField& u,
               const BoundaryField& v, double shift);

// Metric gradient pair of Upsilon:
//   interior = P0(-Lap u + f(u + shift))   (trace closure with v)
//   boundary = -Lap_Gamma v + dnu u + g(v + shift)
// with the flux-compatible normal derivative, so that for any test pair
// (w, trace w) with zero-mean w
//   (interior, w)_Omega + (boundary, trace w)_Gamma = d/dh Upsilon(u+hw)|_0
// holds to rounding.
struct GradientM {
  InteriorField interior;
  BoundaryField boundary;
};
GradientM gradient_M(const GridSpec& g, const Model& m, const InteriorField& u,
                     const BoundaryField& v, double shift);

// Optional manufactured right-hand sides: the stationary system becomes
//   -Lap chi + f(chi) - mu = interior   in Omega
//   -Lap_Gamma xi + dnu chi + g(xi) = boundary   on Gamma.
struct StationarySources {
  InteriorField interior;
  BoundaryField boundary;
};

struct StationaryOptions {
  double tol = 1e-10;
  int max_outer = 200;       // Newton iterations plus descent phases
  int max_backtrack = 30;
  double constraint_mean = 0.0;  // imposed quadrature mean of chi
  double theta_inf = 0.0;        // reported limit temperature
  const StationarySources* sources = nullptr;
};

// Damped Newton with sparse LU on the stationary phase system: the bulk
// equation on every node (wall rows carry the surface equation through the
// Galerkin lift), the mean constraint, and the multiplier mu as unknown.
// Falls back to projected gradient descent on Upsilon when a Newton step
// cannot reduce the joint residual, then retries. Throws NumericalError if
// the joint residual does not reach opt.tol within the iteration budget.
Equilibrium solve_stationary(const GridSpec& g, const Model& m,
                             const InteriorField& seed,
                             const StationaryOptions& opt);

// The multiplier identity at a stationary point:
//   mu = <f(chi)> + |Omega|^{-1} int_Gamma g(xi).
double stationary_mu_identity(const GridSpec& g, const Model& m,
                              const InteriorField& chi,
                              const BoundaryField& xi);

struct FitResult {
  bool exponential = true;  // false: algebraic decay in (1+t)
  double exponent = 0.0;    // decay rate (exponential) or power (algebraic)
  double rho = 0.0;         // inferred convexity defect exponent
  double r2 = 0.0;
  bool monotone_tail = true;
  int points = 0;
};

// Least-squares fit of log d against both t and log(1+t) over the window
// t >= t_min, d > floor_d; reports the better model. Throws NumericalError
// when fewer than five points survive the window or the series is flat
// (distance stream at the solver noise floor).
FitResult fit_decay(const std::vector<std::pair<double, double>>& series,
                    double t_min = 0.0, double floor_d = 1e-9);

}  // namespace chc
