#pragma once

#include <memory>
#include <vector>

#include "chc/banded.hpp"
#include "chc/fft_workspace.hpp"
#include "chc/grid.hpp"

namespace chc {

// First derivatives. x is periodic centered. The y derivative is centered in
// the interior with one-sided first-order wall rows chosen so that the
// integration by parts identity
//   <divergence(q), u>_W = -<q, gradient(u)>_W
// holds to rounding for any flux whose normal component vanishes at the walls,
// and the quadrature of divergence(q) is exactly zero for such fluxes.
FluxField gradient(const InteriorField& u);  // y component masked to 0 at walls
InteriorField divergence(const FluxField& q);
InteriorField curl(const FluxField& q);  // dx(qy) - dy(qx)

// q = (dy(psi), -dx(psi)) with the same derivative stencils, so
// divergence(curl_of_stream(psi)) vanishes to rounding. If psi is zero on the
// walls the normal component of q is exactly zero there.
FluxField curl_of_stream(const InteriorField& psi);

// Negative Laplacian with reflecting wall closure (wall rows see a mirrored
// ghost value, equivalent to a zero normal derivative). Self-adjoint in the
// trapezoid inner product, annihilates constants, and its quadrature is
// exactly zero for every input.
InteriorField apply_A(const InteriorField& u);

// Negative Laplacian whose wall rows use prescribed wall values and a
// one-sided second-order vertical stencil (first-order three-point fallback
// when ny < 5).
InteriorField apply_A_dirichlet(const InteriorField& u, const BoundaryField& wall);

BoundaryField trace(const InteriorField& u);

// Outward normal derivative at the walls, one-sided second-order.
BoundaryField normal_derivative(const InteriorField& u);

// Outward normal derivative built as the exact gap between the reflecting and
// prescribed-value wall rows of the negative Laplacian:
//   <apply_A(u), w>_W = <apply_A_dirichlet(u, trace(u)), w>_W
//                       + <normal_derivative_compatible(u), trace(w)>_Gamma
// for every u, w. This is the flux that makes discrete surface integration by
// parts exact.
BoundaryField normal_derivative_compatible(const InteriorField& u);

// Periodic second derivative along each wall line.
BoundaryField laplace_beltrami(const BoundaryField& b);

// Eigenvalues of apply_A on the product cosine basis:
//   apply_A(cos(2 pi k x / Lx) * cos(pi m y / Ly)) =
//     (lambda_x(k) + lambda_y(m)) * same
double lambda_x(const GridSpec& g, int k);
double lambda_y(const GridSpec& g, int m);
// Smallest nonzero eigenvalue, min(lambda_x(1), lambda_y(1)).
double lambda_min_nonzero(const GridSpec& g);

// Inverse of apply_A on the zero-mean subspace, pinned by a zero-mean
// constraint. FFT in x, cached tridiagonal factorizations in y. Throws
// NumericalError when the right-hand side has a mean beyond tolerance.
class A0Solver {
 public:
  explicit A0Solver(const GridSpec& g);

  // Returns the zero-mean u with apply_A(u) = rhs.
  InteriorField solve(const InteriorField& rhs);

  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  FftWorkspace fft_;
  std::vector<BandedLU> lu_;  // index k; k = 0 holds the pinned subsystem
};

// <P0 u, inverse(P0 v)> where P0 subtracts the mean and inverse is the
// A0Solver solve. Symmetric in its field arguments.
double dual_inner(A0Solver& s, const InteriorField& u, const InteriorField& v);
double dual_norm_sq(A0Solver& s, const InteriorField& u);

}  // namespace chc
