#pragma once

#include <vector>

namespace chc {

// Dense polynomial, coefficients in ascending order of degree.
struct Polynomial {
  std::vector<double> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

  double operator()(double y) const;
  Polynomial derivative() const;
  // Antiderivative vanishing at zero.
  Polynomial antiderivative() const;
  // Degree after ignoring trailing zero coefficients; -1 for the zero polynomial.
  int degree() const;
};

// Real roots via the companion matrix of the monic normalization.
std::vector<double> real_roots(const Polynomial& p);

// Minimum over the whole real line. Throws ConfigError when the polynomial is
// unbounded below (odd degree or negative leading coefficient).
double global_min(const Polynomial& p);

// max |p(y)| over [lo, hi].
double max_abs_on(const Polynomial& p, double lo, double hi);

// Physical parameters and the two potential derivatives: f drives the bulk
// phase separation, g the wall lines.
struct Model {
  Polynomial f;
  Polynomial g;
  double epsilon = 1.0;  // inertial coefficient of the phase equation
  double sigma = 1.0;    // heat flux relaxation time
  double alpha = 1.0;    // viscous regularization coefficient

  Polynomial F() const { return f.antiderivative(); }
  Polynomial G() const { return g.antiderivative(); }

  // Largest negative slope of f, clamped at zero: c0 = max(0, -min f').
  double c0() const;
  // Depth of the bulk potential well: c1 = max(0, -min F).
  double c1() const;

  // Throws ConfigError unless epsilon > 0, sigma > 0, alpha >= 0, and both
  // potentials F, G are bounded below with positive leading coefficients.
  void validate() const;

  static Model double_well();  // f(y) = g(y) = y^3 - y
};

}  // namespace chc
