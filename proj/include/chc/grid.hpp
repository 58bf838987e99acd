#pragma once

#include <vector>

namespace chc {

// Collocated grid on the periodic slab [0,Lx) x [0,Ly].
//
// Nodes sit at x_i = i*dx (i = 0..nx-1, periodic, dx = Lx/nx) and
// y_j = j*dy (j = 0..ny-1, dy = Ly/(ny-1)). Rows j = 0 and j = ny-1 lie on
// the two wall components of the boundary. Quadrature is uniform in x and
// trapezoid in y, so integrals of constants are exact:
//   int_Omega 1 = Lx*Ly,  int_Gamma 1 = 2*Lx.
struct GridSpec {
  double Lx = 1.0;
  double Ly = 1.0;
  int nx = 0;
  int ny = 0;

  double dx() const { return Lx / nx; }
  double dy() const { return Ly / (ny - 1); }
  double area() const { return Lx * Ly; }
  double boundary_length() const { return 2.0 * Lx; }
  // Trapezoid weight of row j (wall rows carry half weight).
  double wy(int j) const { return (j == 0 || j == ny - 1) ? 0.5 * dy() : dy(); }
  double x(int i) const { return i * dx(); }
  double y(int j) const { return j * dy(); }
  std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }

  // Throws ConfigError unless nx >= 4 and even (real-FFT symmetry), ny >= 3,
  // and both extents are positive.
  void validate() const;

  bool operator==(const GridSpec& o) const {
    return Lx == o.Lx && Ly == o.Ly && nx == o.nx && ny == o.ny;
  }
};

// Scalar field on all grid nodes, row-major with x fastest (value semantics).
struct InteriorField {
  GridSpec grid;
  std::vector<double> a;

  InteriorField() = default;
  explicit InteriorField(const GridSpec& g) : grid(g), a(g.size(), 0.0) {}

  double& at(int i, int j) { return a[std::size_t(j) * grid.nx + i]; }
  double at(int i, int j) const { return a[std::size_t(j) * grid.nx + i]; }
  double* row(int j) { return a.data() + std::size_t(j) * grid.nx; }
  const double* row(int j) const { return a.data() + std::size_t(j) * grid.nx; }

  void fill(double v) { a.assign(a.size(), v); }
  InteriorField& operator+=(const InteriorField& o);
  InteriorField& operator-=(const InteriorField& o);
  InteriorField& operator*=(double s);
  // this += s*o
  void axpy(double s, const InteriorField& o);
  void shift(double c);
};

// Values on the two boundary components (bottom row j = 0, top row j = ny-1),
// periodic in x.
struct BoundaryField {
  GridSpec grid;
  std::vector<double> bottom;
  std::vector<double> top;

  BoundaryField() = default;
  explicit BoundaryField(const GridSpec& g)
      : grid(g), bottom(g.nx, 0.0), top(g.nx, 0.0) {}

  BoundaryField& operator+=(const BoundaryField& o);
  BoundaryField& operator-=(const BoundaryField& o);
  BoundaryField& operator*=(double s);
  void shift(double c);
};

// Vector field (qx, qy) at grid nodes. The wall rows of qy are identically
// zero, which is the discrete q.nu = 0 wall condition; every constructor and
// operator producing a FluxField maintains it.
struct FluxField {
  InteriorField x;
  InteriorField y;

  FluxField() = default;
  explicit FluxField(const GridSpec& g) : x(g), y(g) {}

  FluxField& operator+=(const FluxField& o);
  FluxField& operator-=(const FluxField& o);
  FluxField& operator*=(double s);
  void axpy(double s, const FluxField& o);
  // Largest |qy| on the wall rows; 0 for a well-formed field.
  double wall_defect() const;
};

// Quadrature and inner products.
double mean(const InteriorField& u);
double inner_l2(const InteriorField& u, const InteriorField& v);
double norm_l2(const InteriorField& u);
double inner_l2(const FluxField& p, const FluxField& q);
double norm_l2(const FluxField& q);
double boundary_integral(const BoundaryField& b);
double inner_gamma(const BoundaryField& a, const BoundaryField& b);
double norm_gamma(const BoundaryField& b);

// H1 seminorm square int |grad u|^2 with centered differences in x and
// one-sided second-order rows at the walls (measurement gradient).
double h1_semi_sq(const InteriorField& u);
// Surface H1 seminorm square with centered periodic differences.
double gamma_semi_sq(const BoundaryField& b);
// sqrt(|chi|^2 + |grad chi|^2 + |xi|_Gamma^2 + |grad_Gamma xi|_Gamma^2).
double pair_h1_norm(const InteriorField& chi, const BoundaryField& xi);

// Staggered (forward-difference) Dirichlet form. This is the quadratic form
// of apply_A's Neumann closure: dirichlet_form(u, w) = (apply_A(u), w) exactly
// in the trapezoid inner product, which the energy functionals rely on.
double dirichlet_form(const InteriorField& u, const InteriorField& w);
// Same identity on the boundary: (lap_gamma analog) forward differences in x.
double boundary_dirichlet_form(const BoundaryField& a, const BoundaryField& b);

}  // namespace chc
