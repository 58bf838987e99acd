#include "chc/grid.hpp"

#include <cmath>
#include <string>

#include "chc/errors.hpp"

namespace chc {

void GridSpec::validate() const {
  if (!(Lx > 0.0) || !(Ly > 0.0))
    throw ConfigError("grid: Lx and Ly must be positive, got Lx=" +
                      std::to_string(Lx) + " Ly=" + std::to_string(Ly));
  if (nx < 4 || nx % 2 != 0)
    throw ConfigError("grid: nx must be even and >= 4, got " +
                      std::to_string(nx));
  if (ny < 3)
    throw ConfigError("grid: ny must be >= 3, got " + std::to_string(ny));
}

InteriorField& InteriorField::operator+=(const InteriorField& o) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
  return *this;
}

InteriorField& InteriorField::operator-=(const InteriorField& o) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
  return *this;
}

InteriorField& InteriorField::operator*=(double s) {
  for (double& v : a) v *= s;
  return *this;
}

void InteriorField::axpy(double s, const InteriorField& o) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * o.a[k];
}

void InteriorField::shift(double c) {
  for (double& v : a) v += c;
}

BoundaryField& BoundaryField::operator+=(const BoundaryField& o) {
  for (int i = 0; i < grid.nx; ++i) {
    bottom[i] += o.bottom[i];
    top[i] += o.top[i];
  }
  return *this;
}

BoundaryField& BoundaryField::operator-=(const BoundaryField& o) {
  for (int i = 0; i < grid.nx; ++i) {
    bottom[i] -= o.bottom[i];
    top[i] -= o.top[i];
  }
  return *this;
}

BoundaryField& BoundaryField::operator*=(double s) {
  for (int i = 0; i < grid.nx; ++i) {
    bottom[i] *= s;
    top[i] *= s;
  }
  return *this;
}

void BoundaryField::shift(double c) {
  for (int i = 0; i < grid.nx; ++i) {
    bottom[i] += c;
    top[i] += c;
  }
}

FluxField& FluxField::operator+=(const FluxField& o) {
  x += o.x;
  y += o.y;
  return *this;
}

FluxField& FluxField::operator-=(const FluxField& o) {
  x -= o.x;
  y -= o.y;
  return *this;
}

FluxField& FluxField::operator*=(double s) {
  x *= s;
  y *= s;
  return *this;
}

void FluxField::axpy(double s, const FluxField& o) {
  x.axpy(s, o.x);
  y.axpy(s, o.y);
}

double FluxField::wall_defect() const {
  const GridSpec& g = y.grid;
  double m = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    m = std::max(m, std::abs(y.at(i, 0)));
    m = std::max(m, std::abs(y.at(i, g.ny - 1)));
  }
  return m;
}

double mean(const InteriorField& u) {
  const GridSpec& g = u.grid;
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    double rs = 0.0;
    const double* r = u.row(j);
    for (int i = 0; i < g.nx; ++i) rs += r[i];
    s += g.wy(j) * rs;
  }
  return s * g.dx() / g.area();
}

double inner_l2(const InteriorField& u, const InteriorField& v) {
  const GridSpec& g = u.grid;
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    double rs = 0.0;
    const double* a = u.row(j);
    const double* b = v.row(j);
    for (int i = 0; i < g.nx; ++i) rs += a[i] * b[i];
    s += g.wy(j) * rs;
  }
  return s * g.dx();
}

double norm_l2(const InteriorField& u) { return std::sqrt(inner_l2(u, u)); }

double inner_l2(const FluxField& p, const FluxField& q) {
  return inner_l2(p.x, q.x) + inner_l2(p.y, q.y);
}

double norm_l2(const FluxField& q) { return std::sqrt(inner_l2(q, q)); }

double boundary_integral(const BoundaryField& b) {
  const GridSpec& g = b.grid;
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i) s += b.bottom[i] + b.top[i];
  return s * g.dx();
}

double inner_gamma(const BoundaryField& a, const BoundaryField& b) {
  const GridSpec& g = a.grid;
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i)
    s += a.bottom[i] * b.bottom[i] + a.top[i] * b.top[i];
  return s * g.dx();
}

double norm_gamma(const BoundaryField& b) {
  return std::sqrt(inner_gamma(b, b));
}

double h1_semi_sq(const InteriorField& u) {
  const GridSpec& g = u.grid;
  const int nx = g.nx, ny = g.ny;
  const double idx2 = 1.0 / (2.0 * g.dx());
  const double idy2 = 1.0 / (2.0 * g.dy());
  double s = 0.0;
  for (int j = 0; j < ny; ++j) {
    double rs = 0.0;
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
      const double ux = (u.at(ip, j) - u.at(im, j)) * idx2;
      double uy;
      if (j == 0) {
        uy = (-3.0 * u.at(i, 0) + 4.0 * u.at(i, 1) - u.at(i, 2)) * idy2;
      } else if (j == ny - 1) {
        uy = (3.0 * u.at(i, ny - 1) - 4.0 * u.at(i, ny - 2) + u.at(i, ny - 3)) *
             idy2;
      } else {
        uy = (u.at(i, j + 1) - u.at(i, j - 1)) * idy2;
      }
      rs += ux * ux + uy * uy;
    }
    s += g.wy(j) * rs;
  }
  return s * g.dx();
}

double gamma_semi_sq(const BoundaryField& b) {
  const GridSpec& g = b.grid;
  const int nx = g.nx;
  const double idx2 = 1.0 / (2.0 * g.dx());
  double s = 0.0;
  for (int i = 0; i < nx; ++i) {
    const int ip = (i + 1) % nx, im = (i + nx - 1) % nx;
    const double db = (b.bottom[ip] - b.bottom[im]) * idx2;
    const double dt = (b.top[ip] - b.top[im]) * idx2;
    s += db * db + dt * dt;
  }
  return s * g.dx();
}

double pair_h1_norm(const InteriorField& chi, const BoundaryField& xi) {
  const double sq = inner_l2(chi, chi) + h1_semi_sq(chi) + inner_gamma(xi, xi) +
                    gamma_semi_sq(xi);
  return std::sqrt(sq);
}

double dirichlet_form(const InteriorField& u, const InteriorField& w) {
  const GridSpec& g = u.grid;
  const int nx = g.nx, ny = g.ny;
  const double cx = g.dx() / (g.dx() * g.dx());  // dx * (1/dx)^2
  const double cy = g.dx() * g.dy() / (g.dy() * g.dy());
  double s = 0.0;
  // x part: forward differences, row weight wy(j).
  for (int j = 0; j < ny; ++j) {
    double rs = 0.0;
    const double* a = u.row(j);
    const double* b = w.row(j);
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx;
      rs += (a[ip] - a[i]) * (b[ip] - b[i]);
    }
    s += g.wy(j) * cx * rs;
  }
  // y part: forward differences between consecutive rows, unit weight per gap.
  for (int j = 0; j + 1 < ny; ++j) {
    const double* a0 = u.row(j);
    const double* a1 = u.row(j + 1);
    const double* b0 = w.row(j);
    const double* b1 = w.row(j + 1);
    double rs = 0.0;
    for (int i = 0; i < nx; ++i) rs += (a1[i] - a0[i]) * (b1[i] - b0[i]);
    s += cy * rs;
  }
  return s;
}

double boundary_dirichlet_form(const BoundaryField& a, const BoundaryField& b) {
  const GridSpec& g = a.grid;
  const int nx = g.nx;
  const double c = g.dx() / (g.dx() * g.dx());
  double s = 0.0;
  for (int i = 0; i < nx; ++i) {
    const int ip = (i + 1) % nx;
    s += (a.bottom[ip] - a.bottom[i]) * (b.bottom[ip] - b.bottom[i]);
    s += (a.top[ip] - a.top[i]) * (b.top[ip] - b.top[i]);
  }
  return c * s;
}

}  // namespace chc
