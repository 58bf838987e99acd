#include "chc/operators.hpp"

#include <cmath>
#include <numbers>

#include "chc/errors.hpp"

namespace chc {

namespace {

inline int wrap_next(int i, int nx) { return i + 1 == nx ? 0 : i + 1; }
inline int wrap_prev(int i, int nx) { return i == 0 ? nx - 1 : i - 1; }

}  // namespace

FluxField gradient(const InteriorField& u) {
  const GridSpec& g = u.grid;
  FluxField q(g);
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double inv2dy = 1.0 / (2.0 * g.dy());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      q.x.at(i, j) = (u.at(wrap_next(i, g.nx), j) - u.at(wrap_prev(i, g.nx), j)) * inv2dx;
    }
  }
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      q.y.at(i, j) = (u.at(i, j + 1) - u.at(i, j - 1)) * inv2dy;
    }
  }
  // Wall rows of the y component stay zero: fluxes never cross the walls.
  return q;
}

InteriorField divergence(const FluxField& q) {
  const GridSpec& g = q.x.grid;
  InteriorField d(g);
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double invdy = 1.0 / g.dy();
  const int top = g.ny - 1;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double dy_part;
      if (j == 0) {
        dy_part = (q.y.at(i, 1) - q.y.at(i, 0)) * invdy;
      } else if (j == top) {
        dy_part = (q.y.at(i, top) - q.y.at(i, top - 1)) * invdy;
      } else {
        dy_part = (q.y.at(i, j + 1) - q.y.at(i, j - 1)) * 0.5 * invdy;
      }
      d.at(i, j) = (q.x.at(wrap_next(i, g.nx), j) - q.x.at(wrap_prev(i, g.nx), j)) * inv2dx + dy_part;
    }
  }
  return d;
}

InteriorField curl(const FluxField& q) {
  const GridSpec& g = q.x.grid;
  InteriorField c(g);
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double invdy = 1.0 / g.dy();
  const int top = g.ny - 1;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double dy_qx;
      if (j == 0) {
        dy_qx = (q.x.at(i, 1) - q.x.at(i, 0)) * invdy;
      } else if (j == top) {
        dy_qx = (q.x.at(i, top) - q.x.at(i, top - 1)) * invdy;
      } else {
        dy_qx = (q.x.at(i, j + 1) - q.x.at(i, j - 1)) * 0.5 * invdy;
      }
      c.at(i, j) = (q.y.at(wrap_next(i, g.nx), j) - q.y.at(wrap_prev(i, g.nx), j)) * inv2dx - dy_qx;
    }
  }
  return c;
}

FluxField curl_of_stream(const InteriorField& psi) {
  const GridSpec& g = psi.grid;
  FluxField q(g);
  const double inv2dx = 1.0 / (2.0 * g.dx());
  const double invdy = 1.0 / g.dy();
  const int top = g.ny - 1;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double dy_psi;
      if (j == 0) {
        dy_psi = (psi.at(i, 1) - psi.at(i, 0)) * invdy;
      } else if (j == top) {
        dy_psi = (psi.at(i, top) - psi.at(i, top - 1)) * invdy;
      } else {
        dy_psi = (psi.at(i, j + 1) - psi.at(i, j - 1)) * 0.5 * invdy;
      }
      q.x.at(i, j) = dy_psi;
      q.y.at(i, j) = -(psi.at(wrap_next(i, g.nx), j) - psi.at(wrap_prev(i, g.nx), j)) * inv2dx;
    }
  }
  return q;
}

InteriorField apply_A(const InteriorField& u) {
  const GridSpec& g = u.grid;
  InteriorField out(g);
  const double ax = 1.0 / (g.dx() * g.dx());
  const double ay = 1.0 / (g.dy() * g.dy());
  const int top = g.ny - 1;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double xpart =
          (2.0 * u.at(i, j) - u.at(wrap_next(i, g.nx), j) - u.at(wrap_prev(i, g.nx), j)) * ax;
      double ypart;
      if (j == 0) {
        ypart = 2.0 * (u.at(i, 0) - u.at(i, 1)) * ay;
      } else if (j == top) {
        ypart = 2.0 * (u.at(i, top) - u.at(i, top - 1)) * ay;
      } else {
        ypart = (2.0 * u.at(i, j) - u.at(i, j + 1) - u.at(i, j - 1)) * ay;
      }
      out.at(i, j) = xpart + ypart;
    }
  }
  return out;
}

InteriorField apply_A_dirichlet(const InteriorField& u, const BoundaryField& wall) {
  const GridSpec& g = u.grid;
  InteriorField w = u;
  const int top = g.ny - 1;
  for (int i = 0; i < g.nx; ++i) {
    w.at(i, 0) = wall.bottom[i];
    w.at(i, top) = wall.top[i];
  }
  InteriorField out(g);
  const double ax = 1.0 / (g.dx() * g.dx());
  const double ay = 1.0 / (g.dy() * g.dy());
  for (int j = 1; j < top; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double xpart =
          (2.0 * w.at(i, j) - w.at(wrap_next(i, g.nx), j) - w.at(wrap_prev(i, g.nx), j)) * ax;
      const double ypart = (2.0 * w.at(i, j) - w.at(i, j + 1) - w.at(i, j - 1)) * ay;
      out.at(i, j) = xpart + ypart;
    }
  }
  const bool wide = g.ny >= 5;
  for (int i = 0; i < g.nx; ++i) {
    const double xb = (2.0 * wall.bottom[i] - wall.bottom[wrap_next(i, g.nx)] -
                       wall.bottom[wrap_prev(i, g.nx)]) * ax;
    const double xt = (2.0 * wall.top[i] - wall.top[wrap_next(i, g.nx)] -
                       wall.top[wrap_prev(i, g.nx)]) * ax;
    double yb;
    double yt;
    if (wide) {
      yb = (2.0 * wall.bottom[i] - 5.0 * w.at(i, 1) + 4.0 * w.at(i, 2) - w.at(i, 3)) * ay;
      yt = (2.0 * wall.top[i] - 5.0 * w.at(i, top - 1) + 4.0 * w.at(i, top - 2) -
            w.at(i, top - 3)) * ay;
    } else {
      yb = (wall.bottom[i] - 2.0 * w.at(i, 1) + w.at(i, 2)) * ay;
      yt = (wall.top[i] - 2.0 * w.at(i, top - 1) + w.at(i, top - 2)) * ay;
    }
    out.at(i, 0) = xb - yb;
    out.at(i, top) = xt - yt;
  }
  return out;
}

BoundaryField trace(const InteriorField& u) {
  const GridSpec& g = u.grid;
  BoundaryField b(g);
  const int top = g.ny - 1;
  for (int i = 0; i < g.nx; ++i) {
    b.bottom[i] = u.at(i, 0);
    b.top[i] = u.at(i, top);
  }
  return b;
}

BoundaryField normal_derivative(const InteriorField& u) {
  const GridSpec& g = u.grid;
  BoundaryField b(g);
  const double c = 1.0 / (2.0 * g.dy());
  const int top = g.ny - 1;
  for (int i = 0; i < g.nx; ++i) {
    b.bottom[i] = (3.0 * u.at(i, 0) - 4.0 * u.at(i, 1) + u.at(i, 2)) * c;
    b.top[i] = (3.0 * u.at(i, top) - 4.0 * u.at(i, top - 1) + u.at(i, top - 2)) * c;
  }
  return b;
}

BoundaryField normal_derivative_compatible(const InteriorField& u) {
  const GridSpec& g = u.grid;
  if (g.ny < 5) return normal_derivative(u);
  BoundaryField b(g);
  const double c = 1.0 / (2.0 * g.dy());
  const int top = g.ny - 1;
  for (int i = 0; i < g.nx; ++i) {
    b.bottom[i] =
        (4.0 * u.at(i, 0) - 7.0 * u.at(i, 1) + 4.0 * u.at(i, 2) - u.at(i, 3)) * c;
    b.top[i] = (4.0 * u.at(i, top) - 7.0 * u.at(i, top - 1) + 4.0 * u.at(i, top - 2) -
                u.at(i, top - 3)) * c;
  }
  return b;
}

BoundaryField laplace_beltrami(const BoundaryField& b) {
  const GridSpec& g = b.grid;
  BoundaryField out(g);
  const double ax = 1.0 / (g.dx() * g.dx());
  for (int i = 0; i < g.nx; ++i) {
    const int ip = wrap_next(i, g.nx);
    const int im = wrap_prev(i, g.nx);
    out.bottom[i] = (b.bottom[ip] - 2.0 * b.bottom[i] + b.bottom[im]) * ax;
    out.top[i] = (b.top[ip] - 2.0 * b.top[i] + b.top[im]) * ax;
  }
  return out;
}

double lambda_x(const GridSpec& g, int k) {
  const double t = 2.0 * std::numbers::pi * k / g.nx;
  return (2.0 - 2.0 * std::cos(t)) / (g.dx() * g.dx());
}

double lambda_y(const GridSpec& g, int m) {
  const double t = std::numbers::pi * m / (g.ny - 1);
  return (2.0 - 2.0 * std::cos(t)) / (g.dy() * g.dy());
}

double lambda_min_nonzero(const GridSpec& g) {
  return std::min(lambda_x(g, 1), lambda_y(g, 1));
}

A0Solver::A0Solver(const GridSpec& g) : grid_(g), fft_(g) {
  const int ny = g.ny;
  const double ay = 1.0 / (g.dy() * g.dy());
  lu_.reserve(fft_.num_kx());
  {
    // Zero mode: drop the last unknown (pinned to zero) and keep the leading
    // (ny - 1) rows, which stay uniquely solvable.
    const int n0 = ny - 1;
    BandedMatrix m(n0, 1, 1);
    m.at(0, 0) = 2.0 * ay;
    m.at(0, 1) = -2.0 * ay;
    for (int j = 1; j < n0; ++j) {
      m.at(j, j - 1) = -ay;
      m.at(j, j) = 2.0 * ay;
      if (j + 1 < n0) m.at(j, j + 1) = -ay;
    }
    lu_.emplace_back(std::move(m));
  }
  for (int k = 1; k < fft_.num_kx(); ++k) {
    const double lx = lambda_x(g, k);
    BandedMatrix m(ny, 1, 1);
    m.at(0, 0) = lx + 2.0 * ay;
    m.at(0, 1) = -2.0 * ay;
    for (int j = 1; j < ny - 1; ++j) {
      m.at(j, j - 1) = -ay;
      m.at(j, j) = lx + 2.0 * ay;
      m.at(j, j + 1) = -ay;
    }
    m.at(ny - 1, ny - 2) = -2.0 * ay;
    m.at(ny - 1, ny - 1) = lx + 2.0 * ay;
    lu_.emplace_back(std::move(m));
  }
}

InteriorField A0Solver::solve(const InteriorField& rhs) {
  const double m = mean(rhs);
  if (std::abs(m) > 1e-10 * std::max(1.0, norm_l2(rhs))) {
    throw NumericalError("A0Solver: right-hand side mean exceeds tolerance");
  }
  fft_.forward(rhs);
  std::vector<double> re;
  std::vector<double> im;
  const int ny = grid_.ny;
  {
    fft_.gather(0, re, im);
    double wsum = 0.0;
    double wre = 0.0;
    double wim = 0.0;
    for (int j = 0; j < ny; ++j) {
      wsum += grid_.wy(j);
      wre += grid_.wy(j) * re[j];
      wim += grid_.wy(j) * im[j];
    }
    wre /= wsum;
    wim /= wsum;
    for (int j = 0; j < ny; ++j) {
      re[j] -= wre;
      im[j] -= wim;
    }
    std::vector<double> sub(ny - 1);
    for (int j = 0; j < ny - 1; ++j) sub[j] = re[j];
    lu_[0].solve(sub);
    for (int j = 0; j < ny - 1; ++j) re[j] = sub[j];
    re[ny - 1] = 0.0;
    for (int j = 0; j < ny - 1; ++j) sub[j] = im[j];
    lu_[0].solve(sub);
    for (int j = 0; j < ny - 1; ++j) im[j] = sub[j];
    im[ny - 1] = 0.0;
    fft_.scatter(0, re, im);
  }
  for (int k = 1; k < fft_.num_kx(); ++k) {
    fft_.gather(k, re, im);
    lu_[k].solve(re);
    lu_[k].solve(im);
    fft_.scatter(k, re, im);
  }
  InteriorField u(grid_);
  fft_.inverse(u);
  u.shift(-mean(u));
  return u;
}

double dual_inner(A0Solver& s, const InteriorField& u, const InteriorField& v) {
  InteriorField pu = u;
  pu.shift(-mean(pu));
  InteriorField pv = v;
  pv.shift(-mean(pv));
  InteriorField w = s.solve(pv);
  return inner_l2(pu, w);
}

double dual_norm_sq(A0Solver& s, const InteriorField& u) {
  InteriorField pu = u;
  pu.shift(-mean(pu));
  InteriorField w = s.solve(pu);
  return inner_l2(pu, w);
}

}  // namespace chc
