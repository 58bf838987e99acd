#include "chc/steady.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "chc/errors.hpp"
#include "chc/operators.hpp"

namespace chc {

double upsilon(const GridSpec& g, const Model& m, const InteriorField& u,
               const BoundaryField& v, double shift) {
  const double mu = mean(u);
  if (std::abs(mu) > 1e-10 * std::max(1.0, norm_l2(u))) {
    throw NumericalError("upsilon: bulk input must have zero mean");
  }
  double val = 0.5 * dirichlet_form(u, u) + 0.5 * boundary_dirichlet_form(v, v);
  const Polynomial F = m.F();
  const Polynomial G = m.G();
  for (int j = 0; j < g.ny; ++j) {
    const double w = g.wy(j) * g.dx();
    const double* uj = u.row(j);
    double rowsum = 0.0;
    for (int i = 0; i < g.nx; ++i) rowsum += F(uj[i] + shift);
    val += w * rowsum;
  }
  double bsum = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    bsum += G(v.bottom[i] + shift) + G(v.top[i] + shift);
  }
  val += bsum * g.dx();
  return val;
}

GradientM gradient_M(const GridSpec& g, const Model& m, const InteriorField& u,
                     const BoundaryField& v, double shift) {
  GradientM out;
  out.interior = apply_A_dirichlet(u, v);
  for (int j = 0; j < g.ny; ++j) {
    const double* uj = u.row(j);
    double* rj = out.interior.row(j);
    for (int i = 0; i < g.nx; ++i) rj[i] += m.f(uj[i] + shift);
  }
  out.interior.shift(-mean(out.interior));

  BoundaryField lb = laplace_beltrami(v);
  BoundaryField dn = normal_derivative_compatible(u);
  out.boundary = BoundaryField(g);
  for (int i = 0; i < g.nx; ++i) {
    out.boundary.bottom[i] =
        -lb.bottom[i] + dn.bottom[i] + m.g(v.bottom[i] + shift);
    out.boundary.top[i] = -lb.top[i] + dn.top[i] + m.g(v.top[i] + shift);
  }
  return out;
}

double stationary_mu_identity(const GridSpec& g, const Model& m,
                              const InteriorField& chi,
                              const BoundaryField& xi) {
  InteriorField fc(g);
  for (int j = 0; j < g.ny; ++j) {
    const double* cj = chi.row(j);
    double* fj = fc.row(j);
    for (int i = 0; i < g.nx; ++i) fj[i] = m.f(cj[i]);
  }
  double bsum = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    bsum += m.g(xi.bottom[i]) + m.g(xi.top[i]);
  }
  return mean(fc) + bsum * g.dx() / g.area();
}

namespace {

// Stationary residual with the multiplier removed: every node carries the
// bulk equation, wall nodes additionally the (2/dy)-weighted surface
// equation (the Galerkin combination of the two).
InteriorField residual_base(const GridSpec& g, const Model& m,
                            const InteriorField& chi,
                            const StationarySources* src) {
  const double cw = 2.0 / g.dy();
  const int nx = g.nx;
  const int ny = g.ny;
  BoundaryField xi = trace(chi);
  InteriorField R = apply_A(chi);
  BoundaryField lb = laplace_beltrami(xi);
  for (int i = 0; i < nx; ++i) {
    R.at(i, 0) += cw * (-lb.bottom[i] + m.g(xi.bottom[i]));
    R.at(i, ny - 1) += cw * (-lb.top[i] + m.g(xi.top[i]));
  }
  for (int j = 0; j < ny; ++j) {
    const double* cj = chi.row(j);
    double* rj = R.row(j);
    for (int i = 0; i < nx; ++i) rj[i] += m.f(cj[i]);
  }
  if (src != nullptr) {
    R -= src->interior;
    for (int i = 0; i < nx; ++i) {
      R.at(i, 0) -= cw * src->boundary.bottom[i];
      R.at(i, ny - 1) -= cw * src->boundary.top[i];
    }
  }
  return R;
}

double merit(const InteriorField& Rbase, double mu, double mean_defect) {
  InteriorField R = Rbase;
  R.shift(-mu);
  return inner_l2(R, R) + mean_defect * mean_defect;
}

double descent_objective(const GridSpec& g, const Model& m,
                         const InteriorField& chi, double cmean,
                         const StationarySources* src) {
  InteriorField u = chi;
  u.shift(-mean(u));
  BoundaryField v = trace(chi);
  v.shift(-cmean);
  double obj = upsilon(g, m, u, v, cmean);
  if (src != nullptr) {
    obj -= inner_l2(src->interior, u);
    BoundaryField tb = v;
    obj -= inner_gamma(src->boundary, tb);
  }
  return obj;
}

}  // namespace

Equilibrium solve_stationary(const GridSpec& g, const Model& m,
                             const InteriorField& seed,
                             const StationaryOptions& opt) {
  g.validate();
  m.validate();
  const int nx = g.nx;
  const int ny = g.ny;
  const int N = nx * ny;
  const double ax = 1.0 / (g.dx() * g.dx());
  const double ay = 1.0 / (g.dy() * g.dy());
  const double cw = 2.0 / g.dy();
  const Polynomial fp = m.f.derivative();
  const Polynomial gp = m.g.derivative();

  InteriorField chi = seed;
  chi.shift(opt.constraint_mean - mean(chi));
  double mu = mean(residual_base(g, m, chi, opt.sources));

  using SpMat = Eigen::SparseMatrix<double>;
  Eigen::SparseLU<SpMat> lu;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(std::size_t(N) * 8 + N + 1);
  const auto idx = [nx](int i, int j) { return j * nx + i; };

  int iterations = 0;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    InteriorField Rbase = residual_base(g, m, chi, opt.sources);
    const double defect = mean(chi) - opt.constraint_mean;
    double phi = merit(Rbase, mu, defect);
    if (std::sqrt(phi) <= opt.tol) break;

    // Newton system on (chi, mu) with the mean constraint as last row.
    trips.clear();
    for (int j = 0; j < ny; ++j) {
      const bool bottom = (j == 0);
      const bool top = (j == ny - 1);
      for (int i = 0; i < nx; ++i) {
        const int r = idx(i, j);
        const int il = (i + nx - 1) % nx;
        const int ir = (i + 1) % nx;
        double diag = 2.0 * ax + 2.0 * ay + fp(chi.at(i, j));
        double xoff = -ax;
        if (bottom || top) {
          diag += cw * (2.0 * ax + gp(chi.at(i, j)));
          xoff -= cw * ax;
          trips.emplace_back(r, idx(i, bottom ? 1 : ny - 2), -2.0 * ay);
        } else {
          trips.emplace_back(r, idx(i, j - 1), -ay);
          trips.emplace_back(r, idx(i, j + 1), -ay);
        }
        trips.emplace_back(r, idx(il, j), xoff);
        trips.emplace_back(r, idx(ir, j), xoff);
        trips.emplace_back(r, r, diag);
        trips.emplace_back(r, N, -1.0);
        trips.emplace_back(N, r, g.wy(j) * g.dx() / g.area());
      }
    }
    SpMat J(N + 1, N + 1);
    J.setFromTriplets(trips.begin(), trips.end());
    lu.compute(J);
    if (lu.info() != Eigen::Success) {
      throw NumericalError("stationary solve: singular Newton system");
    }
    Eigen::VectorXd rhs(N + 1);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        rhs[idx(i, j)] = -(Rbase.at(i, j) - mu);
      }
    }
    rhs[N] = -defect;
    Eigen::VectorXd delta = lu.solve(rhs);
    ++iterations;

    // Backtracking on the joint residual.
    bool accepted = false;
    double s = 1.0;
    for (int bt = 0; bt <= opt.max_backtrack; ++bt) {
      InteriorField chi_try = chi;
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) chi_try.at(i, j) += s * delta[idx(i, j)];
      }
      const double mu_try = mu + s * delta[N];
      InteriorField Rb_try = residual_base(g, m, chi_try, opt.sources);
      const double defect_try = mean(chi_try) - opt.constraint_mean;
      const double phi_try = merit(Rb_try, mu_try, defect_try);
      if (phi_try <= phi * (1.0 - 1e-4 * s)) {
        chi = std::move(chi_try);
        mu = mu_try;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (accepted) continue;

    // Gradient-descent fallback on the interface functional, mean projected
    // out, until the landscape is locally benign again.
    double tau0;
    {
      const double fmax = max_abs_on(fp, -2.0, 2.0);
      const double gmax = max_abs_on(gp, -2.0, 2.0);
      tau0 = 1.0 / (2.0 * ax + 2.0 * ay + cw * (2.0 * ax + gmax) + fmax);
    }
    double obj = descent_objective(g, m, chi, opt.constraint_mean, opt.sources);
    for (int k = 0; k < 50; ++k) {
      InteriorField d = residual_base(g, m, chi, opt.sources);
      d.shift(-mean(d));
      double tau = tau0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        InteriorField chi_try = chi;
        chi_try.axpy(-tau, d);
        chi_try.shift(opt.constraint_mean - mean(chi_try));
        const double obj_try =
            descent_objective(g, m, chi_try, opt.constraint_mean, opt.sources);
        if (obj_try < obj) {
          chi = std::move(chi_try);
          obj = obj_try;
          moved = true;
          break;
        }
        tau *= 0.5;
      }
      if (!moved) break;
    }
    mu = mean(residual_base(g, m, chi, opt.sources));
  }

  Equilibrium eq;
  eq.chi = chi;
  eq.xi = trace(chi);
  eq.theta_inf = opt.theta_inf;
  eq.mu_inf = mu;
  eq.newton_iterations = iterations;
  {
    InteriorField Rbase = residual_base(g, m, chi, opt.sources);
    const double defect = mean(chi) - opt.constraint_mean;
    eq.residual_norm = std::sqrt(merit(Rbase, mu, defect));
  }
  if (eq.residual_norm > opt.tol) {
    throw NumericalError(
        "stationary solve did not reach tolerance: residual = " +
        std::to_string(eq.residual_norm));
  }
  return eq;
}

FitResult fit_decay(const std::vector<std::pair<double, double>>& series,
                    double t_min, double floor_d) {
  std::vector<double> ts;
  std::vector<double> logd;
  std::vector<double> ds;
  for (const auto& [t, d] : series) {
    if (t < t_min) continue;
    if (!(d > floor_d) || !std::isfinite(d)) continue;
    ts.push_back(t);
    ds.push_back(d);
    logd.push_back(std::log(d));
  }
  const int n = int(ts.size());
  if (n < 5) {
    throw NumericalError("fit_decay: fewer than five points in the window");
  }
  double ymin = logd[0];
  double ymax = logd[0];
  for (double y : logd) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (ymax - ymin < 1e-6) {
    throw NumericalError(
        "fit_decay: distance series is flat (noise floor reached)");
  }

  const auto regress = [&](const std::vector<double>& xs, double& slope,
                           double& r2) {
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < n; ++i) {
      sx += xs[i];
      sy += logd[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dx = xs[i] - mx;
      const double dy = logd[i] - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    slope = sxy / sxx;
    const double ssres = syy - sxy * sxy / sxx;
    r2 = 1.0 - ssres / syy;
  };

  std::vector<double> lt(n);
  for (int i = 0; i < n; ++i) lt[i] = std::log1p(ts[i]);
  double slope_exp, r2_exp, slope_alg, r2_alg;
  regress(ts, slope_exp, r2_exp);
  regress(lt, slope_alg, r2_alg);

  FitResult fr;
  fr.points = n;
  if (r2_exp >= r2_alg) {
    fr.exponential = true;
    fr.exponent = -slope_exp;
    fr.rho = 0.5;
    fr.r2 = r2_exp;
  } else {
    fr.exponential = false;
    fr.exponent = -slope_alg;
    // exponent p = rho/(1 - 2 rho) inverted.
    fr.rho = fr.exponent / (1.0 + 2.0 * fr.exponent);
    fr.r2 = r2_alg;
  }
  fr.monotone_tail = true;
  for (int i = 0; i + 1 < n; ++i) {
    if (ds[i + 1] > ds[i] * (1.0 + 1e-3)) fr.monotone_tail = false;
  }
  return fr;
}

}  // namespace chc
