#include "chc/integrator.hpp"

#include <cmath>
#include <utility>

#include "chc/errors.hpp"
#include "chc/operators.hpp"

namespace chc {

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("stepper: dt must be positive and finite");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw ConfigError("stepper: t_end must be nonnegative and finite");
  }
  if (!(cadence > 0.0) || !std::isfinite(cadence)) {
    throw ConfigError("stepper: cadence must be positive and finite");
  }
  if (snapshot_every < 0.0 || !std::isfinite(snapshot_every)) {
    throw ConfigError("stepper: snapshot_every must be nonnegative");
  }
  if (!(stability_lo < stability_hi)) {
    throw ConfigError("stepper: stability range must satisfy lo < hi");
  }
}

double stability_ceiling(const Model& m, double lo, double hi, double safety) {
  double fp = max_abs_on(m.f.derivative(), lo, hi);
  return safety / std::max(fp, 1.0);
}

Stepper::Stepper(const GridSpec& g, const Model& m, double dt)
    : grid_(g), model_(m), dt_(dt), fft_(g) {
  grid_.validate();
  model_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("stepper: dt must be positive and finite");
  }
  build_phase_systems();
}

void Stepper::build_phase_systems() {
  const int ny = grid_.ny;
  const double dy = grid_.dy();
  const double ay = 1.0 / (dy * dy);
  const double cw = 2.0 / dy;
  const double eps = model_.epsilon;
  const double al = model_.alpha;
  const double c0 = (eps + dt_) / (dt_ * dt_);

  const int nk = fft_.num_kx();
  phase_lu_.clear();
  phase_lu_.reserve(nk);
  for (int k = 0; k < nk; ++k) {
    const double lx = lambda_x(grid_, k);

    // A: the mean-preserving Neumann Laplacian of the heat flux closure,
    // restricted to x wavenumber k.
    BandedMatrix A(ny, 1, 1);
    A.at(0, 0) = lx + 2.0 * ay;
    A.at(0, 1) = -2.0 * ay;
    for (int j = 1; j < ny - 1; ++j) {
      A.at(j, j - 1) = -ay;
      A.at(j, j) = lx + 2.0 * ay;
      A.at(j, j + 1) = -ay;
    }
    A.at(ny - 1, ny - 2) = -2.0 * ay;
    A.at(ny - 1, ny - 1) = lx + 2.0 * ay;

    // K: the implicit part of the chemical potential. Interior rows are the
    // Laplacian plus alpha/dt from the viscous term; wall rows absorb the
    // dynamic boundary condition through ghost elimination, which adds
    // (2/dy)(1/dt + lx) for the implicit xi_t and surface-diffusion terms.
    BandedMatrix K(ny, 1, 1);
    const double wall_diag = lx + 2.0 * ay + cw * (1.0 / dt_ + lx) + al / dt_;
    K.at(0, 0) = wall_diag;
    K.at(0, 1) = -2.0 * ay;
    for (int j = 1; j < ny - 1; ++j) {
      K.at(j, j - 1) = -ay;
      K.at(j, j) = lx + 2.0 * ay + al / dt_;
      K.at(j, j + 1) = -ay;
    }
    K.at(ny - 1, ny - 2) = -2.0 * ay;
    K.at(ny - 1, ny - 1) = wall_diag;

    BandedMatrix M = multiply(A, K);
    for (int j = 0; j < ny; ++j) M.at(j, j) += c0;
    phase_lu_.emplace_back(std::move(M));
  }
}

void Stepper::step(SystemState& s) {
  const int nx = grid_.nx;
  const int ny = grid_.ny;
  const double dt = dt_;
  const double eps = model_.epsilon;
  const double sig = model_.sigma;
  const double al = model_.alpha;
  const double dy = grid_.dy();
  const double cw = 2.0 / dy;
  const double c0 = (eps + dt) / (dt * dt);

  // Flux update: (sigma/dt)(q* - q) + q* = -grad theta, solved pointwise.
  // Wall rows of grad theta are masked, so q.nu = 0 stays exact and modes
  // with grad theta = 0 decay by a single rounding per step.
  const double aq = sig / (sig + dt);
  const double bq = dt / (sig + dt);
  {
    FluxField gth = gradient(s.theta);
    for (std::size_t p = 0; p < s.q.x.a.size(); ++p) {
      s.q.x.a[p] = aq * s.q.x.a[p] - bq * gth.x.a[p];
      s.q.y.a[p] = aq * s.q.y.a[p] - bq * gth.y.a[p];
    }
  }

  // Explicit part of the chemical potential, with the dynamic-boundary lift
  // on the wall rows.
  InteriorField m0(grid_);
  for (int j = 0; j < ny; ++j) {
    const double* cj = s.chi.row(j);
    const double* tj = s.theta.row(j);
    double* mj = m0.row(j);
    for (int i = 0; i < nx; ++i) {
      mj[i] = model_.f(cj[i]) - tj[i] - (al / dt) * cj[i];
    }
  }
  for (int i = 0; i < nx; ++i) {
    m0.at(i, 0) += cw * (-s.chi.at(i, 0) / dt + model_.g(s.xi.bottom[i]));
    m0.at(i, ny - 1) += cw * (-s.chi.at(i, ny - 1) / dt + model_.g(s.xi.top[i]));
  }

  InteriorField rhs = apply_A(m0);
  for (std::size_t p = 0; p < rhs.a.size(); ++p) {
    rhs.a[p] = c0 * s.chi.a[p] + (eps / dt) * s.v.a[p] - rhs.a[p];
  }

  // Phase solve, one pentadiagonal system per x wavenumber.
  fft_.forward(rhs);
  std::vector<double> re(ny), im(ny);
  for (int k = 0; k < fft_.num_kx(); ++k) {
    fft_.gather(k, re, im);
    phase_lu_[k].solve(re);
    phase_lu_[k].solve(im);
    fft_.scatter(k, re, im);
  }
  InteriorField chi_new(grid_);
  fft_.inverse(chi_new);

  // Pin the means to the exact scalar recursions (see SystemState).
  const double sfac = eps * dt / (eps + dt);
  const double decay = (eps + dt) / eps;
  const double target_mc = s.mean_chi + sfac * s.mean_v;
  const double target_mv = s.mean_v / decay;
  chi_new.shift(target_mc - mean(chi_new));

  InteriorField v_new(grid_);
  for (std::size_t p = 0; p < v_new.a.size(); ++p) {
    v_new.a[p] = (chi_new.a[p] - s.chi.a[p]) / dt;
  }
  v_new.shift(target_mv - mean(v_new));

  // Temperature update from the heat balance. Using the pointwise phase
  // increment makes int(theta + chi) an algebraic invariant because the flux
  // divergence integrates to zero exactly.
  //
  // The collocated centered gradient cannot see odd-even node oscillations,
  // so without a remedy the phase exchange deposits a small checkerboard in
  // theta that no flux ever removes. The scaled second-difference smoother
  // below is O(h^2)-consistent, has exactly zero quadrature (both directional
  // parts telescope under the trapezoid weights), and damps each parity mode
  // by a factor (1 - 4 c_sm dt) per step, so the steady temperature is a
  // genuine constant.
  {
    const double c_sm = 0.25;
    InteriorField sm(grid_);
    for (int j = 0; j < ny; ++j) {
      const int jd = (j == 0) ? 1 : j - 1;
      const int ju = (j == ny - 1) ? ny - 2 : j + 1;
      const double* tj = s.theta.row(j);
      const double* td = s.theta.row(jd);
      const double* tu = s.theta.row(ju);
      double* sj = sm.row(j);
      for (int i = 0; i < nx; ++i) {
        const int il = (i + nx - 1) % nx;
        const int ir = (i + 1) % nx;
        sj[i] = c_sm * (4.0 * tj[i] - tj[il] - tj[ir] - td[i] - tu[i]);
      }
    }
    InteriorField dq = divergence(s.q);
    for (std::size_t p = 0; p < s.theta.a.size(); ++p) {
      s.theta.a[p] -= dt * (dq.a[p] + sm.a[p]) + (chi_new.a[p] - s.chi.a[p]);
    }
  }

  s.xi = trace(chi_new);
  s.chi = std::move(chi_new);
  s.v = std::move(v_new);
  s.t += dt;
  s.mean_chi = target_mc;
  s.mean_v = target_mv;
  ++steps_taken_;

  double abs_sum = 0.0;  // a sum propagates NaN where a max would mask it
  for (std::size_t p = 0; p < s.chi.a.size(); ++p) {
    abs_sum += std::abs(s.chi.a[p]) + std::abs(s.theta.a[p]);
  }
  if (!std::isfinite(abs_sum)) {
    throw NumericalError("solution lost finiteness at step " +
                         std::to_string(steps_taken_) + ", t = " +
                         std::to_string(s.t));
  }
}

void Stepper::run(SystemState& s, double t_end, double cadence,
                  const std::function<void(const SystemState&)>& observer) {
  const long nsteps = std::llround((t_end - s.t) / dt_);
  if (observer) observer(s);
  if (nsteps <= 0) return;
  const long cadence_steps =
      std::max<long>(1, std::lround(cadence / dt_));
  for (long n = 1; n <= nsteps; ++n) {
    step(s);
    if (observer && (n % cadence_steps == 0 || n == nsteps)) observer(s);
  }
}

}  // namespace chc
