#include "chc/diagnostics.hpp"

#include <cmath>

#include "chc/errors.hpp"

namespace chc {

namespace {

double quad_potential(const GridSpec& g, const InteriorField& u,
                      const Polynomial& F, double shift) {
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double w = g.wy(j) * g.dx();
    const double* uj = u.row(j);
    double rowsum = 0.0;
    for (int i = 0; i < g.nx; ++i) rowsum += F(uj[i] + shift);
    s += w * rowsum;
  }
  return s;
}

double quad_potential_gamma(const GridSpec& g, const BoundaryField& b,
                            const Polynomial& G, double shift) {
  double s = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    s += G(b.bottom[i] + shift) + G(b.top[i] + shift);
  }
  return s * g.dx();
}

}  // namespace

void kappa_preflight(const GridSpec& g, double kappa1, double kappa2) {
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0) || !std::isfinite(kappa1) ||
      !std::isfinite(kappa2)) {
    throw ConfigError("diagnostics: coupling weights must be positive finite");
  }
  const double lam1 = lambda_min_nonzero(g);
  const double Csq = 1.0 / lam1;
  const double C = std::sqrt(Csq);
  if (kappa1 > 0.25) {
    throw ConfigError("diagnostics: weights fail kappa1 <= 1/4");
  }
  if (kappa2 * C > 0.5) {
    throw ConfigError("diagnostics: weights fail kappa2*C <= 1/2");
  }
  if (kappa1 + 0.5 * kappa2 * C > 0.5) {
    throw ConfigError("diagnostics: weights fail kappa1 + kappa2*C/2 <= 1/2");
  }
  if (0.5 * kappa2 * C * (C + 3.0) > 0.5) {
    throw ConfigError("diagnostics: weights fail kappa2*C*(C+3)/2 <= 1/2");
  }
  if (0.5 * kappa1 * Csq > 0.25 * kappa2) {
    throw ConfigError("diagnostics: weights fail kappa1*C^2/2 <= kappa2/4");
  }
}

void kappa_auto(const GridSpec& g, double& kappa1, double& kappa2) {
  const double lam1 = lambda_min_nonzero(g);
  const double Csq = 1.0 / lam1;
  const double C = std::sqrt(Csq);
  kappa2 = std::min({1e-2, 0.5 / C, 1.0 / (C * (C + 3.0))});
  kappa1 = std::min({1e-2, 0.25, kappa2 / (2.0 * Csq)});
  kappa_preflight(g, kappa1, kappa2);
}

const std::vector<std::string>& diagnostic_columns() {
  static const std::vector<std::string> cols = {
      "t",      "conserved_total", "mean_chi", "mean_v",
      "x_norm", "energy_Y",        "lyap_E",   "func_G",
      "lyap_H", "dissipation_D",   "curl_norm", "trace_residual"};
  return cols;
}

std::vector<double> to_row(const DiagnosticRecord& r) {
  return {r.t,      r.conserved_total, r.mean_chi,  r.mean_v,
          r.x_norm, r.energy_Y,        r.lyap_E,    r.func_G,
          r.lyap_H, r.dissipation_D,   r.curl_norm, r.trace_residual};
}

Diagnostics::Diagnostics(const GridSpec& g, const Model& m,
                         const DiagnosticsConfig& c)
    : grid_(g), model_(m), cfg_(c), a0_(g) {
  model_.validate();
  kappa_preflight(g, c.kappa1, c.kappa2);
  if (!(c.dt > 0.0)) throw ConfigError("diagnostics: dt must be positive");
}

double Diagnostics::vstar_sq(const InteriorField& u) {
  const double m = mean(u);
  return dual_norm_sq(a0_, u) + m * m;
}

double Diagnostics::x_norm(const SystemState& s) {
  const double ph = pair_h1_norm(s.chi, s.xi);
  double sq = norm_l2(s.theta) * norm_l2(s.theta) +
              inner_l2(s.q, s.q) + ph * ph + vstar_sq(s.v);
  return std::sqrt(sq);
}

double Diagnostics::distance(const SystemState& a, const SystemState& b) {
  return state_distance(a0_, a, b);
}

double state_distance(A0Solver& a0, const SystemState& a,
                      const SystemState& b) {
  InteriorField dth = a.theta;
  dth -= b.theta;
  FluxField dq = a.q;
  dq -= b.q;
  InteriorField dch = a.chi;
  dch -= b.chi;
  BoundaryField dxi = a.xi;
  dxi -= b.xi;
  InteriorField dv = a.v;
  dv -= b.v;
  const double ph = pair_h1_norm(dch, dxi);
  const double mdv = mean(dv);
  double sq = norm_l2(dth) * norm_l2(dth) + inner_l2(dq, dq) + ph * ph +
              dual_norm_sq(a0, dv) + mdv * mdv;
  return std::sqrt(sq);
}

DiagnosticRecord Diagnostics::record(const SystemState& s) {
  const double eps = model_.epsilon;
  const double sig = model_.sigma;
  const double al = model_.alpha;
  const double k1 = cfg_.kappa1;
  const double k2 = cfg_.kappa2;

  DiagnosticRecord r;
  r.t = s.t;

  const double mth = mean(s.theta);
  const double mch = mean(s.chi);
  const double mv = mean(s.v);
  r.conserved_total = (mth + mch) * grid_.area();
  r.mean_chi = mch;
  r.mean_v = mv;
  r.x_norm = x_norm(s);
  r.curl_norm = norm_l2(curl(s.q));
  {
    BoundaryField d = s.xi;
    d -= trace(s.chi);
    r.trace_residual = norm_gamma(d);
  }

  // Tilde variables: bulk means off theta and chi, the bulk chi mean off xi,
  // and the discrete closed-form mean history off v, so the split is exact
  // for the scheme.
  InteriorField tth = s.theta;
  tth.shift(-mth);
  InteriorField tch = s.chi;
  tch.shift(-mch);
  BoundaryField txi = s.xi;
  txi.shift(-mch);
  const long n = std::llround(s.t / cfg_.dt);
  const double q1 = cfg_.ref_mean_v *
                    std::pow((eps + cfg_.dt) / eps, -static_cast<double>(n));
  InteriorField tv = s.v;
  tv.shift(-q1);

  const double th_sq = inner_l2(tth, tth);
  const double q_sq = inner_l2(s.q, s.q);
  const double tv_dual = dual_norm_sq(a0_, tv);
  const double mtv = mean(tv);
  const double tv_vstar = tv_dual + mtv * mtv;

  // q against grad A^{-1} theta-tilde, the flux-temperature coupling.
  double q_cross;
  {
    InteriorField pth = tth;
    pth.shift(-mean(pth));
    q_cross = inner_l2(s.q, gradient(a0_.solve(pth)));
  }

  r.energy_Y = 0.5 * th_sq + 0.5 * sig * q_sq + 0.5 * eps * tv_dual +
               0.5 * dirichlet_form(tch, tch) +
               quad_potential(grid_, s.chi, model_.F(), 0.0) +
               0.5 * boundary_dirichlet_form(txi, txi) +
               0.5 * k1 * inner_gamma(txi, txi) +
               quad_potential_gamma(grid_, s.xi, model_.G(), 0.0) +
               k1 * eps * dual_inner(a0_, tv, tch) +
               0.5 * k1 * dual_norm_sq(a0_, tch) +
               0.5 * k1 * al * inner_l2(tch, tch) + k2 * sig * q_cross;

  // Shifted potentials: the tilde phase plus the conserved limit mean.
  const double s_inf = cfg_.ref_mean_chi + eps * cfg_.ref_mean_v;
  r.lyap_E = 0.5 * th_sq + 0.5 * sig * q_sq + 0.5 * eps * tv_vstar +
             0.5 * dirichlet_form(tch, tch) +
             0.5 * boundary_dirichlet_form(txi, txi) +
             quad_potential(grid_, tch, model_.F(), s_inf) +
             quad_potential_gamma(grid_, txi, model_.G(), s_inf) +
             k1 * sig * q_cross;

  // z = P0(-Lap^trace chi-tilde + f(chi-tilde + s_inf)), the stationary
  // residual the gradient functional pairs v against.
  InteriorField z = apply_A_dirichlet(tch, txi);
  for (int j = 0; j < grid_.ny; ++j) {
    const double* cj = tch.row(j);
    double* zj = z.row(j);
    for (int i = 0; i < grid_.nx; ++i) zj[i] += model_.f(cj[i] + s_inf);
  }
  z.shift(-mean(z));

  {
    InteriorField ptv = tv;
    ptv.shift(-mean(ptv));
    r.func_G = inner_l2(a0_.solve(ptv), a0_.solve(z));
  }
  r.lyap_H = r.lyap_E + k2 * r.func_G;

  BoundaryField txit = trace(s.v);
  txit.shift(-mv);
  r.dissipation_D = 0.5 * q_sq + 0.25 * tv_vstar +
                    0.5 * al * inner_l2(tv, tv) +
                    0.5 * inner_gamma(txit, txit) + 0.25 * k1 * th_sq +
                    0.5 * k2 * dual_norm_sq(a0_, z) + std::exp(-2.0 * s.t);
  return r;
}

double Diagnostics::lyap_H_value(const SystemState& s) {
  const double eps = model_.epsilon;
  const double sig = model_.sigma;
  const double k1 = cfg_.kappa1;
  const double k2 = cfg_.kappa2;

  const double mth = mean(s.theta);
  const double mch = mean(s.chi);
  InteriorField tth = s.theta;
  tth.shift(-mth);
  InteriorField tch = s.chi;
  tch.shift(-mch);
  BoundaryField txi = s.xi;
  txi.shift(-mch);
  const long n = std::llround(s.t / cfg_.dt);
  const double q1 = cfg_.ref_mean_v *
                    std::pow((eps + cfg_.dt) / eps, -static_cast<double>(n));
  InteriorField tv = s.v;
  tv.shift(-q1);

  const double th_sq = inner_l2(tth, tth);
  const double q_sq = inner_l2(s.q, s.q);
  const double mtv = mean(tv);
  const double tv_vstar = dual_norm_sq(a0_, tv) + mtv * mtv;

  double q_cross;
  {
    InteriorField pth = tth;
    pth.shift(-mean(pth));
    q_cross = inner_l2(s.q, gradient(a0_.solve(pth)));
  }

  const double s_inf = cfg_.ref_mean_chi + eps * cfg_.ref_mean_v;
  const double lyap_e = 0.5 * th_sq + 0.5 * sig * q_sq + 0.5 * eps * tv_vstar +
                        0.5 * dirichlet_form(tch, tch) +
                        0.5 * boundary_dirichlet_form(txi, txi) +
                        quad_potential(grid_, tch, model_.F(), s_inf) +
                        quad_potential_gamma(grid_, txi, model_.G(), s_inf) +
                        k1 * sig * q_cross;

  InteriorField z = apply_A_dirichlet(tch, txi);
  for (int j = 0; j < grid_.ny; ++j) {
    const double* cj = tch.row(j);
    double* zj = z.row(j);
    for (int i = 0; i < grid_.nx; ++i) zj[i] += model_.f(cj[i] + s_inf);
  }
  z.shift(-mean(z));

  double func_g;
  {
    InteriorField ptv = tv;
    ptv.shift(-mean(ptv));
    func_g = inner_l2(a0_.solve(ptv), a0_.solve(z));
  }
  return lyap_e + k2 * func_g;
}

std::pair<double, double> mean_trajectory_error(
    const std::vector<DiagnosticRecord>& rows, const DiagnosticsConfig& c,
    double eps) {
  double echi = 0.0;
  double ev = 0.0;
  for (const auto& r : rows) {
    const double decay = std::exp(-r.t / eps);
    const double vexp = c.ref_mean_v * decay;
    const double cexp = c.ref_mean_chi + eps * c.ref_mean_v * (1.0 - decay);
    ev = std::max(ev, std::abs(r.mean_v - vexp));
    echi = std::max(echi, std::abs(r.mean_chi - cexp));
  }
  return {echi, ev};
}

}  // namespace chc
