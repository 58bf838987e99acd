#include "chc/scenario.hpp"

#include <cmath>

#include "chc/operators.hpp"

namespace chc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quantize_dyadic(double v) { return std::ldexp(std::nearbyint(std::ldexp(v, 30)), -30); }

void finalize(SystemState& s) {
  s.xi = trace(s.chi);
  s.mean_chi = mean(s.chi);
  s.mean_v = mean(s.v);
}

}  // namespace

SystemState make_constant_equilibrium(const GridSpec& g, double theta0,
                                      double chi0, double q_amplitude) {
  SystemState s(g);
  s.theta.fill(theta0);
  s.chi.fill(chi0);
  if (q_amplitude != 0.0) {
    InteriorField psi(g);
    for (int j = 0; j < g.ny; ++j) {
      const double sy = std::sin(kPi * g.y(j) / g.Ly);
      for (int i = 0; i < g.nx; ++i) {
        const double v =
            q_amplitude * std::sin(2.0 * kPi * g.x(i) / g.Lx) * sy * sy;
        psi.at(i, j) = quantize_dyadic(v);
      }
    }
    s.q = curl_of_stream(psi);
  }
  finalize(s);
  return s;
}

SystemState make_spinodal(const GridSpec& g, double theta0, double amplitude,
                          std::uint64_t seed, double mean_chi,
                          double stripe_amplitude) {
  SystemState s(g);
  s.theta.fill(theta0);
  SplitMix64 rng(seed);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      s.chi.at(i, j) = amplitude * rng.uniform_pm1();
    }
  }
  if (stripe_amplitude != 0.0) {
    for (int j = 0; j < g.ny; ++j) {
      const double c = stripe_amplitude * std::cos(kPi * g.y(j) / g.Ly);
      for (int i = 0; i < g.nx; ++i) s.chi.at(i, j) += c;
    }
  }
  s.chi.shift(mean_chi - mean(s.chi));
  finalize(s);
  return s;
}

SystemState make_mean_ode(const GridSpec& g, double theta0, double chi0,
                          double mean_chi1) {
  SystemState s(g);
  s.theta.fill(theta0);
  s.chi.fill(chi0);
  s.v.fill(mean_chi1);
  finalize(s);
  return s;
}

}  // namespace chc
