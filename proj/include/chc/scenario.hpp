#pragma once

#include <cstdint>

#include "chc/integrator.hpp"

namespace chc {

// splitmix64: the state advances by the golden-ratio increment and each
// output is a finalized mix of the state. Deterministic across platforms,
// used for all seeded initial data.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Uniform in [-1, 1) from the top 53 bits.
  double uniform_pm1() {
    return double(next() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }
};

// Constant state (theta0, chi0) with v = 0. A divergence-free flux of the
// given amplitude can be added from the stream function
// sin(2 pi x / Lx) sin^2(pi y / Ly), quantized to a dyadic lattice so its
// discrete divergence cancels exactly on power-of-two spacings.
SystemState make_constant_equilibrium(const GridSpec& g, double theta0,
                                      double chi0, double q_amplitude);

// Constant theta0, q = 0, v = 0, and chi = mean_chi + amplitude * noise
// (seeded, quadrature mean removed) + stripe_amplitude * cos(pi y / Ly).
SystemState make_spinodal(const GridSpec& g, double theta0, double amplitude,
                          std::uint64_t seed, double mean_chi,
                          double stripe_amplitude);

// Constant fields with v = mean_chi1: isolates the mean relaxation law.
SystemState make_mean_ode(const GridSpec& g, double theta0, double chi0,
                          double mean_chi1);

}  // namespace chc
