#include "chc/operators.hpp"

#include <cmath>
#include <vector>

#include "chc/errors.hpp"
#include "chc/scenario.hpp"
#include "doctest.h"

using namespace chc;

namespace {

constexpr double kPi = 3.14159265358979323846;

InteriorField cos_mode(const GridSpec& g, int k, int m) {
  InteriorField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      u.at(i, j) = std::cos(2.0 * kPi * k * g.x(i) / g.Lx) *
                   std::cos(kPi * m * g.y(j) / g.Ly);
  return u;
}

InteriorField random_field(const GridSpec& g, std::uint64_t seed) {
  SplitMix64 rng{seed};
  InteriorField u(g);
  for (double& v : u.a) v = rng.uniform_pm1();
  return u;
}

FluxField random_flux(const GridSpec& g, std::uint64_t seed) {
  SplitMix64 rng{seed};
  FluxField q(g);
  for (double& v : q.x.a) v = rng.uniform_pm1();
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx; ++i) q.y.at(i, j) = rng.uniform_pm1();
  return q;
}

double amax(const InteriorField& u) {
  double m = 0.0;
  for (double v : u.a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("apply_A has the product cosine modes as exact eigenvectors") {
  GridSpec g{1.5, 2.0, 32, 17};
  for (auto [k, m] : std::vector<std::pair<int, int>>{{1, 1}, {3, 2}, {0, 4}}) {
    InteriorField u = cos_mode(g, k, m);
    const double lam = lambda_x(g, k) + lambda_y(g, m);
    InteriorField au = apply_A(u);
    InteriorField diff = au;
    InteriorField lu = u;
    lu *= lam;
    diff -= lu;
    CHECK(amax(diff) < 1e-11 * std::max(1.0, lam));
  }
}

TEST_CASE("apply_A kills constants and integrates to zero") {
  GridSpec g{1.3, 0.9, 12, 7};
  InteriorField c(g);
  c.fill(2.75);
  CHECK(amax(apply_A(c)) == 0.0);
  InteriorField u = random_field(g, 11);
  const double scale = 1.0 / (g.dx() * g.dx());
  CHECK(std::abs(mean(apply_A(u))) < 1e-13 * scale);
}

TEST_CASE("apply_A is self-adjoint and matches the Dirichlet form") {
  GridSpec g{1.3, 0.9, 12, 7};
  InteriorField u = random_field(g, 21);
  InteriorField w = random_field(g, 22);
  const double auw = inner_l2(apply_A(u), w);
  const double uaw = inner_l2(u, apply_A(w));
  const double scale = 1.0 / (g.dy() * g.dy());
  CHECK(std::abs(auw - uaw) < 1e-12 * scale);
  CHECK(std::abs(dirichlet_form(u, w) - auw) < 1e-12 * scale);
}

TEST_CASE("divergence and gradient satisfy summation by parts") {
  GridSpec g{1.3, 0.9, 12, 9};
  FluxField q = random_flux(g, 31);
  InteriorField u = random_field(g, 32);
  const double lhs = inner_l2(divergence(q), u);
  double rhs;
  {
    FluxField gu = gradient(u);
    rhs = -inner_l2(q, gu);
    CHECK(gu.wall_defect() == 0.0);
  }
  const double scale = 1.0 / g.dy();
  CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
  // The flux divergence integrates to exactly zero when q.nu = 0.
  CHECK(std::abs(mean(divergence(q))) < 1e-13 * scale);
}

TEST_CASE("gradient is exact on linear fields and masked at walls") {
  GridSpec g{1.0, 2.0, 8, 9};
  InteriorField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.at(i, j) = 3.0 * g.y(j) - 1.0;
  FluxField gu = gradient(u);
  CHECK(amax(gu.x) < 1e-13);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx; ++i)
      CHECK(gu.y.at(i, j) == doctest::Approx(3.0).epsilon(1e-13));
  for (int i = 0; i < g.nx; ++i) {
    CHECK(gu.y.at(i, 0) == 0.0);
    CHECK(gu.y.at(i, g.ny - 1) == 0.0);
  }
}

TEST_CASE("stream function fluxes are exactly divergence free") {
  // Power-of-two spacings plus dyadically quantized stream values make every
  // difference and scaling exact in binary floating point, so the mixed
  // derivative cancellation has no rounding residue at all.
  GridSpec g{1.0, 1.0, 16, 9};
  SplitMix64 rng{77};
  InteriorField psi(g);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 0; i < g.nx; ++i)
      psi.at(i, j) = std::ldexp(std::nearbyint(std::ldexp(rng.uniform_pm1(), 30)), -30);
  FluxField q = curl_of_stream(psi);
  CHECK(q.wall_defect() == 0.0);
  CHECK(amax(divergence(q)) == 0.0);
  CHECK(norm_l2(curl(q)) > 0.1);  // carries actual vorticity
}

TEST_CASE("normal derivatives are exact for quadratics in y") {
  GridSpec g{1.0, 2.0, 8, 9};
  InteriorField u(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) u.at(i, j) = g.y(j) * g.y(j);
  BoundaryField nd = normal_derivative(u);
  for (int i = 0; i < g.nx; ++i) {
    CHECK(nd.bottom[i] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nd.top[i] == doctest::Approx(2.0 * g.Ly).epsilon(1e-12));
  }
}

TEST_CASE("the compatible normal derivative closes surface integration by parts") {
  GridSpec g{1.3, 0.9, 12, 9};
  InteriorField u = random_field(g, 41);
  InteriorField w = random_field(g, 42);
  const double lhs = inner_l2(apply_A(u), w);
  const double rhs = inner_l2(apply_A_dirichlet(u, trace(u)), w) +
                     inner_gamma(normal_derivative_compatible(u), trace(w));
  const double scale = 1.0 / (g.dy() * g.dy());
  CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
}

TEST_CASE("laplace_beltrami diagonalizes on wall cosine modes") {
  GridSpec g{1.5, 1.0, 32, 5};
  BoundaryField b(g);
  for (int i = 0; i < g.nx; ++i) {
    b.bottom[i] = std::cos(2.0 * kPi * 2.0 * g.x(i) / g.Lx);
    b.top[i] = std::sin(2.0 * kPi * 3.0 * g.x(i) / g.Lx);
  }
  BoundaryField lb = laplace_beltrami(b);
  const double l2 = lambda_x(g, 2);
  const double l3 = lambda_x(g, 3);
  for (int i = 0; i < g.nx; ++i) {
    CHECK(lb.bottom[i] == doctest::Approx(-l2 * b.bottom[i]).epsilon(1e-10));
    CHECK(lb.top[i] == doctest::Approx(-l3 * b.top[i]).epsilon(1e-10));
  }
}

TEST_CASE("lambda_min_nonzero matches the frozen 64x33 value") {
  GridSpec g{1.0, 1.0, 64, 33};
  const double expect = std::min(lambda_x(g, 1), lambda_y(g, 1));
  CHECK(lambda_min_nonzero(g) == doctest::Approx(expect));
  // Frozen: (2 - 2 cos(pi/32)) * 32^2.
  CHECK(lambda_min_nonzero(g) == doctest::Approx(9.8616798).epsilon(1e-6));
}

TEST_CASE("A0Solver inverts apply_A on the zero-mean subspace") {
  GridSpec g{1.3, 0.9, 16, 9};
  A0Solver a0(g);
  InteriorField u = random_field(g, 51);
  u.shift(-mean(u));

  InteriorField rhs = apply_A(u);
  InteriorField back = a0.solve(rhs);
  InteriorField diff = back;
  diff -= u;
  CHECK(amax(diff) < 1e-11);
  CHECK(std::abs(mean(back)) < 1e-13);

  // Round trip in the other direction.
  InteriorField z = random_field(g, 52);
  z.shift(-mean(z));
  InteriorField az = apply_A(a0.solve(z));
  az -= z;
  CHECK(amax(az) < 1e-10);
}

TEST_CASE("A0Solver is self-adjoint and rejects nonzero-mean input") {
  GridSpec g{1.3, 0.9, 16, 9};
  A0Solver a0(g);
  InteriorField a = random_field(g, 61);
  a.shift(-mean(a));
  InteriorField b = random_field(g, 62);
  b.shift(-mean(b));
  const double sab = inner_l2(a0.solve(a), b);
  const double asb = inner_l2(a, a0.solve(b));
  CHECK(std::abs(sab - asb) < 1e-11);

  InteriorField c(g);
  c.fill(0.5);
  CHECK_THROWS_AS(a0.solve(c), NumericalError);
}

TEST_CASE("A0Solver inverts discrete eigenmodes exactly") {
  GridSpec g{1.0, 1.0, 32, 17};
  A0Solver a0(g);
  InteriorField phi = cos_mode(g, 1, 1);
  const double lam = lambda_x(g, 1) + lambda_y(g, 1);
  InteriorField got = a0.solve(phi);
  InteriorField expect = phi;
  expect *= 1.0 / lam;
  got -= expect;
  CHECK(amax(got) < 1e-12);
}

TEST_CASE("inverse eigenvalues converge at second order") {
  // Against the continuous operator, 1/lambda_h(1,1) -> 1/(4 pi^2 + pi^2)
  // at O(h^2); the error of A0 applied to the sampled continuous mode is
  // |1/lambda_h - 1/lambda_c| * |phi|.
  const double lam_c = 4.0 * kPi * kPi + kPi * kPi;
  std::vector<double> errs;
  for (int n : {32, 64, 128}) {
    GridSpec g{1.0, 1.0, n, n / 2 + 1};
    A0Solver a0(g);
    InteriorField phi = cos_mode(g, 1, 1);
    InteriorField got = a0.solve(phi);
    InteriorField expect = phi;
    expect *= 1.0 / lam_c;
    got -= expect;
    errs.push_back(norm_l2(got));
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  CHECK(o1 > 1.9);
  CHECK(o2 > 1.9);
  CHECK(o1 < 2.5);
  CHECK(o2 < 2.5);
}

TEST_CASE("dual inner products project means and stay symmetric") {
  GridSpec g{1.3, 0.9, 16, 9};
  A0Solver a0(g);
  InteriorField u = random_field(g, 71);  // nonzero mean on purpose
  InteriorField v = random_field(g, 72);
  const double uv = dual_inner(a0, u, v);
  const double vu = dual_inner(a0, v, u);
  CHECK(uv == doctest::Approx(vu).epsilon(1e-10));
  CHECK(dual_norm_sq(a0, u) > 0.0);
  // Shifting by a constant changes nothing after projection.
  InteriorField us = u;
  us.shift(3.0);
  CHECK(dual_norm_sq(a0, us) == doctest::Approx(dual_norm_sq(a0, u)).epsilon(1e-11));
}
