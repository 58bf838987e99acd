#include "chc/integrator.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "chc/errors.hpp"
#include "chc/operators.hpp"
#include "chc/scenario.hpp"
#include "doctest.h"

using namespace chc;

namespace {

double amax_diff(const InteriorField& a, const InteriorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i)
    m = std::max(m, std::abs(a.a[i] - b.a[i]));
  return m;
}

}  // namespace

TEST_CASE("stability ceiling is safety over the stiffest nonlinearity slope") {
  Model m = Model::double_well();
  // max |f'| on [-1.5, 1.5] is 5.75 for the double well.
  CHECK(stability_ceiling(m, -1.5, 1.5) ==
        doctest::Approx(1.0 / 5.75).epsilon(1e-12));
  CHECK(stability_ceiling(m, -1.5, 1.5, 0.5) ==
        doctest::Approx(0.5 / 5.75).epsilon(1e-12));
  // The floor keeps the ceiling finite and sane for flat nonlinearities.
  Model soft = Model::double_well();
  soft.f = Polynomial({0.0, 0.0, 0.0, 1e-6});
  CHECK(stability_ceiling(soft, -1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("stepper rejects nonpositive dt") {
  GridSpec g{1.0, 1.0, 8, 5};
  CHECK_THROWS_AS(Stepper(g, Model::double_well(), 0.0), ConfigError);
  CHECK_THROWS_AS(Stepper(g, Model::double_well(), -1e-3), ConfigError);
}

TEST_CASE("a well-minimum constant state is a numerical fixed point") {
  // chi = 1 has f(1) = g(1) = 0, so the exact dynamics are stationary; the
  // scheme should hold it to solver rounding while conserving theta + chi.
  GridSpec g{1.0, 1.0, 16, 9};
  Model m = Model::double_well();
  SystemState s = make_constant_equilibrium(g, 0.3, 1.0, 0.0);
  const double total0 = (mean(s.theta) + mean(s.chi)) * g.area();
  Stepper st(g, m, 1e-3);
  for (int n = 0; n < 100; ++n) st.step(s);

  InteriorField one(g);
  one.fill(1.0);
  CHECK(amax_diff(s.chi, one) < 1e-10);
  InteriorField th0(g);
  th0.fill(0.3);
  CHECK(amax_diff(s.theta, th0) < 1e-10);
  double vmax = 0.0;
  for (double v : s.v.a) vmax = std::max(vmax, std::abs(v));
  CHECK(vmax < 1e-7);
  // theta picks up solver rounding from the phase exchange, so the flux sits
  // at the induced noise floor rather than exactly zero.
  CHECK(norm_l2(s.q) < 1e-12);
  const double total = (mean(s.theta) + mean(s.chi)) * g.area();
  CHECK(std::abs(total - total0) < 1e-13 * std::abs(total0));
  CHECK(s.t == doctest::Approx(0.1));
}

TEST_CASE("mean dynamics follow the discrete relaxation recursions") {
  // With spatially constant data the bulk means obey scalar recursions:
  //   <v^n> = b^-n <chi_1>,  b = (eps + dt)/eps,
  //   <chi^n> = <chi^0> + eps <v^0> (1 - b^-n).
  GridSpec g{1.0, 1.0, 8, 5};
  Model m = Model::double_well();
  m.epsilon = 0.7;  // exercise a non-unit inertia weight
  const double dt = 1e-3;
  const double mc1 = 0.2;
  SystemState s = make_mean_ode(g, 0.05, 0.0, mc1);
  CHECK(mean(s.v) == doctest::Approx(mc1).epsilon(1e-14));

  Stepper st(g, m, dt);
  const double b = (m.epsilon + dt) / m.epsilon;
  const double total0 = (mean(s.theta) + mean(s.chi)) * g.area();
  for (int n = 1; n <= 200; ++n) {
    st.step(s);
    const double vexp = mc1 * std::pow(b, -double(n));
    const double cexp = m.epsilon * mc1 * (1.0 - std::pow(b, -double(n)));
    // Stored scalars follow the recursion exactly.
    CHECK(std::abs(s.mean_v - vexp) < 1e-13 * std::abs(vexp));
    CHECK(std::abs(s.mean_chi - cexp) < 1e-13 * std::max(1e-3, std::abs(cexp)));
    // Quadrature means of the pinned fields agree with the scalars.
    CHECK(std::abs(mean(s.v) - s.mean_v) < 1e-13);
    CHECK(std::abs(mean(s.chi) - s.mean_chi) < 1e-13);
  }
  const double total = (mean(s.theta) + mean(s.chi)) * g.area();
  CHECK(std::abs(total - total0) < 1e-12 * std::max(1.0, std::abs(total0)));
}

TEST_CASE("free flux decay matches the implicit damping factor") {
  // With theta identically zero and chi pinned at a well minimum the flux
  // obeys q^{n+1} = q^n / (1 + dt/sigma) exactly, so the curl does too.
  GridSpec g{1.0, 1.0, 32, 17};
  Model m = Model::double_well();
  m.sigma = 1.0;
  const double dt = 1e-3;
  SystemState s = make_constant_equilibrium(g, 0.0, 0.0, 1.0);
  const double c0 = norm_l2(curl(s.q));
  REQUIRE(c0 > 0.1);
  Stepper st(g, m, dt);
  for (int n = 1; n <= 200; ++n) st.step(s);
  const double expect = c0 * std::pow(1.0 + dt / m.sigma, -200.0);
  CHECK(std::abs(norm_l2(curl(s.q)) - expect) < 1e-12 * expect);
}

TEST_CASE("theta plus chi is conserved through spinodal decomposition") {
  GridSpec g{1.0, 1.0, 32, 17};
  Model m = Model::double_well();
  SystemState s = make_spinodal(g, 0.1, 0.05, 7, 0.0, 0.0);
  const double total0 = (mean(s.theta) + mean(s.chi)) * g.area();
  REQUIRE(std::abs(total0 - 0.1) < 1e-12);
  Stepper st(g, m, 1e-3);
  double worst = 0.0;
  for (int n = 0; n < 500; ++n) {
    st.step(s);
    const double total = (mean(s.theta) + mean(s.chi)) * g.area();
    worst = std::max(worst, std::abs(total - total0));
  }
  CHECK(worst < 1e-13 * std::abs(total0) + 1e-16);
}

TEST_CASE("stepping is deterministic") {
  GridSpec g{1.0, 1.0, 16, 9};
  Model m = Model::double_well();
  SystemState a = make_spinodal(g, 0.1, 0.05, 3, 0.0, 0.0);
  SystemState b = make_spinodal(g, 0.1, 0.05, 3, 0.0, 0.0);
  Stepper sa(g, m, 1e-3);
  Stepper sb(g, m, 1e-3);
  for (int n = 0; n < 50; ++n) {
    sa.step(a);
    sb.step(b);
  }
  CHECK(std::memcmp(a.chi.a.data(), b.chi.a.data(),
                    a.chi.a.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.theta.a.data(), b.theta.a.data(),
                    a.theta.a.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.v.a.data(), b.v.a.data(),
                    a.v.a.size() * sizeof(double)) == 0);
  CHECK(a.mean_chi == b.mean_chi);
  CHECK(a.mean_v == b.mean_v);
}

TEST_CASE("the boundary trace invariant holds after every step") {
  GridSpec g{1.0, 1.0, 16, 9};
  SystemState s = make_spinodal(g, 0.0, 0.1, 5, 0.1, 0.0);
  Stepper st(g, Model::double_well(), 1e-3);
  for (int n = 0; n < 20; ++n) {
    st.step(s);
    BoundaryField tr = trace(s.chi);
    for (int i = 0; i < g.nx; ++i) {
      CHECK(s.xi.bottom[i] == tr.bottom[i]);
      CHECK(s.xi.top[i] == tr.top[i]);
    }
  }
}

TEST_CASE("run honors t_end, cadence, and fires the initial observation") {
  GridSpec g{1.0, 1.0, 8, 5};
  SystemState s = make_constant_equilibrium(g, 0.0, 1.0, 0.0);
  Stepper st(g, Model::double_well(), 1e-2);
  std::vector<double> times;
  st.run(s, 0.1, 2e-2, [&](const SystemState& x) { times.push_back(x.t); });
  // t = 0 plus every second step of ten.
  REQUIRE(times.size() == 6);
  CHECK(times.front() == doctest::Approx(0.0));
  CHECK(times.back() == doctest::Approx(0.1));
  CHECK(times[1] == doctest::Approx(0.02));

  // A run to the current time is a no-op that still reports the state once.
  SystemState s2 = make_constant_equilibrium(g, 0.2, 0.5, 0.0);
  InteriorField before = s2.chi;
  int calls = 0;
  st.run(s2, 0.0, 1e-2, [&](const SystemState&) { ++calls; });
  CHECK(calls == 1);
  CHECK(amax_diff(s2.chi, before) == 0.0);
  CHECK(s2.t == 0.0);
}

TEST_CASE("non-finite states are reported as numerical errors") {
  GridSpec g{1.0, 1.0, 8, 5};
  SystemState s = make_constant_equilibrium(g, 0.0, 0.0, 0.0);
  s.chi.at(3, 2) = std::numeric_limits<double>::quiet_NaN();
  Stepper st(g, Model::double_well(), 1e-3);
  CHECK_THROWS_AS(st.step(s), NumericalError);
}
