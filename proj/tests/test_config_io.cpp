#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "chc/config.hpp"
#include "chc/csvio.hpp"
#include "chc/errors.hpp"
#include "chc/scenario.hpp"
#include "chc/snapshot.hpp"
#include "doctest.h"

using namespace chc;

namespace {

const char* kFullConfig =
    "[grid]\n"
    "Lx = 1.0\n"
    "Ly = 2.0\n"
    "nx = 32\n"
    "ny = 17\n"
    "\n"
    "[params]\n"
    "epsilon = 0.5\n"
    "sigma = 2.0\n"
    "alpha = 0.25\n"
    "f_coeffs = 0, -1, 0, 1\n"
    "g_coeffs = 0, -0.5, 0, 0.5\n"
    "\n"
    "[stepper]\n"
    "dt = 2e-3\n"
    "t_end = 1.5\n"
    "cadence = 1e-1\n"
    "snapshot_every = 0.5\n"
    "\n"
    "[diagnostics]\n"
    "kappa1 = 5e-3\n"
    "kappa2 = auto\n"
    "\n"
    "[scenario]\n"
    "name = spinodal\n"
    "theta0 = 0.1\n"
    "amplitude = 0.07\n"
    "seed = 42\n"
    "mean_chi = 0.2\n"
    "\n"
    "[output]\n"
    "dir = run1\n";

std::string temp_path(const char* name) {
  return std::string("io_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("config parsing fills every section") {
  RunConfig rc = parse_config(kFullConfig);
  CHECK(rc.grid.Lx == 1.0);
  CHECK(rc.grid.Ly == 2.0);
  CHECK(rc.grid.nx == 32);
  CHECK(rc.grid.ny == 17);
  CHECK(rc.model.epsilon == 0.5);
  CHECK(rc.model.sigma == 2.0);
  CHECK(rc.model.alpha == 0.25);
  CHECK(rc.model.f(2.0) == doctest::Approx(6.0));
  CHECK(rc.model.g(2.0) == doctest::Approx(3.0));
  CHECK(rc.stepper.dt == 2e-3);
  CHECK(rc.stepper.t_end == 1.5);
  CHECK(rc.stepper.snapshot_every == 0.5);
  CHECK(rc.kappa1 == 5e-3);
  CHECK(rc.kappa2 == -1.0);  // auto
  CHECK(rc.scenario.name == "spinodal");
  CHECK(rc.scenario.seed == 42);
  CHECK(rc.scenario.mean_chi == 0.2);
  CHECK(rc.output_dir == "run1");
  CHECK_NOTHROW(rc.validate());
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config("[grid]\nLx = 1\nbogus = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nosuch]\na = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nLx = 1\nLx = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nLx = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("Lx = 1\n"), ConfigError);  // key before section
  // Scenario keys foreign to the named scenario are rejected.
  CHECK_THROWS_AS(parse_config("[scenario]\nname = mean-ode\namplitude = 0.1\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config("[scenario]\nname = constant-equilibrium\nseed = 3\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = nosuch\n"), ConfigError);
}

TEST_CASE("an empty config is rejected as incomplete") {
  // Parsing validates the assembled configuration, so a config that never
  // sets the grid fails immediately.
  CHECK_THROWS_AS(parse_config(""), ConfigError);
}

TEST_CASE("digest string pins physics and resolution") {
  RunConfig a = parse_config(kFullConfig);
  RunConfig b = parse_config(kFullConfig);
  CHECK(params_digest_string(a) == params_digest_string(b));
  b.model.epsilon = 0.25;
  CHECK(params_digest_string(a) != params_digest_string(b));
  b = parse_config(kFullConfig);
  b.grid.nx = 64;
  CHECK(params_digest_string(a) != params_digest_string(b));
  b = parse_config(kFullConfig);
  b.stepper.dt = 1e-3;
  CHECK(params_digest_string(a) != params_digest_string(b));
}

TEST_CASE("fnv1a matches the published test vector") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("abc") == 0xe71fa2190541574bull);
}

TEST_CASE("snapshots round trip byte for byte") {
  GridSpec g{1.0, 2.0, 16, 9};
  SystemState s = make_spinodal(g, 0.1, 0.3, 77, 0.05, 0.0);
  s.t = 0.625;
  s.mean_chi = 0.05;
  s.mean_v = -0.125;
  const std::string p1 = temp_path("snap1.chc");
  const std::string p2 = temp_path("snap2.chc");
  write_snapshot(p1, s, 0xdeadbeefcafe1234ull);

  std::uint64_t digest = 0;
  SystemState r = read_snapshot(p1, &digest);
  CHECK(digest == 0xdeadbeefcafe1234ull);
  CHECK(r.t == s.t);
  CHECK(r.mean_chi == s.mean_chi);
  CHECK(r.mean_v == s.mean_v);
  CHECK(r.chi.grid == g);
  CHECK(std::memcmp(r.chi.a.data(), s.chi.a.data(),
                    s.chi.a.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(r.theta.a.data(), s.theta.a.data(),
                    s.theta.a.size() * sizeof(double)) == 0);

  write_snapshot(p2, r, digest);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(!slurp(p1).empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("snapshot reading rejects corruption") {
  GridSpec g{1.0, 1.0, 8, 5};
  SystemState s = make_constant_equilibrium(g, 0.0, 0.5, 0.0);
  const std::string p = temp_path("snap3.chc");
  write_snapshot(p, s, 1);
  const std::string good = slurp(p);

  spit(p, good + "x");  // trailing byte
  CHECK_THROWS_AS(read_snapshot(p), ConfigError);

  spit(p, good.substr(0, good.size() - 9));  // truncated payload
  CHECK_THROWS_AS(read_snapshot(p), ConfigError);

  std::string bad = good;
  bad[0] = 'X';  // magic
  spit(p, bad);
  CHECK_THROWS_AS(read_snapshot(p), ConfigError);

  bad = good;
  bad[4] = 9;  // version
  spit(p, bad);
  CHECK_THROWS_AS(read_snapshot(p), ConfigError);

  CHECK_THROWS_AS(read_snapshot(temp_path("missing.chc")), IoError);
  std::remove(p.c_str());
}

TEST_CASE("csv tables round trip doubles exactly") {
  const std::string p = temp_path("table.csv");
  {
    CsvWriter w(p, {"t", "a", "b"});
    w.meta("dt", 1e-3);
    w.meta("scenario", "spinodal");
    w.row({0.0, 1.0 / 3.0, -0.0});
    w.row({1e-300, 1.7976931348623157e308, 0.1});
    w.meta("hm_slack", 2.5e-14);  // footer metadata
    w.close();
  }
  CsvTable t = read_csv(p);
  REQUIRE(t.columns.size() == 3);
  CHECK(t.columns[1] == "a");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == 1.0 / 3.0);
  CHECK(t.rows[1][0] == 1e-300);
  CHECK(t.rows[1][1] == 1.7976931348623157e308);
  CHECK(t.rows[0][2] == 0.0);
  CHECK(std::signbit(t.rows[0][2]));
  CHECK(t.meta_num("dt") == 1e-3);
  CHECK(t.meta_num("hm_slack") == 2.5e-14);
  CHECK(t.metadata.at("scenario") == "spinodal");
  CHECK(t.column("b") == 2);
  CHECK_THROWS_AS(t.column("zz"), ConfigError);
  CHECK_THROWS_AS(t.meta_num("scenario"), ConfigError);
  std::remove(p.c_str());
}

TEST_CASE("csv reader rejects ragged and headerless data") {
  const std::string p = temp_path("bad.csv");
  spit(p, "t,a\n0,1\n1\n");
  CHECK_THROWS_AS(read_csv(p), ConfigError);
  spit(p, "# only = meta\n");
  CHECK_THROWS_AS(read_csv(p), ConfigError);
  CHECK_THROWS_AS(read_csv(temp_path("missing.csv")), IoError);
  std::remove(p.c_str());
}

TEST_CASE("g17 formatting round trips through parsing") {
  for (double v : {1.0 / 3.0, 2.5e-14, -1.0e-300, 6.02e23, 0.1}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
}
