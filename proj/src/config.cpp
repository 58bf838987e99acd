#include "chc/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "chc/errors.hpp"

namespace chc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + v +
                      "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ConfigError("config: key '" + key + "' must be an integer");
  }
  return int(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key +
                      "' must be an unsigned integer, got '" + v + "'");
  }
}

std::vector<double> parse_coeffs(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(key, trim(item)));
  }
  if (out.empty()) {
    throw ConfigError("config: key '" + key + "' needs a coefficient list");
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  grid.validate();
  model.validate();
  stepper.validate();
  if (scenario.name != "constant-equilibrium" && scenario.name != "spinodal" &&
      scenario.name != "mean-ode") {
    throw ConfigError("config: unknown scenario '" + scenario.name + "'");
  }
  if (output_dir.empty()) {
    throw ConfigError("config: output directory must not be empty");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig rc;
  std::map<std::string, std::set<std::string>> seen;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(lineno));
      }
      section = trim(t.substr(1, t.size() - 2));
      if (section != "grid" && section != "params" && section != "stepper" &&
          section != "diagnostics" && section != "scenario" &&
          section != "output") {
        throw ConfigError("config: unknown section [" + section + "]");
      }
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected 'key = value' at line " +
                        std::to_string(lineno));
    }
    if (section.empty()) {
      throw ConfigError("config: key before any section at line " +
                        std::to_string(lineno));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (!seen[section].insert(key).second) {
      throw ConfigError("config: duplicate key '" + key + "' in [" + section +
                        "]");
    }

    if (section == "grid") {
      if (key == "Lx") rc.grid.Lx = parse_double(key, val);
      else if (key == "Ly") rc.grid.Ly = parse_double(key, val);
      else if (key == "nx") rc.grid.nx = parse_int(key, val);
      else if (key == "ny") rc.grid.ny = parse_int(key, val);
      else throw ConfigError("config: unknown key '" + key + "' in [grid]");
    } else if (section == "params") {
      if (key == "epsilon") rc.model.epsilon = parse_double(key, val);
      else if (key == "sigma") rc.model.sigma = parse_double(key, val);
      else if (key == "alpha") rc.model.alpha = parse_double(key, val);
      else if (key == "f_coeffs") rc.model.f = Polynomial(parse_coeffs(key, val));
      else if (key == "g_coeffs") rc.model.g = Polynomial(parse_coeffs(key, val));
      else throw ConfigError("config: unknown key '" + key + "' in [params]");
    } else if (section == "stepper") {
      if (key == "dt") rc.stepper.dt = parse_double(key, val);
      else if (key == "t_end") rc.stepper.t_end = parse_double(key, val);
      else if (key == "cadence") rc.stepper.cadence = parse_double(key, val);
      else if (key == "snapshot_every")
        rc.stepper.snapshot_every = parse_double(key, val);
      else if (key == "stability_lo")
        rc.stepper.stability_lo = parse_double(key, val);
      else if (key == "stability_hi")
        rc.stepper.stability_hi = parse_double(key, val);
      else throw ConfigError("config: unknown key '" + key + "' in [stepper]");
    } else if (section == "diagnostics") {
      if (key == "kappa1" || key == "kappa2") {
        double& slot = (key == "kappa1") ? rc.kappa1 : rc.kappa2;
        if (val == "auto") slot = -1.0;
        else slot = parse_double(key, val);
      } else {
        throw ConfigError("config: unknown key '" + key +
                          "' in [diagnostics]");
      }
    } else if (section == "scenario") {
      if (key == "name") rc.scenario.name = val;
      else if (key == "theta0") rc.scenario.theta0 = parse_double(key, val);
      else if (key == "chi0") rc.scenario.chi0 = parse_double(key, val);
      else if (key == "q_amplitude")
        rc.scenario.q_amplitude = parse_double(key, val);
      else if (key == "amplitude") rc.scenario.amplitude = parse_double(key, val);
      else if (key == "seed") rc.scenario.seed = parse_u64(key, val);
      else if (key == "mean_chi") rc.scenario.mean_chi = parse_double(key, val);
      else if (key == "stripe_amplitude")
        rc.scenario.stripe_amplitude = parse_double(key, val);
      else if (key == "mean_chi1")
        rc.scenario.mean_chi1 = parse_double(key, val);
      else throw ConfigError("config: unknown key '" + key + "' in [scenario]");
    } else if (section == "output") {
      if (key == "dir") rc.output_dir = val;
      else throw ConfigError("config: unknown key '" + key + "' in [output]");
    }
  }

  // Scenario keys must belong to the named scenario.
  const std::set<std::string>& sk = seen["scenario"];
  const auto reject = [&](const std::string& key) {
    if (sk.count(key)) {
      throw ConfigError("config: key '" + key + "' is not used by scenario '" +
                        rc.scenario.name + "'");
    }
  };
  if (rc.scenario.name == "constant-equilibrium") {
    reject("amplitude");
    reject("seed");
    reject("mean_chi");
    reject("stripe_amplitude");
    reject("mean_chi1");
  } else if (rc.scenario.name == "spinodal") {
    reject("chi0");
    reject("q_amplitude");
    reject("mean_chi1");
  } else if (rc.scenario.name == "mean-ode") {
    reject("amplitude");
    reject("seed");
    reject("mean_chi");
    reject("stripe_amplitude");
    reject("q_amplitude");
  }

  rc.validate();
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string params_digest_string(const RunConfig& rc) {
  std::ostringstream os;
  os.precision(17);
  os << "grid " << rc.grid.Lx << ' ' << rc.grid.Ly << ' ' << rc.grid.nx << ' '
     << rc.grid.ny << "; params " << rc.model.epsilon << ' ' << rc.model.sigma
     << ' ' << rc.model.alpha << "; f";
  for (double c : rc.model.f.c) os << ' ' << c;
  os << "; g";
  for (double c : rc.model.g.c) os << ' ' << c;
  os << "; dt " << rc.stepper.dt;
  return os.str();
}

}  // namespace chc
