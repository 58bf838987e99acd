#include "chc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "chc/errors.hpp"

namespace chc {

double Polynomial::operator()(double y) const {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * y + c[k];
  return v;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  if (c.size() <= 1) {
    d.c = {0.0};
    return d;
  }
  d.c.resize(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = double(k) * c[k];
  return d;
}

Polynomial Polynomial::antiderivative() const {
  Polynomial a;
  a.c.resize(c.size() + 1);
  a.c[0] = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) a.c[k + 1] = c[k] / double(k + 1);
  return a;
}

int Polynomial::degree() const {
  for (std::size_t k = c.size(); k-- > 0;) {
    if (c[k] != 0.0) return int(k);
  }
  return -1;
}

std::vector<double> real_roots(const Polynomial& p) {
  const int d = p.degree();
  std::vector<double> roots;
  if (d <= 0) return roots;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -p.c[i] / p.c[d];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  for (int i = 0; i < d; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-8 * std::max(1.0, std::abs(z.real()))) {
      roots.push_back(z.real());
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double global_min(const Polynomial& p) {
  const int d = p.degree();
  if (d <= 0) return d < 0 ? 0.0 : p.c[0];
  if (d % 2 != 0 || p.c[d] < 0.0) {
    throw ConfigError("polynomial is unbounded below");
  }
  double best = std::numeric_limits<double>::infinity();
  for (double r : real_roots(p.derivative())) best = std::min(best, p(r));
  return best;
}

double max_abs_on(const Polynomial& p, double lo, double hi) {
  double best = std::max(std::abs(p(lo)), std::abs(p(hi)));
  for (double r : real_roots(p.derivative())) {
    if (r >= lo && r <= hi) best = std::max(best, std::abs(p(r)));
  }
  return best;
}

double Model::c0() const { return std::max(0.0, -global_min(f.derivative())); }

double Model::c1() const { return std::max(0.0, -global_min(F())); }

void Model::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
  for (double v : {epsilon, sigma, alpha}) {
    if (!std::isfinite(v)) throw ConfigError("model parameter is not finite");
  }
  const auto check_potential = [](const Polynomial& deriv, const char* which) {
    const Polynomial P = deriv.antiderivative();
    const int d = P.degree();
    if (d < 2 || d % 2 != 0 || P.c[d] <= 0.0) {
      throw ConfigError(std::string(which) +
                        " potential must be bounded below with positive leading "
                        "coefficient and degree at least two");
    }
  };
  check_potential(f, "bulk");
  check_potential(g, "wall");
}

Model Model::double_well() {
  Model m;
  m.f = Polynomial({0.0, -1.0, 0.0, 1.0});
  m.g = Polynomial({0.0, -1.0, 0.0, 1.0});
  return m;
}

}  // namespace chc
