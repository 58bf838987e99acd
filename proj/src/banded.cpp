#include "chc/banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "chc/errors.hpp"

namespace chc {

BandedMatrix::BandedMatrix(int n_, int kl_, int ku_) : n(n_), kl(kl_), ku(ku_) {
  ab.assign(std::size_t(ldab()) * n, 0.0);
}

std::vector<double> BandedMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int j0 = std::max(0, i - kl);
    const int j1 = std::min(n - 1, i + ku);
    double s = 0.0;
    for (int j = j0; j <= j1; ++j) s += at(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

BandedMatrix multiply(const BandedMatrix& A, const BandedMatrix& B) {
  BandedMatrix C(A.n, std::min(A.n - 1, A.kl + B.kl), std::min(A.n - 1, A.ku + B.ku));
  for (int i = 0; i < C.n; ++i) {
    const int j0 = std::max(0, i - C.kl);
    const int j1 = std::min(C.n - 1, i + C.ku);
    for (int j = j0; j <= j1; ++j) {
      const int k0 = std::max({0, i - A.kl, j - B.ku});
      const int k1 = std::min({C.n - 1, i + A.ku, j + B.kl});
      double s = 0.0;
      for (int k = k0; k <= k1; ++k) s += A.at(i, k) * B.at(k, j);
      C.at(i, j) = s;
    }
  }
  return C;
}

BandedLU::BandedLU(BandedMatrix m) : m_(std::move(m)), piv_(m_.n) {
  const int n = m_.n;
  const int kl = m_.kl;
  const int ku = m_.ku;
  // Zero the fill-in rows above the stored band before elimination.
  for (int j = 0; j < n; ++j) {
    for (int d = 0; d < kl; ++d) m_.ab[std::size_t(j) * m_.ldab() + d] = 0.0;
  }
  for (int k = 0; k < n; ++k) {
    const int last_row = std::min(n - 1, k + kl);
    int p = k;
    double best = std::abs(m_.at(k, k));
    for (int i = k + 1; i <= last_row; ++i) {
      const double v = std::abs(m_.at(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv_[k] = p;
    if (best == 0.0) throw NumericalError("banded LU: singular pivot");
    const int last_col = std::min(n - 1, k + kl + ku);
    if (p != k) {
      for (int j = k; j <= last_col; ++j) std::swap(m_.at(k, j), m_.at(p, j));
    }
    const double pivot = m_.at(k, k);
    for (int i = k + 1; i <= last_row; ++i) {
      const double mult = m_.at(i, k) / pivot;
      m_.at(i, k) = mult;
      for (int j = k + 1; j <= last_col; ++j) m_.at(i, j) -= mult * m_.at(k, j);
    }
  }
}

void BandedLU::solve(std::vector<double>& b) const { solve(b.data()); }

void BandedLU::solve(double* b) const {
  const int n = m_.n;
  const int kl = m_.kl;
  const int ku = m_.ku;
  for (int k = 0; k < n; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    const int last_row = std::min(n - 1, k + kl);
    for (int i = k + 1; i <= last_row; ++i) b[i] -= m_.at(i, k) * b[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    const int last_col = std::min(n - 1, i + kl + ku);
    double s = b[i];
    for (int j = i + 1; j <= last_col; ++j) s -= m_.at(i, j) * b[j];
    b[i] = s / m_.at(i, i);
  }
}

}  // namespace chc
