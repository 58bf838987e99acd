#pragma once

#include <vector>

namespace chc {

// General band matrix with kl sub- and ku superdiagonals, stored column-major
// in the factorization layout (2*kl + ku + 1 rows per column, so LU fill-in
// from partial pivoting stays in place).
struct BandedMatrix {
  int n = 0;
  int kl = 0;
  int ku = 0;
  std::vector<double> ab;

  BandedMatrix() = default;
  BandedMatrix(int n_, int kl_, int ku_);

  int ldab() const { return 2 * kl + ku + 1; }
  bool in_band(int i, int j) const { return i - j <= kl && j - i <= ku; }
  // Entry (i, j); call only with |offsets| inside the declared bands.
  double& at(int i, int j) { return ab[std::size_t(j) * ldab() + (kl + ku + i - j)]; }
  double at(int i, int j) const {
    return ab[std::size_t(j) * ldab() + (kl + ku + i - j)];
  }

  std::vector<double> multiply(const std::vector<double>& x) const;
};

// C = A*B with band widths added.
BandedMatrix multiply(const BandedMatrix& A, const BandedMatrix& B);

// LU factorization with row partial pivoting (dgbtrf-style). Throws
// NumericalError on an exactly singular pivot.
class BandedLU {
 public:
  BandedLU() = default;
  explicit BandedLU(BandedMatrix m);

  void solve(std::vector<double>& b) const;
  void solve(double* b) const;
  int size() const { return m_.n; }

 private:
  BandedMatrix m_;
  std::vector<int> piv_;
};

}  // namespace chc
