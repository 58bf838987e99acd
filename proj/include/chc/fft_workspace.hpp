#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

#include "chc/grid.hpp"

namespace chc {

// Batched real-to-complex FFT along the periodic x direction, one transform
// per y row. Forward is unnormalized (FFTW convention); inverse divides by nx.
// Plans use FFTW_ESTIMATE so results are reproducible run to run.
class FftWorkspace {
 public:
  explicit FftWorkspace(const GridSpec& grid);
  ~FftWorkspace();
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  int num_kx() const { return grid_.nx / 2 + 1; }

  // Fills the internal spectral buffer from u.
  void forward(const InteriorField& u);
  // Overwrites u from the internal spectral buffer (destroys the buffer).
  void inverse(InteriorField& u);

  std::complex<double>& hat(int k, int j) {
    return spec_[std::size_t(j) * num_kx() + k];
  }
  const std::complex<double>& hat(int k, int j) const {
    return spec_[std::size_t(j) * num_kx() + k];
  }

  // Copies spectral column k (all y rows) into re/im, and back.
  void gather(int k, std::vector<double>& re, std::vector<double>& im) const;
  void scatter(int k, const std::vector<double>& re, const std::vector<double>& im);

 private:
  GridSpec grid_;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

}  // namespace chc
