#include "chc/fft_workspace.hpp"

#include <cstring>

namespace chc {

FftWorkspace::FftWorkspace(const GridSpec& grid) : grid_(grid) {
  const int nx = grid_.nx;
  const int ny = grid_.ny;
  real_.assign(std::size_t(nx) * ny, 0.0);
  spec_.assign(std::size_t(num_kx()) * ny, {0.0, 0.0});
  int n[1] = {nx};
  fwd_ = fftw_plan_many_dft_r2c(1, n, ny, real_.data(), nullptr, 1, nx,
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                nullptr, 1, num_kx(), FFTW_ESTIMATE);
  inv_ = fftw_plan_many_dft_c2r(1, n, ny,
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                nullptr, 1, num_kx(), real_.data(), nullptr, 1,
                                nx, FFTW_ESTIMATE);
}

FftWorkspace::~FftWorkspace() {
  if (fwd_) fftw_destroy_plan(fwd_);
  if (inv_) fftw_destroy_plan(inv_);
}

void FftWorkspace::forward(const InteriorField& u) {
  std::memcpy(real_.data(), u.a.data(), real_.size() * sizeof(double));
  fftw_execute(fwd_);
}

void FftWorkspace::inverse(InteriorField& u) {
  fftw_execute(inv_);
  const double scale = 1.0 / grid_.nx;
  for (std::size_t p = 0; p < real_.size(); ++p) u.a[p] = real_[p] * scale;
}

void FftWorkspace::gather(int k, std::vector<double>& re,
                          std::vector<double>& im) const {
  re.resize(grid_.ny);
  im.resize(grid_.ny);
  for (int j = 0; j < grid_.ny; ++j) {
    re[j] = hat(k, j).real();
    im[j] = hat(k, j).imag();
  }
}

void FftWorkspace::scatter(int k, const std::vector<double>& re,
                           const std::vector<double>& im) {
  for (int j = 0; j < grid_.ny; ++j) hat(k, j) = {re[j], im[j]};
}

}  // namespace chc
