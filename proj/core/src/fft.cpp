#include "nonlocal/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "nonlocal/error.hpp"

namespace nonlocal {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  require(n >= 2 && n % 2 == 0, ErrorKind::kInvalidParameter, "FFT length must be even");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->real = fftw_alloc_real(n);
  impl_->spectrum = fftw_alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  impl_->forward = fftw_plan_dft_r2c_1d(len, impl_->real, impl_->spectrum, FFTW_ESTIMATE);
  impl_->inverse = fftw_plan_dft_c2r_1d(len, impl_->spectrum, impl_->real, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->forward);
  fftw_destroy_plan(impl_->inverse);
  fftw_free(impl_->real);
  fftw_free(impl_->spectrum);
}

// Buffers are per-object, so a single RealFft must not be shared between
// threads; callers create one per worker.
void RealFft::forward(const std::vector<double>& in,
                      std::vector<std::complex<double>>& out) const {
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->forward);
  out.resize(modes());
  for (std::size_t m = 0; m < modes(); ++m)
    out[m] = {impl_->spectrum[m][0], impl_->spectrum[m][1]};
}

void RealFft::inverse(const std::vector<std::complex<double>>& in,
                      std::vector<double>& out) const {
  for (std::size_t m = 0; m < modes(); ++m) {
    impl_->spectrum[m][0] = in[m].real();
    impl_->spectrum[m][1] = in[m].imag();
  }
  fftw_execute(impl_->inverse);
  out.assign(impl_->real, impl_->real + n_);
}

std::vector<std::complex<double>> grid_fourier(const SpatialGrid& grid,
                                               const std::vector<double>& samples) {
  RealFft fft(grid.n);
  std::vector<std::complex<double>> out;
  fft.forward(samples, out);
  // x_j = (j - n/2) h contributes the phase e^{i pi m}.
  for (std::size_t m = 0; m < out.size(); ++m) {
    out[m] *= grid.h;
    if (m % 2 == 1) out[m] = -out[m];
  }
  return out;
}

std::vector<double> grid_inverse_fourier(const SpatialGrid& grid,
                                         const std::vector<std::complex<double>>& transform) {
  RealFft fft(grid.n);
  std::vector<std::complex<double>> shifted(transform);
  for (std::size_t m = 1; m < shifted.size(); m += 2) shifted[m] = -shifted[m];
  std::vector<double> out;
  fft.inverse(shifted, out);
  const double scale = 1.0 / (static_cast<double>(grid.n) * grid.h);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> grid_inverse_fourier_real(const SpatialGrid& grid,
                                              const std::vector<double>& transform) {
  std::vector<std::complex<double>> c(transform.begin(), transform.end());
  return grid_inverse_fourier(grid, c);
}

}  // namespace nonlocal
