#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "nonlocal/grid.hpp"

namespace nonlocal {

// Real-to-complex FFT pair of fixed length n.  Plans are created under a
// global lock since FFTW's planner is not thread-safe; execution is.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t modes() const { return n_ / 2 + 1; }

  // Unnormalized forward transform: out_m = sum_j in_j e^{-2 pi i m j / n}.
  void forward(const std::vector<double>& in, std::vector<std::complex<double>>& out) const;
  // Unnormalized inverse: out_j = sum_m c_m e^{2 pi i m j / n} (Hermitian).
  void inverse(const std::vector<std::complex<double>>& in, std::vector<double>& out) const;

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// Continuous-Fourier-transform conventions on a centered grid: for samples
// f(x_j), returns F(k_m) ~= h sum_j f(x_j) e^{-i k_m x_j}, m = 0..n/2.
std::vector<std::complex<double>> grid_fourier(const SpatialGrid& grid,
                                               const std::vector<double>& samples);

// Inverse of grid_fourier for an even real transform given at k_m, m = 0..n/2.
std::vector<double> grid_inverse_fourier(const SpatialGrid& grid,
                                         const std::vector<std::complex<double>>& transform);

std::vector<double> grid_inverse_fourier_real(const SpatialGrid& grid,
                                              const std::vector<double>& transform);

}  // namespace nonlocal
