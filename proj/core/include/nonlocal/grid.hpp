#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nonlocal {

// Uniform centered grid x_j = (j - n/2) h, j = 0..n-1.  With n even the
// grid is symmetric about the origin except for the single node at -n/2 h.
struct SpatialGrid {
  std::size_t n = 0;
  double h = 0.0;

  SpatialGrid() = default;
  SpatialGrid(std::size_t n_points, double spacing);

  static SpatialGrid with_halfwidth(double halfwidth, std::size_t n_points);

  double x(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n / 2)) * h;
  }
  std::size_t center() const { return n / 2; }
  double halfwidth() const { return static_cast<double>(n / 2) * h; }
  std::vector<double> nodes() const;

  // Frequency of FFT mode m (0 <= m <= n/2).
  double wavenumber(std::size_t m) const;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// Composite 16-point Gauss-Legendre rule on [a, b] with `panels` equal panels.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 1);

// Nodes and weights of the same composite rule.
void gauss_legendre_nodes(double a, double b, int panels, std::vector<double>& nodes,
                          std::vector<double>& weights);

// Trapezoid sum h * sum(values).
double trapezoid(const std::vector<double>& values, double h);

}  // namespace nonlocal
