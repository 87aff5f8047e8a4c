#include "nonlocal/grid.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "nonlocal/error.hpp"

namespace nonlocal {

SpatialGrid::SpatialGrid(std::size_t n_points, double spacing) : n(n_points), h(spacing) {
  require(n_points >= 2 && n_points % 2 == 0, ErrorKind::kInvalidParameter,
          "grid needs an even number of points");
  require(spacing > 0.0, ErrorKind::kInvalidParameter, "grid spacing must be positive");
}

SpatialGrid SpatialGrid::with_halfwidth(double halfwidth, std::size_t n_points) {
  return SpatialGrid(n_points, 2.0 * halfwidth / static_cast<double>(n_points));
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = x(j);
  return out;
}

double SpatialGrid::wavenumber(std::size_t m) const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * h);
}

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {
using Rule = boost::math::quadrature::gauss<double, 16>;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) panels = 1;
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    sum += Rule::integrate(f, lo, lo + width);
  }
  return sum;
}

void gauss_legendre_nodes(double a, double b, int panels, std::vector<double>& nodes,
                          std::vector<double>& weights) {
  // Boost stores the non-negative abscissae of the symmetric rule.
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  if (panels < 1) panels = 1;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0.0) {
        nodes.push_back(mid);
        weights.push_back(half * weight[i]);
        continue;
      }
      nodes.push_back(mid - half * abscissa[i]);
      weights.push_back(half * weight[i]);
      nodes.push_back(mid + half * abscissa[i]);
      weights.push_back(half * weight[i]);
    }
  }
}

double trapezoid(const std::vector<double>& values, double h) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return h * sum;
}

}  // namespace nonlocal
