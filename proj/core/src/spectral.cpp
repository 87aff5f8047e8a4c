#include "nonlocal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nonlocal/error.hpp"
#include "nonlocal/fft.hpp"
#include "nonlocal/greens.hpp"

namespace nonlocal {

SpectrumInterval spectrum_interval(const SymbolGrid& symbol, double chi) {
  require(chi > 0.0, ErrorKind::kInvalidParameter, "chi must be positive");
  require(!symbol.values.empty(), ErrorKind::kInvalidParameter, "empty symbol grid");
  const auto it = std::min_element(symbol.values.begin(), symbol.values.end());
  SpectrumInterval out;
  out.chi = chi;
  out.symbol_min = *it;
  // a^ -> 0 at infinity, so the infimum over all k is at most 0.
  out.a = chi * (1.0 - std::min(0.0, out.symbol_min));
  const auto idx = static_cast<std::size_t>(it - symbol.values.begin());
  if (out.symbol_min < 0.0 && (idx == 0 || idx + 1 == symbol.values.size())) {
    out.clamped = true;
    out.warning = "symbol minimum attained at the edge of the k box; a may be underestimated";
  }
  out.a = std::clamp(out.a, chi, 2.0 * chi);
  return out;
}

std::vector<Plateau> plateau_eigenvalues(const SymbolGrid& symbol, double chi,
                                         const PlateauOptions& options) {
  const auto& k = symbol.k;
  const auto& v = symbol.values;
  std::size_t first = 0;
  while (first < k.size() && k[first] < 0.0) ++first;
  const std::size_t n = k.size();
  const double zero_from = symbol.certified_zero_beyond.value_or(std::numeric_limits<double>::infinity());

  auto is_zero = [&](std::size_t i) { return std::abs(v[i]) <= options.zero_floor; };

  std::vector<Plateau> out;
  std::size_t i = first;
  while (i < n) {
    std::size_t j = i;
    double sum = v[i];
    double tv = 0.0;
    const bool zero_run = is_zero(i);
    if (zero_run && k[i] < zero_from) {
      ++i;
      continue;
    }
    while (j + 1 < n) {
      if (zero_run) {
        if (!is_zero(j + 1)) break;
      } else {
        const double tv_next = tv + std::abs(v[j + 1] - v[j]);
        const double mean = (sum + v[j + 1]) / static_cast<double>(j + 2 - i);
        if (tv_next > options.flatness_tol * std::abs(mean) || is_zero(j + 1)) break;
        tv = tv_next;
      }
      sum += v[j + 1];
      ++j;
    }
    const double width = k[j] - k[i];
    if (width >= options.min_width) {
      Plateau p;
      p.value = zero_run ? 0.0 : sum / static_cast<double>(j + 1 - i);
      p.lambda = chi * (p.value - 1.0);
      p.k_lo = k[i];
      p.k_hi = k[j];
      p.measure = 2.0 * width;
      p.reaches_boundary = j + 1 == n;
      out.push_back(p);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

std::vector<Interval> ac_intervals(const SymbolGrid& symbol, double grad_floor, double min_width) {
  const auto& k = symbol.k;
  const auto& v = symbol.values;
  std::vector<Interval> out;
  std::size_t start = k.size();
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const bool ok = k[i] > 0.0 && std::abs(v[i + 1] - v[i]) / (k[i + 1] - k[i]) >= grad_floor;
    if (ok && start == k.size()) start = i;
    if ((!ok || i + 2 == k.size()) && start != k.size()) {
      const std::size_t end = ok ? i + 1 : i;
      if (k[end] - k[start] >= min_width) out.push_back({k[start], k[end]});
      start = k.size();
    }
  }
  return out;
}

SpectrumReport analyze_spectrum(const SymbolGrid& symbol, double chi, const PlateauOptions& options) {
  SpectrumReport out;
  out.interval = spectrum_interval(symbol, chi);
  out.plateaus = plateau_eigenvalues(symbol, chi, options);
  out.ac = ac_intervals(symbol, 1e-8, options.min_width);
  if (!out.interval.warning.empty()) out.caveats.push_back(out.interval.warning);
  out.caveats.push_back("ac intervals are a numerical indication (gradient floor on the grid), not a proof");
  if (!out.plateaus.empty())
    out.caveats.push_back("plateau eigenvalues reported as chi * (c_m - 1); a plateau value c_m alone is not an eigenvalue of L");
  return out;
}

EssentialSpectrum essential_spectrum(const SpectrumInterval& interval, const Potential& v, double chi) {
  EssentialSpectrum out;
  Interval a = interval.interval();
  Interval b{-chi, v.sup() - chi};
  if (b.lo <= a.hi && a.lo <= b.hi) {
    out.segments.push_back({std::min(a.lo, b.lo), std::max(a.hi, b.hi)});
  } else {
    out.segments = {a, b};
    std::sort(out.segments.begin(), out.segments.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  }
  out.caveat = "these segments are contained in the essential spectrum; equality is not established";
  return out;
}

double weyl_residual(const JumpKernel& kernel, const Potential& v, double x0, double epsilon,
                     const SpatialGrid& grid) {
  require(epsilon > 0.0, ErrorKind::kInvalidParameter, "epsilon must be positive");
  const double width = std::sqrt(epsilon);
  if (width < 2.0 * grid.h) {
    std::ostringstream os;
    os << "quasi-mode width " << width << " is below two grid cells (h = " << grid.h << ")";
    fail(ErrorKind::kResolution, os.str());
  }
  require(std::abs(x0) + 10.0 * width < grid.halfwidth(), ErrorKind::kDomainTooSmall,
          "quasi-mode does not fit in the grid");

  // Zero-padded so the periodic convolution matches the line.
  const SpatialGrid big(2 * grid.n, grid.h);
  const double norm = std::pow(std::numbers::pi * epsilon, -0.25);
  std::vector<double> psi(big.n);
  for (std::size_t j = 0; j < big.n; ++j) {
    const double d = big.x(j) - x0;
    psi[j] = norm * std::exp(-d * d / (2.0 * epsilon));
  }
  auto transform = grid_fourier(big, psi);
  const auto symbol = symbol_on_modes(kernel, big);
  for (std::size_t m = 0; m < transform.size(); ++m) transform[m] *= symbol[m];
  const auto conv = grid_inverse_fourier(big, transform);

  const double v0 = v(x0);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < big.n; ++j) {
    const double r = conv[j] + (v(big.x(j)) - v0) * psi[j];
    num += r * r;
    den += psi[j] * psi[j];
  }
  return std::sqrt(num / den);
}

}  // namespace nonlocal
