#include "nonlocal/greens.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "nonlocal/error.hpp"
#include "nonlocal/fft.hpp"
#include "nonlocal/parallel.hpp"

namespace nonlocal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void require_1d(const JumpKernel& kernel) {
  require(kernel.dimension() == 1, ErrorKind::kInvalidParameter,
          "grid operations are implemented for d = 1");
}

std::vector<double> crop(const std::vector<double>& padded, std::size_t n) {
  const std::size_t offset = (padded.size() - n) / 2;
  return std::vector<double>(padded.begin() + static_cast<long>(offset),
                             padded.begin() + static_cast<long>(offset + n));
}

SpatialGrid padded(const SpatialGrid& grid, std::size_t padding) {
  require(padding >= 1, ErrorKind::kInvalidParameter, "padding must be at least 1");
  return SpatialGrid(grid.n * padding, grid.h);
}

// Exponentially tilted law a(y) e^{nu y - H}.
struct Tilt {
  double nu = 0.0;
  double log_norm = 0.0;  // H(nu)
  double mean = 0.0;
  double var = 0.0;
};

Tilt scan_tilt(const JumpKernel& kernel, double nu) {
  constexpr int kPoints = 4097;
  double lo = -8.0 * kernel.scale();
  double hi = 8.0 * kernel.scale();
  if (auto s = kernel.support_halfwidth()) {
    lo = -*s;
    hi = *s;
  }
  std::vector<double> g(kPoints);
  Tilt out;
  out.nu = nu;
  for (int pass = 0; pass < 80; ++pass) {
    const double h = (hi - lo) / (kPoints - 1);
    double gmax = kNegInf;
    int imax = 0;
    for (int i = 0; i < kPoints; ++i) {
      const double y = lo + i * h;
      g[i] = kernel.log_density(y) + nu * y;
      if (g[i] > gmax) {
        gmax = g[i];
        imax = i;
      }
    }
    require(std::isfinite(gmax), ErrorKind::kSolverFailure, "tilted density vanishes on the scan");
    const bool support = kernel.support_halfwidth().has_value();
    if (!support && (g.front() > gmax - 60.0 || g.back() > gmax - 60.0)) {
      const double w = hi - lo;
      if (g.front() > gmax - 60.0) lo -= w;
      if (g.back() > gmax - 60.0) hi += w;
      require(hi - lo < 1e8, ErrorKind::kTiltOutOfRange, "tilted density does not decay");
      continue;
    }
    double z = 0.0, m1 = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double w = std::exp(g[i] - gmax);
      z += w;
      m1 += w * (lo + i * h);
    }
    const double mean = m1 / z;
    double m2 = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double d = lo + i * h - mean;
      m2 += std::exp(g[i] - gmax) * d * d;
    }
    const double var = m2 / z;
    out.log_norm = gmax + std::log(z * h);
    out.mean = mean;
    out.var = var;
    // Zoom in when the tilted law occupies only a few scan cells.
    const double sd = std::sqrt(var);
    if (sd < 40.0 * h && pass < 79) {
      const double new_lo = std::max(lo, lo + imax * h - 30.0 * sd - 2.0 * h);
      const double new_hi = std::min(hi, lo + imax * h + 30.0 * sd + 2.0 * h);
      if (new_hi - new_lo < 0.5 * (hi - lo)) {
        lo = new_lo;
        hi = new_hi;
        continue;
      }
    }
    return out;
  }
  return out;
}

// Solves target(tilt) = goal for nu >= 0 with target increasing in nu.
template <class F>
Tilt solve_tilt(const JumpKernel& kernel, double goal, F target) {
  if (goal <= 0.0) return scan_tilt(kernel, 0.0);
  double lo = 0.0;
  double hi = 1.0 / kernel.scale();
  Tilt t_hi = scan_tilt(kernel, hi);
  while (target(t_hi) < goal) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e8, ErrorKind::kHullViolation, "tilt needed for the target is unbounded");
    t_hi = scan_tilt(kernel, hi);
  }
  Tilt best = t_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    best = scan_tilt(kernel, mid);
    const double f = target(best);
    if (std::abs(f - goal) <= 1e-6 * goal) break;
    (f < goal ? lo : hi) = mid;
    if (hi - lo < 1e-12 * hi) break;
  }
  return best;
}

// Samples of the tilted law on a centered periodic grid together with its
// grid Fourier transform.
struct TiltedGrid {
  SpatialGrid grid;
  double log_norm = 0.0;
  std::vector<std::complex<double>> transform;
};

TiltedGrid sample_tilted(const JumpKernel& kernel, const Tilt& tilt, double length) {
  const double sd = std::sqrt(std::max(tilt.var, 1e-300));
  double h = sd / 10.0;
  if (kernel.support_halfwidth()) h = std::min(h, *kernel.support_halfwidth() / 200.0);
  length = std::max(length, 2.0 * (std::abs(tilt.mean) + 14.0 * sd));
  const std::size_t n = std::max<std::size_t>(256, next_power_of_two(static_cast<std::size_t>(std::ceil(length / h))));
  TiltedGrid out;
  out.grid = SpatialGrid(n, h);
  std::vector<double> g(n);
  double gmax = kNegInf;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = out.grid.x(j);
    g[j] = kernel.log_density(y) + tilt.nu * y;
    gmax = std::max(gmax, g[j]);
  }
  double z = 0.0;
  std::vector<double> samples(n);
  for (std::size_t j = 0; j < n; ++j) {
    samples[j] = std::exp(g[j] - gmax);
    z += samples[j];
  }
  for (double& s : samples) s /= z * h;
  out.log_norm = gmax + std::log(z * h);
  out.transform = grid_fourier(out.grid, samples);
  return out;
}

// Trigonometric interpolant of a transform given at modes m = 0..n/2.
double evaluate_transform(const SpatialGrid& grid, const std::vector<std::complex<double>>& f, double x) {
  const std::size_t half = grid.n / 2;
  double sum = f[0].real();
  for (std::size_t m = 1; m < half; ++m) {
    const double k = grid.wavenumber(m);
    sum += 2.0 * (f[m] * std::complex<double>(std::cos(k * x), std::sin(k * x))).real();
  }
  const double kn = grid.wavenumber(half);
  sum += (f[half] * std::complex<double>(std::cos(kn * x), std::sin(kn * x))).real();
  return sum / (static_cast<double>(grid.n) * grid.h);
}

double sup_density(const JumpKernel& kernel) {
  double sup = kernel.density(0.0);
  for (int i = 1; i <= 400; ++i) sup = std::max(sup, kernel.density(0.025 * i * kernel.scale()));
  return sup;
}

}  // namespace

std::vector<double> symbol_on_modes(const JumpKernel& kernel, const SpatialGrid& grid) {
  require_1d(kernel);
  const std::size_t modes = grid.n / 2 + 1;
  std::vector<double> out(modes);
  if (kernel.has_closed_symbol()) {
    for (std::size_t m = 0; m < modes; ++m) out[m] = kernel.symbol(grid.wavenumber(m));
    return out;
  }
  std::vector<double> samples(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) samples[j] = kernel.density(grid.x(j));
  const auto transform = grid_fourier(grid, samples);
  for (std::size_t m = 0; m < modes; ++m) out[m] = transform[m].real();
  return out;
}

std::vector<double> one_minus_symbol_on_modes(const JumpKernel& kernel, const SpatialGrid& grid) {
  if (kernel.has_closed_symbol()) {
    std::vector<double> out(grid.n / 2 + 1);
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = kernel.one_minus_symbol(grid.wavenumber(m));
    return out;
  }
  auto s = symbol_on_modes(kernel, grid);
  for (double& v : s) v = 1.0 - v;
  return s;
}

ConvolutionPowers conv_powers(const JumpKernel& kernel, int n_max, const SpatialGrid& grid,
                              const ConvolutionOptions& options) {
  require_1d(kernel);
  require(n_max >= 1, ErrorKind::kInvalidParameter, "n_max must be at least 1");
  const SpatialGrid big = padded(grid, options.padding);
  std::vector<double> samples(big.n);
  for (std::size_t j = 0; j < big.n; ++j) samples[j] = kernel.density(big.x(j));
  const auto transform = grid_fourier(big, samples);
  std::vector<double> base(transform.size());
  for (std::size_t m = 0; m < base.size(); ++m) base[m] = transform[m].real();

  ConvolutionPowers out;
  out.grid = grid;
  std::vector<double> power(base.size(), 1.0);
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t m = 0; m < base.size(); ++m) power[m] *= base[m];
    auto values = crop(grid_inverse_fourier_real(big, power), grid.n);
    const double defect = std::abs(trapezoid(values, grid.h) - 1.0);
    if (defect > options.mass_tolerance)
      fail(ErrorKind::kDomainTooSmall, "a_" + std::to_string(n) + " loses mass " + fmt(defect) +
                                           " outside the grid half-width " + fmt(grid.halfwidth()));
    out.mass_defects.push_back(defect);
    out.table.push_back(std::move(values));
  }
  return out;
}

TransitionDensity transition_density(const JumpKernel& kernel, double t, const SpatialGrid& grid,
                                     std::size_t padding) {
  require_1d(kernel);
  require(t > 0.0, ErrorKind::kInvalidParameter, "t must be positive");
  require(std::isfinite(t), ErrorKind::kRescaleFailure, "t is not finite");
  const SpatialGrid big = padded(grid, padding);
  const auto om = one_minus_symbol_on_modes(kernel, big);
  std::vector<double> transform(om.size());
  const double atom = std::exp(-t);
  for (std::size_t m = 0; m < om.size(); ++m) transform[m] = std::exp(-t * om[m]) - atom;
  TransitionDensity out;
  out.t = t;
  out.atom_weight = atom;
  out.grid = grid;
  out.regular = crop(grid_inverse_fourier_real(big, transform), grid.n);
  out.total_mass = atom + trapezoid(out.regular, grid.h);
  return out;
}

ResolventTable::ResolventTable(const JumpKernel& kernel, double lambda, double h, std::size_t count,
                               const ResolventOptions& options)
    : lambda_(lambda), h_(h) {
  require_1d(kernel);
  require(lambda >= 0.0, ErrorKind::kInvalidParameter, "lambda must be non-negative");
  require(h > 0.0 && count >= 1, ErrorKind::kInvalidParameter, "table needs h > 0 and count >= 1");

  const double scale = 1.0 + lambda;
  auto g = [&](double k) {
    return kernel.symbol(k) / (scale * (lambda + kernel.one_minus_symbol(k)));
  };
  std::vector<double> nodes, weights;  // weights already multiplied by g

  const double k_cut = kernel.symbol_cutoff(options.symbol_tolerance);
  const double k0 = std::min(1.0 / kernel.scale(), 0.5 * k_cut);
  const double x_max = h * static_cast<double>(count - 1);
  double width = 0.5 * kernel.scale();
  if (x_max > 0.0) width = std::min(width, 8.0 / x_max);
  auto panels_for = [&](double a, double b) {
    return std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  };

  // Dyadic bands towards k = 0 with a power-law remainder.
  std::vector<double> bn, bw;
  double remainder = 0.0;
  for (int j = 0;; ++j) {
    const double hi = std::ldexp(k0, -j);
    const double lo = 0.5 * hi;
    bn.clear();
    bw.clear();
    gauss_legendre_nodes(lo, hi, panels_for(lo, hi), bn, bw);
    for (std::size_t i = 0; i < bn.size(); ++i) {
      nodes.push_back(bn[i]);
      weights.push_back(bw[i] * g(bn[i]));
    }
    const double g_lo = g(lo);
    const double p = std::log2(g_lo / g(hi));
    if (p >= 0.999 && j > 60)
      fail(ErrorKind::kRecurrentResolvent, "resolvent integrand is not integrable at k = 0 (lambda = " +
                                               fmt(lambda) + ")");
    remainder = lo * g_lo / (1.0 - std::min(p, 0.999));
    if (j >= 3 && std::abs(remainder) < 0.05 * kPi * options.target_error) break;
    require(j < 1000, ErrorKind::kSolverFailure, "k-grading did not converge");
  }
  nodes.push_back(0.0);
  weights.push_back(remainder);
  error_ = std::abs(remainder) / kPi;

  // Outer panels split at the symbol's kinks.
  std::vector<double> edges{k0};
  for (double b : kernel.symbol_breakpoints())
    if (b > k0 && b < k_cut) edges.push_back(b);
  edges.push_back(k_cut);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    bn.clear();
    bw.clear();
    gauss_legendre_nodes(edges[s], edges[s + 1], panels_for(edges[s], edges[s + 1]), bn, bw);
    for (std::size_t i = 0; i < bn.size(); ++i) {
      nodes.push_back(bn[i]);
      weights.push_back(bw[i] * g(bn[i]));
    }
  }
  k_nodes_ = nodes.size();

  // T(j h) = (1/pi) sum_i w_i cos(k_i j h), rotated in blocks of 64.
  values_.assign(count, 0.0);
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t j0 = b * kBlock;
    const std::size_t j1 = std::min(count, j0 + kBlock);
    std::vector<double> acc(j1 - j0, 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double k = nodes[i];
      std::complex<double> z(std::cos(k * h * j0), std::sin(k * h * j0));
      const std::complex<double> rot(std::cos(k * h), std::sin(k * h));
      const double w = weights[i];
      for (std::size_t j = j0; j < j1; ++j) {
        acc[j - j0] += w * z.real();
        z *= rot;
      }
    }
    for (std::size_t j = j0; j < j1; ++j) values_[j] = acc[j - j0] / kPi;
  });
}

double ResolventTable::operator()(double x) const {
  const double u = std::abs(x) / h_;
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-12) return at(static_cast<long>(r));
  const long base = static_cast<long>(std::floor(u)) - 3;
  require(base + 7 < static_cast<long>(values_.size()), ErrorKind::kDomainTooSmall,
          "resolvent table does not reach x = " + fmt(x));
  double sum = 0.0;
  for (long i = 0; i < 8; ++i) {
    double l = 1.0;
    for (long m = 0; m < 8; ++m)
      if (m != i) l *= (u - static_cast<double>(base + m)) / static_cast<double>(i - m);
    sum += l * at(base + i);
  }
  return sum;
}

double ResolventKernel::total_mass() const { return atom_weight + trapezoid(t_values, grid.h); }

ResolventKernel resolvent_kernel(const JumpKernel& kernel, double lambda, const SpatialGrid& grid,
                                 const ResolventKernelOptions& options) {
  require_1d(kernel);
  require(lambda >= 0.0 && std::isfinite(lambda), ErrorKind::kInvalidParameter, "lambda must be non-negative");
  if (lambda == 0.0) {
    const auto verdict = transience_test(kernel);
    if (verdict.verdict != Transience::kTransient)
      fail(ErrorKind::kRecurrentResolvent, "T_0 requires a certified transient kernel (verdict: " +
                                               to_string(verdict.verdict) + ")");
  }
  ResolventKernel out;
  out.lambda = lambda;
  out.atom_weight = 1.0 / (1.0 + lambda);
  out.grid = grid;

  const bool light = std::holds_alternative<UltraLight>(kernel.tail()) ||
                     std::holds_alternative<Light>(kernel.tail());
  if (lambda > 0.0 && light && !options.force_quadrature) {
    out.method = "fft";
    const SpatialGrid big = padded(grid, options.padding);
    const auto s = symbol_on_modes(kernel, big);
    const auto om = one_minus_symbol_on_modes(kernel, big);
    std::vector<double> transform(s.size());
    for (std::size_t m = 0; m < s.size(); ++m)
      transform[m] = s[m] / ((1.0 + lambda) * (lambda + om[m]));
    out.t_values = crop(grid_inverse_fourier_real(big, transform), grid.n);
  } else {
    out.method = "quadrature";
    const ResolventTable table(kernel, lambda, grid.h, grid.n / 2 + 1, options.quadrature);
    out.t_values.resize(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j)
      out.t_values[j] = table.at(static_cast<long>(j) - static_cast<long>(grid.n / 2));
  }

  const double peak = *std::max_element(out.t_values.begin(), out.t_values.end());
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double t = out.t_values[j];
    if (t > 0.0) continue;
    if (std::abs(t) <= 1e-13 * peak) {
      ++out.nonpositive_below_noise;
      continue;
    }
    fail(ErrorKind::kPositivityViolation, "T_lambda(" + fmt(grid.x(j)) + ") = " + fmt(t) + " is negative");
  }
  return out;
}

double log_conv_power(const JumpKernel& kernel, int n, double x) {
  require_1d(kernel);
  require(is_ultra_light(kernel.tail()), ErrorKind::kInvalidParameter,
          "tilted sampling needs an ultra-light kernel");
  require(n >= 1, ErrorKind::kInvalidParameter, "n must be at least 1");
  x = std::abs(x);
  if (auto s = kernel.support_halfwidth())
    if (x >= n * *s) return kNegInf;
  const double goal = x / n;
  const Tilt tilt = solve_tilt(kernel, goal, [](const Tilt& t) { return t.mean; });
  const double sd = std::sqrt(tilt.var);
  const double length = 2.0 * (std::abs(x - n * tilt.mean) + 40.0 * std::sqrt(static_cast<double>(n)) * sd);
  const TiltedGrid tg = sample_tilted(kernel, tilt, length);
  std::vector<std::complex<double>> power(tg.transform.size());
  for (std::size_t m = 0; m < power.size(); ++m) power[m] = std::pow(tg.transform[m], n);
  const double value = evaluate_transform(tg.grid, power, x);
  if (!(value > 0.0)) return kNegInf;
  return n * tg.log_norm - tilt.nu * x + std::log(value);
}

double log_transition_regular(const JumpKernel& kernel, double t, double x) {
  require_1d(kernel);
  require(is_ultra_light(kernel.tail()), ErrorKind::kInvalidParameter,
          "tilted sampling needs an ultra-light kernel");
  require(t > 0.0, ErrorKind::kInvalidParameter, "t must be positive");
  x = std::abs(x);
  const Tilt tilt = solve_tilt(kernel, x, [t](const Tilt& s) { return t * std::exp(s.log_norm) * s.mean; });
  const double rho = t * std::exp(tilt.log_norm);
  const double sd = std::sqrt(tilt.var);
  const double spread = std::sqrt(rho * (tilt.mean * tilt.mean + tilt.var));
  const double length = 2.0 * (x + 40.0 * spread + 14.0 * sd + std::abs(tilt.mean));
  const TiltedGrid tg = sample_tilted(kernel, tilt, length);
  const double rho_grid = t * std::exp(tg.log_norm);
  std::vector<std::complex<double>> compound(tg.transform.size());
  const double atom = std::exp(-rho_grid);
  for (std::size_t m = 0; m < compound.size(); ++m)
    compound[m] = std::exp(rho_grid * (tg.transform[m] - 1.0)) - atom;
  const double value = evaluate_transform(tg.grid, compound, x);
  if (!(value > 0.0)) return kNegInf;
  return t * (std::exp(tg.log_norm) - 1.0) - tilt.nu * x + std::log(value);
}

SeriesOracleValue resolvent_series_oracle(const JumpKernel& kernel, double lambda, double x, int n_max,
                                          const SeriesOracleOptions& options) {
  require_1d(kernel);
  require(x != 0.0, ErrorKind::kInvalidParameter, "the series oracle needs x != 0");
  require(lambda > 0.0, ErrorKind::kInvalidParameter, "the series oracle needs lambda > 0");
  require(n_max >= 1, ErrorKind::kInvalidParameter, "n_max must be at least 1");
  SeriesOracleValue out;
  out.terms = n_max;
  const double q = 1.0 / (1.0 + lambda);
  double sum = 0.0;
  if (is_ultra_light(kernel.tail())) {
    out.route = "tilted";
    for (int n = 1; n <= n_max; ++n) {
      const double la = log_conv_power(kernel, n, x);
      if (la == kNegInf) continue;
      sum += std::exp(la + (n + 1) * std::log(q));
    }
  } else if (auto gamma = kernel.stable_index()) {
    out.route = "self-similar";
    for (int n = 1; n <= n_max; ++n) {
      const double s = std::pow(static_cast<double>(n), -1.0 / *gamma);
      sum += s * kernel.density(x * s) * std::pow(q, n + 1);
    }
  } else {
    out.route = "grid";
    const double step = 0.05 * kernel.scale();
    const double h = std::abs(x) / std::ceil(std::abs(x) / step);
    const std::size_t n = next_power_of_two(static_cast<std::size_t>(std::ceil(4.0 * std::abs(x) / h)) + 2);
    const SpatialGrid grid(n, h);
    const auto powers = conv_powers(kernel, n_max, grid);
    const std::size_t j = grid.center() + static_cast<std::size_t>(std::llround(std::abs(x) / h));
    for (int m = 1; m <= n_max; ++m) sum += powers.power(m)[j] * std::pow(q, m + 1);
  }
  out.value = sum;
  out.truncation_bound = sup_density(kernel) * std::pow(q, n_max + 1) / lambda;
  const double allowed = options.relative ? options.tolerance * sum : options.tolerance;
  if (out.truncation_bound > allowed)
    fail(ErrorKind::kInsufficientTerms, "truncation bound " + fmt(out.truncation_bound) + " exceeds " +
                                            fmt(allowed) + " at n_max = " + std::to_string(n_max));
  return out;
}

std::string to_string(Transience verdict) {
  switch (verdict) {
    case Transience::kTransient: return "transient";
    case Transience::kRecurrent: return "recurrent";
    case Transience::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

TransienceVerdict transience_test(const JumpKernel& kernel, int refinement_levels,
                                  const TransienceOptions& options) {
  require_1d(kernel);
  require(refinement_levels >= options.agree_levels + 2, ErrorKind::kInvalidParameter,
          "too few refinement levels");
  auto f = [&](double k) { return std::abs(kernel.symbol(k)) / kernel.one_minus_symbol(k); };
  const double r = options.split_radius;
  TransienceVerdict out;

  // Symbols with algebraic decay (kinked densities) never reach 1e-15 in
  // reach; cap the outer range and extrapolate the remainder as a power law.
  const double k_cap = 2000.0 / kernel.scale();
  double k_cut = k_cap;
  try {
    k_cut = std::min(k_cap, kernel.symbol_cutoff(1e-15));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kTruncation) throw;
  }
  k_cut = std::max(r, k_cut);
  std::vector<double> edges{r};
  for (double b : kernel.symbol_breakpoints())
    if (b > r && b < k_cut) edges.push_back(b);
  edges.push_back(k_cut);
  double outer = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const int panels = std::max(1, static_cast<int>(std::ceil((edges[s + 1] - edges[s]) / (0.5 * kernel.scale()))));
    outer += gauss_legendre(f, edges[s], edges[s + 1], panels);
  }
  if (k_cut >= k_cap) {
    const double f_hi = f(k_cut), f_mid = f(0.5 * k_cut);
    const double decay = f_mid > 0.0 && f_hi > 0.0 ? std::log2(f_mid / f_hi) : 0.0;
    if (decay > 1.0) outer += k_cut * f_hi / (decay - 1.0);
  }
  out.outer_integral = 2.0 * outer;

  double partial = out.outer_integral;
  for (int j = 0; j < refinement_levels; ++j) {
    const double hi = std::ldexp(r, -j);
    const double band = 2.0 * gauss_legendre(f, 0.5 * hi, hi, 1);
    out.band_integrals.push_back(band);
    partial += band;
    out.partial_integrals.push_back(partial);
    if (j > 0) {
      const double prev = out.band_integrals[j - 1];
      out.local_exponents.push_back(1.0 + std::log2(band / prev));
    }
  }

  const int agree = options.agree_levels;
  const auto& p = out.local_exponents;
  const std::size_t np = p.size();
  bool all_below = true, all_above = true;
  for (std::size_t i = np - agree; i < np; ++i) {
    all_below = all_below && p[i] < 1.0 - 1e-3;
    all_above = all_above && p[i] >= options.recurrent_exponent;
  }
  const double last_band = out.band_integrals.back();
  const double ratio = last_band / out.band_integrals[out.band_integrals.size() - 2];
  std::ostringstream note;
  if (all_below && ratio < 1.0) {
    out.tail_estimate = last_band * ratio / (1.0 - ratio);
    if (out.tail_estimate <= options.tolerance * partial) {
      out.verdict = Transience::kTransient;
      note << "criterion integral converges: local exponent " << p.back() << ", tail estimate "
           << out.tail_estimate;
    } else {
      note << "local exponent " << p.back() << " suggests convergence but the tail estimate "
           << out.tail_estimate << " is not below tolerance at this depth";
    }
  } else if (all_above) {
    bool monotone = true;
    const auto& s = out.partial_integrals;
    for (std::size_t i = s.size() - agree; i < s.size(); ++i) monotone = monotone && s[i] > s[i - 1];
    if (monotone) {
      out.verdict = Transience::kRecurrent;
      note << "criterion integral diverges: local exponent " << p.back();
    } else {
      note << "exponent indicates divergence but partial sums are not monotone";
    }
  } else {
    note << "refinement levels disagree (last exponents";
    for (std::size_t i = np - agree; i < np; ++i) note << ' ' << p[i];
    note << ")";
  }
  out.note = note.str();
  return out;
}

}  // namespace nonlocal
