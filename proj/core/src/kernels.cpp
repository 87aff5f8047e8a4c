#include "nonlocal/kernels.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nonlocal/error.hpp"
#include "nonlocal/fft.hpp"
#include "nonlocal/grid.hpp"

namespace nonlocal {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Density of the symmetric stable-like law with symbol exp(-|k|^gamma).
class StableDensity {
 public:
  explicit StableDensity(double gamma) : gamma_(gamma) {}

  double operator()(double y) const {
    y = std::abs(y);
    double value = 0.0;
    if (gamma_ > 1.0 && y < 4.0 && small_series(y, value)) return value;
    if (y > 0.0 && large_series(y, value)) return value;
    return integral(y);
  }

  // Mass of |y| > X.
  double tail_mass(double x) const {
    double value = 0.0;
    if (x > 0.0 && large_tail_series(x, value)) return value;
    const int panels = std::max(8, static_cast<int>(std::ceil(8.0 * x)));
    return 1.0 - 2.0 * gauss_legendre([this](double y) { return (*this)(y); }, 0.0, x, panels);
  }

 private:
  // (1/pi) sum_{n>=1} (-1)^{n+1} Gamma(n g + 1)/n! sin(n pi g / 2) y^{-n g - 1}
  bool large_series(double y, double& out) const {
    return series_at_infinity(y, false, out);
  }

  bool large_tail_series(double x, double& out) const {
    return series_at_infinity(x, true, out);
  }

  bool series_at_infinity(double y, bool integrated, double& out) const {
    const double ly = std::log(y);
    double sum = 0.0;
    double max_term = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    const bool convergent = gamma_ < 1.0;
    for (int n = 1; n <= 600; ++n) {
      const double ng = n * gamma_;
      double log_mag = std::lgamma(ng + 1.0) - std::lgamma(n + 1.0) - ng * ly;
      if (integrated) log_mag -= std::log(ng);
      else log_mag -= ly;
      const double mag = std::exp(log_mag);
      if (!convergent && mag > prev_mag) break;
      const double s = std::sin(ng * kPi / 2.0);
      const double term = ((n % 2 == 1) ? 1.0 : -1.0) * s * mag;
      sum += term;
      max_term = std::max(max_term, std::abs(term));
      prev_mag = mag;
      if (mag < 1e-17 * std::abs(sum) && n > 2) {
        const double scale = integrated ? 2.0 / kPi : 1.0 / kPi;
        out = scale * sum;
        return sum > 0.0 && max_term < 1e3 * std::abs(sum);
      }
    }
    return false;
  }

  // (1/(pi g)) sum_{n>=0} (-1)^n Gamma((2n+1)/g) y^{2n} / (2n)!
  bool small_series(double y, double& out) const {
    double sum = 0.0;
    double max_term = 0.0;
    const double ly = y > 0.0 ? std::log(y) : -std::numeric_limits<double>::infinity();
    for (int n = 0; n <= 400; ++n) {
      const double log_mag = std::lgamma((2.0 * n + 1.0) / gamma_) - std::lgamma(2.0 * n + 1.0) +
                             (n == 0 ? 0.0 : 2.0 * n * ly);
      const double mag = std::exp(log_mag);
      const double term = (n % 2 == 0 ? 1.0 : -1.0) * mag;
      sum += term;
      max_term = std::max(max_term, mag);
      if (n > 0 && mag < 1e-17 * std::abs(sum)) {
        out = sum / (kPi * gamma_);
        return sum > 0.0 && max_term < 1e3 * std::abs(sum);
      }
    }
    return false;
  }

  // (1/pi) int_0^inf exp(-k^g) cos(k y) dk, graded towards k = 0.
  double integral(double y) const {
    const double k_max = std::pow(42.0, 1.0 / gamma_);
    auto f = [&](double k) { return std::exp(-std::pow(k, gamma_)) * std::cos(k * y); };
    double sum = 0.0;
    double lo = std::ldexp(1.0, -44);
    sum += lo;  // f(0) = 1 on the innermost sliver
    for (int j = 43; j >= 0; --j) {
      const double hi = std::ldexp(1.0, -j);
      sum += gauss_legendre(f, lo, hi, 1);
      lo = hi;
    }
    double k = 1.0;
    while (k < k_max) {
      double w = std::max(0.5, 0.25 * k);
      if (y > 0.0) w = std::min(w, kPi / y);
      const double hi = std::min(k + w, k_max);
      sum += gauss_legendre(f, k, hi, 1);
      k = hi;
    }
    return sum / kPi;
  }

  double gamma_;
};

// Tent-sum symbol of the embedded family: sum_j h_j [(2j+1-|k|)_+ - (2j-|k|)_+].
double tent_term(int j, double k) {
  const double lo = 2.0 * j;
  if (k <= lo) return 1.0;
  if (k >= lo + 1.0) return 0.0;
  return lo + 1.0 - k;
}

double one_minus_tent_term(int j, double k) {
  const double lo = 2.0 * j;
  if (k <= lo) return 0.0;
  if (k >= lo + 1.0) return 1.0;
  return k - lo;
}

// int_X^inf cos(c x) / x^2 dx
double cosine_tail(double c, double x) {
  if (c == 0.0) return 1.0 / x;
  return std::cos(c * x) / x - c * (kPi / 2.0 - sine_integral(c * x));
}

JumpKernel embedded_from_weights(std::vector<double> weights, const std::string& name) {
  double total = 0.0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  const int count = static_cast<int>(weights.size());

  KernelSpec spec;
  spec.name = name;
  spec.tail = Heavy{1.0};
  spec.scale = 1.0;
  spec.density = [weights, count](double x) {
    x = std::abs(x);
    // (2/pi) (sin(x/2)/x)^2 sum_j h_j D_j(x), D_j the Dirichlet kernel of order 2j.
    const double q = x < 1e-8 ? 0.5 : std::sin(0.5 * x) / x;
    double sum = 0.0;
    for (int j = 0; j < count; ++j) {
      double dirichlet = 1.0;
      for (int m = 1; m <= 2 * j; ++m) dirichlet += 2.0 * std::cos(m * x);
      sum += weights[j] * dirichlet;
    }
    return 2.0 / kPi * q * q * sum;
  };
  spec.symbol = [weights, count](double k) {
    k = std::abs(k);
    double sum = 0.0;
    for (int j = 0; j < count; ++j) sum += weights[j] * tent_term(j, k);
    return sum;
  };
  spec.one_minus_symbol = [weights, count](double k) {
    k = std::abs(k);
    double sum = 0.0;
    for (int j = 0; j < count; ++j) sum += weights[j] * one_minus_tent_term(j, k);
    return sum;
  };
  spec.tail_mass = [weights, count](double x) {
    if (x <= 0.0) return 1.0;
    double sum = 0.0;
    for (int j = 0; j < count; ++j)
      sum += weights[j] * (cosine_tail(2.0 * j, x) - cosine_tail(2.0 * j + 1.0, x));
    return 2.0 / kPi * sum;
  };
  const double edge = 2.0 * count - 1.0;
  spec.symbol_cutoff = [edge](double) { return edge; };
  spec.symbol_zero_beyond = edge;
  for (int b = 1; b <= static_cast<int>(edge); ++b) spec.symbol_breakpoints.push_back(b);
  return JumpKernel(std::move(spec));
}

// int_0^Y f with panels of width w; the first panel is split dyadically
// toward the origin, where densities like exp(-|y|^alpha) are not smooth.
double half_line_integral(const std::function<double(double)>& f, double w, double Y) {
  if (Y <= w) w = Y;
  constexpr int kLevels = 16;
  double sum = gauss_legendre(f, 0.0, std::ldexp(w, -kLevels));
  for (int j = kLevels; j >= 1; --j) sum += gauss_legendre(f, std::ldexp(w, -j), std::ldexp(w, 1 - j));
  if (Y > w) sum += gauss_legendre(f, w, Y, std::max(1, static_cast<int>(std::ceil((Y - w) / w))));
  return sum;
}

}  // namespace

std::string describe(const TailClass& tail) {
  return std::visit(Overloaded{
                        [](const UltraLight& t) { return "ultra-light(alpha=" + fmt(t.alpha) + ")"; },
                        [](const Light& t) { return "light(delta=" + fmt(t.delta) + ")"; },
                        [](const Moderate& t) { return "moderate(gamma=" + fmt(t.gamma) + ")"; },
                        [](const Heavy& t) { return "heavy(gamma=" + fmt(t.gamma) + ")"; },
                    },
                    tail);
}

void validate_tail(const TailClass& tail) {
  std::visit(Overloaded{
                 [](const UltraLight& t) {
                   require(t.alpha > 1.0, ErrorKind::kInvalidParameter, "ultra-light alpha must exceed 1");
                 },
                 [](const Light& t) {
                   require(t.delta > 0.0, ErrorKind::kInvalidParameter, "light delta must be positive");
                 },
                 [](const Moderate& t) {
                   require(t.gamma > 2.0, ErrorKind::kInvalidParameter, "moderate gamma must exceed 2");
                 },
                 [](const Heavy& t) {
                   require(t.gamma > 0.0 && t.gamma < 2.0, ErrorKind::kInvalidParameter,
                           "heavy gamma must lie in (0,2)");
                 },
             },
             tail);
}

bool is_ultra_light(const TailClass& tail) { return std::holds_alternative<UltraLight>(tail); }

JumpKernel::JumpKernel(KernelSpec spec) {
  require(spec.dimension >= 1, ErrorKind::kInvalidParameter, "dimension must be positive");
  require(spec.intensity > 0.0, ErrorKind::kInvalidParameter, "intensity must be positive");
  require(static_cast<bool>(spec.density), ErrorKind::kInvalidParameter, "kernel needs a density");
  require(spec.scale > 0.0, ErrorKind::kInvalidParameter, "kernel scale must be positive");
  validate_tail(spec.tail);
  spec_ = std::make_shared<const KernelSpec>(std::move(spec));
}

JumpKernel JumpKernel::with_intensity(double chi) const {
  require(chi > 0.0, ErrorKind::kInvalidParameter, "intensity must be positive");
  KernelSpec copy = *spec_;
  copy.intensity = chi;
  return JumpKernel(std::move(copy));
}

double JumpKernel::density(double y) const { return spec_->density(std::abs(y)); }

double JumpKernel::log_density(double y) const {
  if (spec_->log_density) return spec_->log_density(std::abs(y));
  const double a = density(y);
  return a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
}

double JumpKernel::symbol(double k) const {
  if (spec_->symbol) return spec_->symbol(std::abs(k));
  return numeric_symbol(k);
}

double JumpKernel::quadrature_reach(double panel_width) const {
  if (support_halfwidth()) return *support_halfwidth();
  // Heavy tails would need ~1e17 jump lengths; cap the panel count and accept
  // the neglected tail mass (below 1e-5 for the 1/y^2 families).
  constexpr double kMaxPanels = 1 << 17;
  return std::min(density_cutoff(1e-17), kMaxPanels * panel_width);
}

double JumpKernel::numeric_symbol(double k) const {
  k = std::abs(k);
  require(dimension() == 1, ErrorKind::kInvalidParameter, "numeric symbol needs d = 1");
  double w = 0.5 * scale();
  if (k > 0.0) w = std::min(w, kPi / k);
  const auto& f = spec_->density;
  return 2.0 * half_line_integral([&](double y) { return f(y) * std::cos(k * y); }, w, quadrature_reach(w));
}

double JumpKernel::one_minus_symbol(double k) const {
  if (spec_->one_minus_symbol) return spec_->one_minus_symbol(std::abs(k));
  if (spec_->symbol && std::abs(k) > 0.5 / scale()) return 1.0 - spec_->symbol(std::abs(k));
  // 1 - a^(k) = 2 int_0^Y a(y) 2 sin^2(k y / 2) dy, free of cancellation.
  k = std::abs(k);
  double w = 0.5 * scale();
  if (k > 0.0) w = std::min(w, kPi / k);
  const auto& f = spec_->density;
  return 4.0 * half_line_integral(
                   [&](double y) {
                     const double s = std::sin(0.5 * k * y);
                     return f(y) * s * s;
                   },
                   w, quadrature_reach(w));
}

double JumpKernel::symbol_cutoff(double tol) const {
  if (spec_->symbol_cutoff) return spec_->symbol_cutoff(tol);
  if (spec_->symbol_zero_beyond) return *spec_->symbol_zero_beyond;
  // Scan until the symbol stays below tol over a run of samples.  A quadrature
  // symbol carries ~1e-16 absolute noise, so tighter targets are unreachable.
  if (!has_closed_symbol()) tol = std::max(tol, 1e-15);
  const double step = 0.5 / scale();
  int quiet = 0;
  double k = step;
  for (int i = 0; i < 200000; ++i, k += step) {
    if (std::abs(symbol(k)) < tol) {
      if (++quiet >= 16) return k - 15 * step;
    } else {
      quiet = 0;
    }
  }
  fail(ErrorKind::kTruncation, "symbol of " + name() + " does not decay below " + fmt(tol));
}

bool JumpKernel::has_tail_mass() const {
  return static_cast<bool>(spec_->tail_mass) || support_halfwidth().has_value();
}

double JumpKernel::tail_mass(double x) const {
  if (support_halfwidth() && x >= *support_halfwidth()) return 0.0;
  require(static_cast<bool>(spec_->tail_mass), ErrorKind::kInvalidParameter,
          "kernel " + name() + " has no tail-mass evaluator");
  return spec_->tail_mass(x);
}

double JumpKernel::density_cutoff(double tol) const {
  if (support_halfwidth()) return *support_halfwidth();
  require(static_cast<bool>(spec_->tail_mass), ErrorKind::kInvalidParameter,
          "kernel " + name() + " has no tail-mass evaluator");
  double hi = scale();
  int guard = 0;
  while (tail_mass(hi) > tol) {
    hi *= 2.0;
    require(++guard < 200, ErrorKind::kTruncation, "tail mass of " + name() + " never drops below " + fmt(tol));
  }
  double lo = hi / 2.0;
  for (int i = 0; i < 40 && hi - lo > 1e-3 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (tail_mass(mid) > tol ? lo : hi) = mid;
  }
  return hi;
}

double sine_integral(double z) {
  const double sign = z < 0.0 ? -1.0 : 1.0;
  z = std::abs(z);
  if (z <= 4.0) {
    double term = z;
    double sum = z;
    for (int n = 1; n < 60; ++n) {
      term *= -z * z / ((2.0 * n) * (2.0 * n + 1.0));
      const double add = term / (2.0 * n + 1.0);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sign * sum;
  }
  // Si(z) = pi/2 - f(z) cos z - g(z) sin z with Laplace-type auxiliaries.
  const double upper = 45.0 / z;
  const double f = gauss_legendre([&](double t) { return std::exp(-z * t) / (1.0 + t * t); }, 0.0, upper, 48);
  const double g = gauss_legendre([&](double t) { return t * std::exp(-z * t) / (1.0 + t * t); }, 0.0, upper, 48);
  return sign * (kPi / 2.0 - f * std::cos(z) - g * std::sin(z));
}

JumpKernel make_gaussian(double sigma, int d) {
  require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::kInvalidParameter, "sigma must be positive");
  require(d >= 1, ErrorKind::kInvalidParameter, "dimension must be positive");
  KernelSpec spec;
  spec.name = "gaussian";
  spec.dimension = d;
  spec.tail = UltraLight{2.0};
  spec.scale = sigma;
  const double s2 = sigma * sigma;
  const double log_norm = -0.5 * d * std::log(2.0 * kPi * s2);
  spec.density = [s2, log_norm](double r) { return std::exp(log_norm - r * r / (2.0 * s2)); };
  spec.log_density = [s2, log_norm](double r) { return log_norm - r * r / (2.0 * s2); };
  spec.symbol = [s2](double k) { return std::exp(-0.5 * s2 * k * k); };
  spec.one_minus_symbol = [s2](double k) { return -std::expm1(-0.5 * s2 * k * k); };
  spec.tail_mass = [s2, d](double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * d, x * x / (2.0 * s2));
  };
  spec.symbol_cutoff = [sigma](double tol) { return std::sqrt(2.0 * std::log(1.0 / tol)) / sigma; };
  return JumpKernel(std::move(spec));
}

JumpKernel make_stable_like(double gamma, int d) {
  require(gamma > 0.0 && gamma < 2.0, ErrorKind::kInvalidParameter, "stable gamma must lie in (0,2)");
  require(d == 1, ErrorKind::kInvalidParameter, "stable-like kernels are implemented for d = 1");
  KernelSpec spec;
  spec.name = "stable";
  spec.tail = Heavy{gamma};
  spec.mass_tolerance = 1e-6;
  spec.stable_index = gamma;
  spec.symbol = [gamma](double k) { return std::exp(-std::pow(k, gamma)); };
  spec.one_minus_symbol = [gamma](double k) { return -std::expm1(-std::pow(k, gamma)); };
  spec.symbol_cutoff = [gamma](double tol) { return std::pow(std::log(1.0 / tol), 1.0 / gamma); };
  if (gamma == 1.0) {
    spec.name = "cauchy";
    spec.density = [](double y) { return 1.0 / (kPi * (1.0 + y * y)); };
    spec.tail_mass = [](double x) { return x <= 0.0 ? 1.0 : 1.0 - 2.0 / kPi * std::atan(x); };
    return JumpKernel(std::move(spec));
  }
  auto stable = std::make_shared<const StableDensity>(gamma);
  spec.density = [stable](double y) { return (*stable)(y); };
  spec.tail_mass = [stable](double x) { return x <= 0.0 ? 1.0 : stable->tail_mass(x); };

  // Positivity probe over near, middle and far field.
  for (int i = 0; i <= 400; ++i) {
    const double y = i < 200 ? 0.02 * i : std::pow(10.0, 0.6 + 0.03 * (i - 200));
    const double a = (*stable)(y);
    require(a >= -1e-12 && std::isfinite(a), ErrorKind::kConstructionFailure,
            "inverted stable density is negative at y = " + fmt(y));
  }
  return JumpKernel(std::move(spec));
}

double embedded_quadratic(double h, double s) { return 1.0 + 4.0 * h - 20.0 * h * s + 16.0 * h * s * s; }

JumpKernel make_embedded_family(double h) {
  require(h > 0.0, ErrorKind::kInvalidParameter, "embedded h must be positive");
  require(h <= 4.0 / 9.0, ErrorKind::kPositivityViolation,
          "embedded h = " + fmt(h) + " exceeds 4/9; the density turns negative");
  JumpKernel base = embedded_from_weights({1.0 - h, h}, "embedded");
  KernelSpec spec;
  spec.name = "embedded";
  spec.tail = Heavy{1.0};
  // pi x^2 a(x) = 2 s q(s), evaluated without cancellation near x = 0.
  spec.density = [h](double x) {
    const double q = std::abs(x) < 1e-8 ? 0.5 : std::sin(0.5 * x) / x;
    const double s = std::sin(0.5 * x) * std::sin(0.5 * x);
    return 2.0 / kPi * q * q * embedded_quadratic(h, s);
  };
  spec.symbol = [base](double k) { return base.symbol(k); };
  spec.one_minus_symbol = [base](double k) { return base.one_minus_symbol(k); };
  spec.tail_mass = [base](double x) { return base.tail_mass(x); };
  spec.symbol_cutoff = [](double) { return 3.0; };
  spec.symbol_zero_beyond = 3.0;
  spec.symbol_breakpoints = {1.0, 2.0, 3.0};
  return JumpKernel(std::move(spec));
}

JumpKernel make_embedded_family_multi(const std::vector<double>& h_seq, int m_max) {
  require(!h_seq.empty(), ErrorKind::kInvalidParameter, "embedded_multi needs weights");
  require(m_max >= 1, ErrorKind::kInvalidParameter, "m_max must be at least 1");
  std::vector<double> weights(h_seq.begin(),
                              h_seq.begin() + std::min<std::size_t>(h_seq.size(), m_max + 1));
  for (double w : weights)
    require(w > 0.0 && std::isfinite(w), ErrorKind::kInvalidParameter, "weights must be positive");
  double tail = 0.0;
  for (std::size_t j = 1; j < weights.size(); ++j) tail += weights[j] * std::exp(3.0 * j);
  require(weights[0] > tail, ErrorKind::kInvalidParameter,
          "embedded_multi needs h_0 > sum_j h_j e^{3j} (got " + fmt(weights[0]) + " vs " + fmt(tail) + ")");
  return embedded_from_weights(std::move(weights), "embedded_multi");
}

JumpKernel make_exponential_power(double alpha) {
  require(alpha > 1.0, ErrorKind::kInvalidParameter, "exponential-power alpha must exceed 1");
  KernelSpec spec;
  spec.name = "exponential_power";
  spec.tail = UltraLight{alpha};
  const double log_norm = -std::log(2.0 * std::tgamma(1.0 + 1.0 / alpha));
  spec.density = [alpha, log_norm](double y) { return std::exp(log_norm - std::pow(y, alpha)); };
  spec.log_density = [alpha, log_norm](double y) { return log_norm - std::pow(y, alpha); };
  spec.tail_mass = [alpha](double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(1.0 / alpha, std::pow(x, alpha));
  };
  if (alpha == 2.0) {
    spec.symbol = [](double k) { return std::exp(-0.25 * k * k); };
    spec.one_minus_symbol = [](double k) { return -std::expm1(-0.25 * k * k); };
  }
  return JumpKernel(std::move(spec));
}

JumpKernel make_custom(KernelSpec spec) { return JumpKernel(std::move(spec)); }

std::string to_string(PotentialProfile profile) {
  switch (profile) {
    case PotentialProfile::kZero: return "zero";
    case PotentialProfile::kBump: return "bump";
    case PotentialProfile::kRaisedCosine: return "raised_cosine";
    case PotentialProfile::kGaussianBump: return "gaussian_bump";
  }
  return "unknown";
}

PotentialProfile potential_profile_from_string(const std::string& name) {
  if (name == "zero") return PotentialProfile::kZero;
  if (name == "bump") return PotentialProfile::kBump;
  if (name == "raised_cosine") return PotentialProfile::kRaisedCosine;
  if (name == "gaussian_bump") return PotentialProfile::kGaussianBump;
  fail(ErrorKind::kInvalidParameter, "unknown potential profile '" + name + "'");
}

Potential Potential::make(PotentialProfile profile, double amplitude, double support_radius,
                          double delta, double R) {
  require(amplitude >= 0.0 && std::isfinite(amplitude), ErrorKind::kInvalidParameter,
          "potential amplitude must be non-negative");
  require(support_radius > 0.0, ErrorKind::kInvalidParameter, "support radius must be positive");
  require(delta > 0.0 && delta < 1.0, ErrorKind::kInvalidParameter, "delta must lie in (0,1)");
  require(R > 0.0, ErrorKind::kInvalidParameter, "scale R must be positive");
  return Potential{profile, amplitude, support_radius, delta, R};
}

double Potential::shape(double r) const {
  r = std::abs(r);
  if (r >= 1.0) return 0.0;
  switch (profile) {
    case PotentialProfile::kZero: return 0.0;
    case PotentialProfile::kBump: return std::exp(1.0 - 1.0 / (1.0 - r * r));
    case PotentialProfile::kRaisedCosine: return 0.5 * (1.0 + std::cos(kPi * r));
    case PotentialProfile::kGaussianBump: return std::exp(-8.0 * r * r / (1.0 - r * r));
  }
  return 0.0;
}

double Potential::operator()(double x) const {
  if (profile == PotentialProfile::kZero) return 0.0;
  return amplitude * shape(x / scaled_radius());
}

Potential Potential::with_scale(double new_R) const { return make(profile, amplitude, support_radius, delta, new_R); }

Potential Potential::scaled(double factor) const {
  return make(profile, amplitude * factor, support_radius, delta, R);
}

void check_admissible(const Potential& v, double chi) {
  require(v.sup() <= (1.0 - v.delta) * chi * (1.0 + 1e-14), ErrorKind::kInvalidParameter,
          "potential sup " + fmt(v.sup()) + " exceeds (1 - delta) chi = " + fmt((1.0 - v.delta) * chi));
}

double symbol_boundary_threshold(const JumpKernel& kernel) {
  return is_ultra_light(kernel.tail()) ? 1e-10 : 1e-6;
}

double default_symbol_halfwidth(const JumpKernel& kernel) {
  // Margin so the outermost node, which sits one spacing inside K, clears the threshold.
  return 1.02 * kernel.symbol_cutoff(symbol_boundary_threshold(kernel));
}

SymbolGrid kernel_symbol(const JumpKernel& kernel, double K, std::size_t n_points, SymbolRoute route) {
  require(K > 0.0, ErrorKind::kInvalidParameter, "K must be positive");
  require(is_power_of_two(n_points) && n_points >= 4, ErrorKind::kInvalidParameter,
          "n_points must be a power of two");
  require(kernel.dimension() == 1, ErrorKind::kInvalidParameter, "symbol grids are one-dimensional");
  if (route == SymbolRoute::kClosedForm)
    require(kernel.has_closed_symbol(), ErrorKind::kInvalidParameter, "kernel has no closed-form symbol");
  const bool closed = route == SymbolRoute::kClosedForm ||
                      (route == SymbolRoute::kAuto && kernel.has_closed_symbol());

  SymbolGrid out;
  out.K = K;
  out.spacing = 2.0 * K / static_cast<double>(n_points);
  out.from_closed_form = closed;
  out.k.resize(n_points);
  out.values.resize(n_points);
  const std::size_t half = n_points / 2;
  for (std::size_t j = 0; j < n_points; ++j)
    out.k[j] = (static_cast<double>(j) - static_cast<double>(half)) * out.spacing;

  if (closed) {
    for (std::size_t j = 0; j < n_points; ++j) out.values[j] = kernel.symbol(out.k[j]);
    out.certified_zero_beyond = kernel.symbol_zero_beyond();
  } else {
    // Dual grid x_j = (j - n/2) pi / K with trapezoid weights.
    const SpatialGrid grid(n_points, kPi / K);
    std::vector<double> samples(n_points);
    for (std::size_t j = 0; j < n_points; ++j) samples[j] = kernel.density(grid.x(j));
    const auto transform = grid_fourier(grid, samples);
    for (std::size_t m = 0; m <= half; ++m) {
      const double value = transform[m].real();
      if (m < half) out.values[half + m] = value;
      if (m > 0) out.values[half - m] = value;
    }
  }
  out.boundary_value = std::max(std::abs(out.values.front()), std::abs(out.values.back()));
  const double threshold = symbol_boundary_threshold(kernel);
  require(out.boundary_value <= threshold, ErrorKind::kTruncation,
          "symbol at the box edge K = " + fmt(K) + " is " + fmt(out.boundary_value) +
              ", above " + fmt(threshold) + "; enlarge K");
  return out;
}

ValidationReport validate_kernel(const JumpKernel& kernel, const ValidationGridSpec& grid, double tol) {
  ValidationReport report;
  report.min_density = std::numeric_limits<double>::infinity();
  auto probe = [&](double x) {
    const double a = kernel.density(x);
    const double b = kernel.density(-x);
    report.symmetry_defect = std::max(report.symmetry_defect, std::abs(a - b));
    report.min_density = std::min(report.min_density, std::min(a, b));
    return a;
  };

  double mass = 0.0;
  if (grid.adaptive) {
    const double Y = grid.halfwidth;
    std::vector<double> edges{0.0};
    double e = 0.125;
    while (e < Y) {
      edges.push_back(e);
      e *= 2.0;
    }
    edges.push_back(Y);
    double half_mass = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      half_mass += gauss_legendre(probe, edges[i], edges[i + 1], 8);
    mass = 2.0 * half_mass;
    if (kernel.has_tail_mass()) {
      mass += kernel.tail_mass(Y);
    } else {
      report.notes.push_back("no tail-mass evaluator; mass truncated at the grid edge");
    }
  } else {
    const SpatialGrid g = SpatialGrid::with_halfwidth(grid.halfwidth, grid.n_points);
    std::vector<double> values(g.n);
    for (std::size_t j = 0; j < g.n; ++j) values[j] = probe(g.x(j));
    mass = trapezoid(values, g.h);
    if (kernel.has_tail_mass()) mass += kernel.tail_mass(grid.halfwidth);
  }
  report.mass_defect = std::abs(mass - 1.0);
  report.passed = report.symmetry_defect <= tol && report.min_density >= -tol && report.mass_defect <= tol;
  if (!report.passed) report.notes.push_back("kernel " + kernel.name() + " fails validation at tol " + fmt(tol));
  return report;
}

}  // namespace nonlocal
