#include "nonlocal/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nonlocal/error.hpp"
#include "nonlocal/greens.hpp"

namespace nonlocal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;

double integrate(const std::function<double(double)>& f, double a, double b) {
  // Equal pieces keep the adaptive refinement local to the peak.
  constexpr int kPieces = 8;
  const double w = (b - a) / kPieces;
  double sum = 0.0;
  for (int i = 0; i < kPieces; ++i) sum += Rule::integrate(f, a + i * w, a + (i + 1) * w, 12, 1e-13);
  return sum;
}

// Interval carrying the mass of exp(g) up to e^{-50}, and the maximum of g.
struct Window {
  double lo, hi, peak, gmax;
};

Window tilted_window(const std::function<double(double)>& g, double scale,
                     std::optional<double> support) {
  constexpr int kPoints = 2001;
  double lo = support ? -*support : -8.0 * scale;
  double hi = support ? *support : 8.0 * scale;
  std::vector<double> vals(kPoints);
  for (int pass = 0; pass < 60; ++pass) {
    const double h = (hi - lo) / (kPoints - 1);
    double gmax = -kInf;
    int imax = 0;
    for (int i = 0; i < kPoints; ++i) {
      vals[i] = g(lo + i * h);
      if (vals[i] > gmax) {
        gmax = vals[i];
        imax = i;
      }
    }
    require(std::isfinite(gmax), ErrorKind::kSolverFailure, "tilted integrand vanishes on the scan");
    const double floor = gmax - 50.0;
    if (!support && (vals.front() > floor || vals.back() > floor)) {
      const double w = hi - lo;
      if (vals.front() > floor) lo -= w;
      if (vals.back() > floor) hi += w;
      require(hi - lo < 1e9, ErrorKind::kTiltOutOfRange, "tilted integrand does not decay");
      continue;
    }
    int first = 0, last = kPoints - 1;
    while (first < imax && vals[first] <= floor) ++first;
    while (last > imax && vals[last] <= floor) --last;
    if (last - first < 200) {
      // Peak narrower than the scan: zoom in.
      const double new_lo = std::max(lo, lo + (first - 1) * h);
      const double new_hi = std::min(hi, lo + (last + 1) * h);
      lo = new_lo;
      hi = new_hi;
      if (pass < 59) continue;
    }
    Window out;
    out.lo = std::max(lo, lo + (first - 1) * h);
    out.hi = std::min(hi, lo + (last + 1) * h);
    out.peak = lo + imax * h;
    out.gmax = gmax;
    return out;
  }
  fail(ErrorKind::kTiltOutOfRange, "could not bracket the tilted integrand");
}

}  // namespace

MgfValue log_mgf(const JumpKernel& kernel, double nu) {
  require(kernel.dimension() == 1, ErrorKind::kInvalidParameter, "log_mgf is implemented for d = 1");
  require(std::isfinite(nu), ErrorKind::kInvalidParameter, "nu must be finite");
  const auto& tail = kernel.tail();
  if (const auto* light = std::get_if<Light>(&tail)) {
    if (std::abs(nu) >= light->delta) {
      std::ostringstream os;
      os << "|nu| = " << std::abs(nu) << " is outside the strip |nu| < " << light->delta;
      fail(ErrorKind::kTiltOutOfRange, os.str());
    }
  } else if (!is_ultra_light(tail)) {
    require(nu == 0.0, ErrorKind::kTiltOutOfRange,
            "the moment generating function diverges for " + describe(tail) + " tails");
  }

  const double a = std::abs(nu);
  auto g = [&](double y) { return kernel.log_density(y) + a * y; };
  const Window win = tilted_window(g, kernel.scale(), kernel.support_halfwidth());
  const double c = win.peak;
  const double z = integrate([&](double y) { return std::exp(g(y) - win.gmax); }, win.lo, win.hi);
  const double m1 = integrate([&](double y) { return (y - c) * std::exp(g(y) - win.gmax); }, win.lo, win.hi);
  const double m2 =
      integrate([&](double y) { return (y - c) * (y - c) * std::exp(g(y) - win.gmax); }, win.lo, win.hi);

  MgfValue out;
  const double shift = m1 / z;
  out.H = nu == 0.0 ? 0.0 : win.gmax + std::log(z);
  out.grad = nu == 0.0 ? 0.0 : std::copysign(c + shift, nu);
  out.hess = m2 / z - shift * shift;
  return out;
}

double hull_support(const JumpKernel& kernel, double theta_hat) {
  require(theta_hat != 0.0, ErrorKind::kInvalidParameter, "direction must be non-zero");
  if (auto s = kernel.support_halfwidth()) return *s;
  auto positive = [&](double y) { return std::isfinite(kernel.log_density(y)); };
  double y = kernel.scale();
  for (int j = 0; j < 60; ++j, y *= 2.0) {
    if (positive(y)) continue;
    double lo = 0.5 * y, hi = y;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (positive(mid) ? lo : hi) = mid;
    }
    return hi;
  }
  return kInf;
}

LargeDeviationProfile::LargeDeviationProfile(JumpKernel kernel)
    : kernel_(std::move(kernel)), s_plus_(hull_support(kernel_)) {}

LegendreValue LargeDeviationProfile::legendre(double p) const {
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(p); it != cache_.end()) return it->second;
  }
  if (std::isfinite(s_plus_) && std::abs(p) >= s_plus_) {
    std::ostringstream os;
    os << "p = " << p << " is outside the hull interior (s+ = " << s_plus_ << ")";
    fail(ErrorKind::kHullViolation, os.str());
  }
  LegendreValue out;
  const double target = std::abs(p);
  if (target > 0.0) {
    // grad H is increasing: bracket nu*, then Newton safeguarded by bisection.
    double cap = kInf;
    if (const auto* light = std::get_if<Light>(&kernel_.tail())) cap = light->delta * (1.0 - 1e-12);
    double lo = 0.0;
    double hi = std::min(1.0 / kernel_.scale(), 0.5 * cap);
    MgfValue m = mgf(hi);
    while (m.grad < target) {
      lo = hi;
      require(hi < cap && hi < 1e12, ErrorKind::kHullViolation, "no tilt reaches the requested mean");
      hi = std::min(2.0 * hi, cap);
      m = mgf(hi);
    }
    double nu = hi;
    int it = 0;
    for (; it < 200; ++it) {
      const double r = m.grad - target;
      if (std::abs(r) <= 1e-14 * std::max(1.0, target)) break;
      (r < 0.0 ? lo : hi) = nu;
      double next = nu - r / m.hess;
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - nu) <= 1e-15 * (1.0 + std::abs(nu)) || hi - lo <= 1e-15 * hi;
      nu = next;
      m = mgf(nu);
      if (done) break;
    }
    if (it == 200) {
      std::ostringstream os;
      os.precision(15);
      os << "Legendre solve stalled at nu = " << nu << " with residual " << m.grad - target;
      fail(ErrorKind::kSolverFailure, os.str());
    }
    out.iterations = it;
    out.nu_star = std::copysign(nu, p);
    out.H_star = target * nu - m.H;
  }
  std::unique_lock lock(mutex_);
  cache_.emplace(p, out);
  return out;
}

LegendreValue legendre(const LargeDeviationProfile& profile, double p) { return profile.legendre(p); }

double phase(const LargeDeviationProfile& profile, double theta, double lambda, double tau) {
  return tau * (profile.legendre(std::abs(theta) / tau).H_star + std::log1p(lambda));
}

FrontDecayProfile phase_min(const LargeDeviationProfile& profile, double theta, double lambda) {
  require(lambda > 0.0, ErrorKind::kInvalidParameter, "lambda must be positive");
  require(theta != 0.0, ErrorKind::kInvalidParameter, "direction must be non-zero");
  const double L = std::log1p(lambda);
  const double unit = std::abs(theta);
  auto S = [&](double tau) { return phase(profile, unit, lambda, tau); };

  const double s_plus = profile.s_plus();
  const double tau_lo = std::isfinite(s_plus) ? 1.02 / s_plus : 1e-3;
  // Walk from tau = scale in the descending direction until S rises three times.
  const double start = std::max(tau_lo, profile.kernel().scale() * unit);
  std::vector<double> taus{start};
  std::vector<double> values{S(start)};
  double factor = 1.5;
  if (start * 1.5 > tau_lo && S(start * 1.5) > values[0] && start / 1.5 >= tau_lo && S(start / 1.5) < values[0])
    factor = 1.0 / 1.5;
  int rising = 0;
  while (rising < 3) {
    const double next = taus.back() * factor;
    if (taus.size() > 400 || next < tau_lo) {
      if (next < tau_lo && factor < 1.0) break;
      std::ostringstream os;
      os << "phase bracketing failed; sampled S:";
      for (std::size_t i = 0; i < taus.size(); i += 40) os << " (" << taus[i] << ", " << values[i] << ")";
      fail(ErrorKind::kSolverFailure, os.str());
    }
    taus.push_back(next);
    values.push_back(S(next));
    rising = values.back() > values[values.size() - 2] ? rising + 1 : 0;
  }
  if (factor < 1.0) {
    std::reverse(taus.begin(), taus.end());
    std::reverse(values.begin(), values.end());
  }
  const auto imin = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  double a = imin == 0 ? std::max(tau_lo, taus[0] / 1.5) : taus[imin - 1];
  double b = taus[std::min(imin + 1, taus.size() - 1)];

  // Golden section, then Newton on S_tau = ln(1+lambda) - H(nu*).
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = S(c), fd = S(d);
  while (b - a > 1e-4 * b) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = S(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = S(d);
    }
  }
  double tau = 0.5 * (a + b);
  a = std::max(tau_lo, a - 1e-3 * b);
  b = b + 1e-3 * b;
  FrontDecayProfile out;
  for (int it = 0; it < 100; ++it) {
    const double p = unit / tau;
    const auto lv = profile.legendre(p);
    const auto m = profile.mgf(lv.nu_star);
    const double s_tau = L - m.H;
    const double s_tt = p * p * p / m.hess;
    (s_tau < 0.0 ? a : b) = tau;
    double next = tau - s_tau / s_tt;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    const bool done = std::abs(next - tau) <= 1e-14 * tau;
    tau = next;
    if (done) break;
  }
  const double p = unit / tau;
  const auto lv = profile.legendre(p);
  const auto m = profile.mgf(lv.nu_star);
  out.theta = theta;
  out.lambda = lambda;
  out.tau0 = tau;
  out.phi = tau * (lv.H_star + L);
  out.nu_star = lv.nu_star;
  out.B = m.hess;
  out.s_tautau = p * p * p / m.hess;
  const double two_pi = 2.0 * std::numbers::pi;
  out.prefactor = 1.0 / (1.0 + lambda) / std::sqrt(two_pi * tau) / std::sqrt(m.hess) *
                  std::sqrt(two_pi / out.s_tautau);
  require(out.s_tautau > 0.0 && out.phi > 0.0, ErrorKind::kSolverFailure, "degenerate phase minimum");
  return out;
}

double green_asymptotic(const FrontDecayProfile& profile, double r, int d) {
  require(r > 0.0, ErrorKind::kInvalidParameter, "r must be positive");
  return profile.prefactor * std::pow(r, 0.5 * (1 - d)) * std::exp(-r * profile.phi);
}

CltReport local_clt_check(const JumpKernel& kernel, int n, const std::vector<double>& y_grid) {
  require(is_ultra_light(kernel.tail()), ErrorKind::kInvalidParameter, "local CLT check needs an ultra-light kernel");
  require(n >= 1, ErrorKind::kInvalidParameter, "n must be at least 1");
  const LargeDeviationProfile profile(kernel);
  CltReport out;
  out.n = n;
  for (double y : y_grid) {
    const auto lv = profile.legendre(y / n);
    const auto m = profile.mgf(lv.nu_star);
    CltPoint pt;
    pt.y = y;
    pt.formula = std::exp(-n * lv.H_star) / std::sqrt(2.0 * std::numbers::pi * n * m.hess);
    pt.oracle = std::exp(log_conv_power(kernel, n, y));
    pt.rel_error = std::abs(pt.formula / pt.oracle - 1.0);
    out.max_rel_error = std::max(out.max_rel_error, pt.rel_error);
    out.points.push_back(pt);
  }
  return out;
}

TailBoundReport tail_bound_check(const JumpKernel& kernel, int n, const std::vector<double>& y_grid) {
  const auto* ul = std::get_if<UltraLight>(&kernel.tail());
  require(ul != nullptr, ErrorKind::kInvalidParameter, "tail bound check needs an ultra-light kernel");
  require(n >= 1 && !y_grid.empty(), ErrorKind::kInvalidParameter, "need n >= 1 and sample points");
  TailBoundReport out;
  out.n = n;
  out.alpha = ul->alpha;
  for (double y : y_grid) out.Y = std::max(out.Y, std::abs(y));
  if (auto s = kernel.support_halfwidth()) out.Y = std::min(out.Y, *s);

  const double alpha = out.alpha;
  auto g = [&](double y) { return kernel.log_density(y) + 0.5 * std::pow(std::abs(y), alpha); };
  double gmax = -kInf;
  for (int i = 0; i <= 2000; ++i) gmax = std::max(gmax, g(out.Y * i / 2000.0));
  const double half = integrate([&](double y) { return std::exp(g(y) - gmax); }, 0.0, out.Y);
  out.c = gmax + std::log(2.0 * half);
  out.edge_integrand = std::exp(g(out.Y));

  double sx = 0, sy = 0, sb = 0, sxx = 0, sxy = 0, sxb = 0;
  int count = 0;
  for (double y : y_grid) {
    const double ratio = std::abs(y) / n;
    if (ratio < 1.0) continue;
    TailPoint pt;
    pt.y = y;
    pt.log_oracle = log_conv_power(kernel, n, y);
    pt.log_bound = n * (out.c - 0.5 * std::pow(ratio, alpha));
    pt.holds = pt.log_oracle <= pt.log_bound + 1e-12 * std::abs(pt.log_bound);
    if (!pt.holds) {
      out.holds = false;
      out.violations.push_back(y);
    }
    out.points.push_back(pt);
    if (std::isfinite(pt.log_oracle)) {
      const double x = std::abs(y);
      sx += x;
      sy += pt.log_oracle;
      sb += pt.log_bound;
      sxx += x * x;
      sxy += x * pt.log_oracle;
      sxb += x * pt.log_bound;
      ++count;
    }
  }
  if (count >= 2) {
    const double den = count * sxx - sx * sx;
    if (den > 0.0) {
      out.oracle_slope = (count * sxy - sx * sy) / den;
      out.bound_slope = (count * sxb - sx * sb) / den;
    }
  }
  return out;
}

}  // namespace nonlocal
