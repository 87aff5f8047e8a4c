#include "nonlocal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "nonlocal/error.hpp"
#include "nonlocal/fft.hpp"
#include "nonlocal/greens.hpp"

namespace nonlocal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit out;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return out;
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(8);
  os << v;
  return os.str();
}

double interpolate(const EvolutionState& s, double x) {
  const double u = x / s.grid.h + static_cast<double>(s.grid.center());
  const auto j = static_cast<long>(std::floor(u));
  require(j >= 0 && j + 1 < static_cast<long>(s.grid.n), ErrorKind::kDomainTooSmall,
          "probe point " + fmt(x) + " is outside the grid");
  const double w = u - static_cast<double>(j);
  return (1.0 - w) * s.u[static_cast<std::size_t>(j)] + w * s.u[static_cast<std::size_t>(j + 1)];
}

}  // namespace

std::vector<double> InitialCondition::sample(const SpatialGrid& grid) const {
  std::vector<double> u(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    switch (kind) {
      case Kind::kConstant: u[j] = amplitude; break;
      case Kind::kIndicator: u[j] = std::abs(x) <= width ? amplitude : 0.0; break;
      case Kind::kGaussian: u[j] = amplitude * std::exp(-0.5 * x * x / (width * width)); break;
    }
  }
  return u;
}

struct Evolver::Impl {
  explicit Impl(std::size_t n) : fft(n), spectrum(n / 2 + 1) {}
  RealFft fft;
  std::vector<std::complex<double>> spectrum;
  std::vector<double> multiplier;
};

Evolver::Evolver(const JumpKernel& kernel, const Potential& v, const SpatialGrid& grid, double dt,
                 std::vector<double> u0, double far_field, const EvolutionOptions& options)
    : impl_(std::make_unique<Impl>(grid.n)), far_field_(far_field), options_(options) {
  require(dt > 0.0, ErrorKind::kInvalidParameter, "dt must be positive");
  require(is_power_of_two(grid.n), ErrorKind::kInvalidParameter, "grid size must be a power of two");
  require(u0.size() == grid.n, ErrorKind::kInvalidParameter, "initial data does not match the grid");
  state_.grid = grid;
  state_.u = std::move(u0);
  state_.dt = dt;
  const double chi = kernel.intensity();
  const auto om = one_minus_symbol_on_modes(kernel, grid);
  impl_->multiplier.resize(om.size());
  const double inv_n = 1.0 / static_cast<double>(grid.n);
  for (std::size_t m = 0; m < om.size(); ++m) impl_->multiplier[m] = std::exp(-dt * chi * om[m]) * inv_n;
  half_potential_.resize(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) half_potential_[j] = std::exp(0.5 * dt * v(grid.x(j)));
}

Evolver::~Evolver() = default;

void Evolver::step() {
  auto& u = state_.u;
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= half_potential_[j];
  impl_->fft.forward(u, impl_->spectrum);
  for (std::size_t m = 0; m < impl_->spectrum.size(); ++m) impl_->spectrum[m] *= impl_->multiplier[m];
  impl_->fft.inverse(impl_->spectrum, u);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= half_potential_[j];
  ++steps_;
  state_.t = static_cast<double>(steps_) * state_.dt;
  if (kill_zone_excess() > options_.kill_threshold)
    fail(ErrorKind::kDomainExhausted, "solution reached the kill zone at t = " + fmt(state_.t));
}

void Evolver::advance_to(double t) {
  while (state_.t < t - 0.5 * state_.dt) step();
}

double Evolver::kill_zone_excess() const {
  const auto& g = state_.grid;
  const double edge = (1.0 - options_.kill_zone) * g.halfwidth();
  double excess = 0.0, scale = 1.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double dev = std::abs(state_.u[j] - far_field_);
    scale = std::max(scale, dev);
    if (std::abs(g.x(j)) >= edge) excess = std::max(excess, dev);
  }
  return excess / scale;
}

std::vector<EvolutionState> evolve(const JumpKernel& kernel, const Potential& v, const InitialCondition& u0,
                                   double T, double dt, const SpatialGrid& grid,
                                   const std::vector<double>& snapshot_times, const EvolutionOptions& options) {
  require(T >= 0.0, ErrorKind::kInvalidParameter, "T must be non-negative");
  Evolver ev(kernel, v, grid, dt, u0.sample(grid), u0.far_field(), options);
  std::vector<double> times = snapshot_times;
  std::sort(times.begin(), times.end());
  std::vector<EvolutionState> out;
  for (double t : times) {
    if (t > T) break;
    ev.advance_to(t);
    out.push_back(ev.state());
  }
  return out;
}

FrontRadius front_extract(const EvolutionState& state, double direction, double threshold) {
  require(direction != 0.0, ErrorKind::kInvalidParameter, "direction must be non-zero");
  const auto& g = state.grid;
  const long c = static_cast<long>(g.center());
  const long step = direction > 0.0 ? 1 : -1;
  const long last = direction > 0.0 ? static_cast<long>(g.n) - 1 : 0;
  FrontRadius out;
  bool above_prev = state.u[static_cast<std::size_t>(c)] >= threshold;
  long outer = above_prev ? c : -1;
  for (long j = c + step; j != last + step; j += step) {
    const bool above = state.u[static_cast<std::size_t>(j)] >= threshold;
    if (above != above_prev) ++out.crossings;
    if (above) outer = j;
    above_prev = above;
  }
  if (outer < 0) return out;
  const double r_in = std::abs(g.x(static_cast<std::size_t>(outer)));
  if (outer == last) {
    out.radius = r_in;
    return out;
  }
  const double u_in = state.u[static_cast<std::size_t>(outer)];
  const double u_out = state.u[static_cast<std::size_t>(outer + step)];
  out.radius = r_in + (u_in - threshold) / (u_in - u_out) * g.h;
  return out;
}

std::vector<FrontRadius> front_extract(const EvolutionState& state, const std::vector<double>& directions,
                                       double threshold) {
  std::vector<FrontRadius> out;
  for (double d : directions) out.push_back(front_extract(state, d, threshold));
  return out;
}

FrontFit front_law_fit(const FrontTrace& trace, double lambda0, double phi, std::size_t direction, int d) {
  require(lambda0 > 0.0 && phi > 0.0, ErrorKind::kInvalidParameter, "lambda0 and phi must be positive");
  require(direction < trace.radii.size(), ErrorKind::kInvalidParameter, "no such direction in the trace");
  std::vector<double> t, xi, r;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double ti = trace.times[i];
    const double ri = trace.radii[direction][i];
    if (lambda0 * ti < 5.0 || trace.u_max[i] < 10.0 || !std::isfinite(ri)) continue;
    t.push_back(ti);
    xi.push_back((lambda0 * ti + 0.5 * (1 - d) * std::log(ti)) / phi);
    r.push_back(ri);
  }
  if (t.size() < 8)
    fail(ErrorKind::kWindowTooShort, "only " + std::to_string(t.size()) +
                                         " samples satisfy lambda0 t >= 5 and max u >= 10");
  FrontFit out;
  out.points = t.size();
  out.window_start = t.front();
  const auto law = fit_line(xi, r);
  out.slope = law.slope;
  out.intercept = law.intercept;
  out.slope_relative_error = std::abs(law.slope - 1.0);
  out.speed = fit_line(t, r).slope;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> resid(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    resid[i] = r[i] - (law.slope * xi[i] + law.intercept);
    lo = std::min(lo, resid[i]);
    hi = std::max(hi, resid[i]);
  }
  out.band = hi - lo;
  const std::size_t half = t.size() / 2;
  const std::vector<double> t2(t.begin() + static_cast<long>(half), t.end());
  const std::vector<double> r2(resid.begin() + static_cast<long>(half), resid.end());
  out.trend = fit_line(t2, r2).slope;
  return out;
}

GrowthProbe growth_probe(const std::vector<EvolutionState>& states, double lambda0, double phi, double gamma) {
  require(gamma > 0.0 && gamma < lambda0, ErrorKind::kInvalidParameter, "need 0 < gamma < lambda0");
  std::vector<double> t, in, out_vals;
  for (const auto& s : states) {
    if (s.t <= 0.0) continue;
    const double ui = interpolate(s, (lambda0 - gamma) / phi * s.t);
    const double uo = interpolate(s, (lambda0 + gamma) / phi * s.t);
    const double floor = 1e-12 * *std::max_element(s.u.begin(), s.u.end());
    require(ui > floor && uo > floor, ErrorKind::kNumericalPositivity,
            "u at a probe point is below the roundoff floor at t = " + fmt(s.t));
    t.push_back(s.t);
    in.push_back(std::log(ui));
    out_vals.push_back(std::log(uo));
  }
  require(t.size() >= 2, ErrorKind::kWindowTooShort, "growth probe needs two snapshots with t > 0");
  GrowthProbe out;
  out.inner_rate = fit_line(t, in).slope;
  out.outer_rate = fit_line(t, out_vals).slope;
  return out;
}

double gzero_v_norm_bound(const JumpKernel& kernel, const Potential& v) {
  if (v.is_zero()) return 0.0;
  const auto verdict = transience_test(kernel);
  if (verdict.verdict != Transience::kTransient)
    fail(ErrorKind::kRecurrentResolvent, "G_0 needs a transient kernel (" + verdict.note + ")");
  const double rho = v.scaled_radius();
  auto v_hat = [&](double k) {
    const int panels = std::max(4, static_cast<int>(std::ceil(k * rho / 2.0)));
    return 2.0 * gauss_legendre([&](double x) { return v(x) * std::cos(k * x); }, 0.0, rho, panels);
  };
  auto f = [&](double k) { return std::abs(kernel.symbol(k) * v_hat(k)) / kernel.one_minus_symbol(k); };

  const double k0 = 1.0 / kernel.scale();
  double total = 0.0;
  for (int j = 0;; ++j) {
    const double hi = std::ldexp(k0, -j);
    const double lo = 0.5 * hi;
    total += gauss_legendre(f, lo, hi, 1);
    const double p = std::log2(f(lo) / f(hi));
    const double remainder = lo * f(lo) / (1.0 - std::min(p, 0.999));
    if (j >= 3 && remainder < 1e-13 * total) {
      total += remainder;
      break;
    }
    require(j < 400, ErrorKind::kRecurrentResolvent, "norm-bound integrand not integrable at k = 0");
  }
  const double k_max = kernel.symbol_cutoff(1e-16);
  const double width = std::min(0.5, 2.0 / rho);
  double recent = 0.0;
  int quiet = 0;
  for (double a = k0; a < k_max; a += width) {
    const double piece = gauss_legendre(f, a, std::min(a + width, k_max), 1);
    total += piece;
    recent = std::abs(piece);
    quiet = recent < 1e-16 * total ? quiet + 1 : 0;
    if (quiet >= 20) break;
  }
  return v.sup() + total / std::numbers::pi;
}

StabilizationResult stabilize(const JumpKernel& kernel, const Potential& v, const StabilizationOptions& options) {
  const double chi = kernel.intensity();
  check_admissible(v, chi);
  const Potential vi = v.scaled(1.0 / chi);
  StabilizationResult out;
  const double h = options.h;
  const long half_window = static_cast<long>(std::floor(options.window / h));
  for (long i = -half_window; i <= half_window; ++i) out.x.push_back(static_cast<double>(i) * h);
  if (vi.is_zero()) {
    out.neumann_terms = 1;
    out.u_infinity.assign(out.x.size(), 1.0);
    return out;
  }
  out.norm_bound = gzero_v_norm_bound(kernel, vi);
  if (out.norm_bound >= 1.0)
    fail(ErrorKind::kContractionViolated, "norm bound " + fmt(out.norm_bound) + " >= 1");

  const double rho = vi.scaled_radius();
  const long half_nodes = static_cast<long>(std::ceil(rho / h));
  std::vector<long> node_index;
  std::vector<double> vj;
  for (long j = -half_nodes; j <= half_nodes; ++j) {
    const double value = vi(static_cast<double>(j) * h);
    if (value > 0.0) {
      node_index.push_back(j);
      vj.push_back(value);
    }
  }
  const std::size_t m = node_index.size();
  const ResolventTable table(kernel, 0.0, h, static_cast<std::size_t>(half_window + half_nodes + 2));

  std::vector<double> f(m, 1.0), next(m), sum(m, 1.0);
  double prev_inc = 0.0;
  for (int n = 1; n <= options.max_terms; ++n) {
    // f_n = G_0 (v f_{n-1}) on the nodes and its sup over the window.
    for (std::size_t i = 0; i < m; ++i) {
      double acc = vj[i] * f[i];
      for (std::size_t j = 0; j < m; ++j) acc += table.at(node_index[i] - node_index[j]) * vj[j] * f[j] * h;
      next[i] = acc;
    }
    double inc = 0.0;
    for (std::size_t i = 0; i < m; ++i) inc = std::max(inc, next[i]);
    for (std::size_t i = 0; i < m; ++i)
      if (next[i] < -1e-14) out.monotone = false;
    if (!out.monotone) fail(ErrorKind::kNumericalPositivity, "negative Neumann term at n = " + std::to_string(n));
    out.increments.push_back(inc);
    if (n > 1) out.ratios.push_back(inc / prev_inc);
    prev_inc = inc;
    f.swap(next);
    for (std::size_t i = 0; i < m; ++i) sum[i] += f[i];
    out.neumann_terms = n + 1;
    if (inc < options.tol) break;
    require(n < options.max_terms, ErrorKind::kIterationLimit, "Neumann series did not reach the tolerance");
  }

  out.u_infinity.resize(out.x.size());
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    const long xi = static_cast<long>(i) - half_window;
    double acc = 1.0;
    for (std::size_t j = 0; j < m; ++j) acc += table.at(xi - node_index[j]) * vj[j] * sum[j] * h;
    out.u_infinity[i] = acc / (1.0 - vi(out.x[i]));
  }
  return out;
}

EvolutionGap stabilization_gap(const JumpKernel& kernel, const Potential& v, StabilizationResult& result,
                               const EvolutionGapOptions& options) {
  const auto& grid = options.grid;
  EvolutionOptions eo;
  eo.kill_threshold = std::numeric_limits<double>::infinity();
  Evolver ev(kernel, v, grid, options.dt, std::vector<double>(grid.n, 1.0), 1.0, eo);

  // Window points that coincide with evolution nodes.
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    const double u = result.x[i] / grid.h;
    if (std::abs(u - std::round(u)) > 1e-9) continue;
    idx.emplace_back(i, static_cast<std::size_t>(static_cast<long long>(grid.center()) + std::llround(u)));
  }
  require(!idx.empty(), ErrorKind::kInvalidParameter, "stabilization window shares no nodes with the grid");

  EvolutionGap out;
  std::vector<double> last = ev.state().u;
  double next_check = options.check_interval;
  while (true) {
    std::vector<double> before = ev.state().u;
    ev.step();
    const auto& u = ev.state().u;
    for (std::size_t j = 0; j < u.size(); ++j)
      if (u[j] < before[j] - 1e-12 * std::max(1.0, before[j])) out.monotone = false;
    if (ev.state().t >= next_check - 0.5 * options.dt) {
      double inc = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) inc = std::max(inc, std::abs(u[j] - last[j]));
      out.last_increment = inc;
      last = u;
      next_check += options.check_interval;
      if (inc < options.increment_tol) break;
      require(ev.state().t < options.t_max, ErrorKind::kIterationLimit,
              "evolution increments stayed above tolerance up to t = " + fmt(options.t_max));
    }
  }
  out.T = ev.state().t;
  for (const auto& [i, j] : idx) out.gap = std::max(out.gap, std::abs(ev.state().u[j] - result.u_infinity[i]));
  result.evolution_gap = out.gap;
  return out;
}

PtBoundReport pt_bound_check(const JumpKernel& kernel, const std::vector<double>& t_grid,
                             const std::vector<double>& x_grid, double epsilon) {
  require(epsilon >= 0.0, ErrorKind::kInvalidParameter, "epsilon must be non-negative");
  require(!t_grid.empty() && !x_grid.empty(), ErrorKind::kInvalidParameter, "empty sample box");
  const bool tilted = is_ultra_light(kernel.tail());
  require(tilted || std::holds_alternative<Light>(kernel.tail()), ErrorKind::kInvalidParameter,
          "the p(t, x) bound needs a light or ultra-light kernel");

  struct Sample {
    double t, x, log_p;
  };
  std::vector<Sample> samples;
  for (double t : t_grid) {
    require(t > 0.0, ErrorKind::kInvalidParameter, "t must be positive");
    if (tilted) {
      for (double x : x_grid) samples.push_back({t, x, log_transition_regular(kernel, t, x)});
    } else {
      double xmax = 0.0;
      for (double x : x_grid) xmax = std::max(xmax, std::abs(x));
      const double h = 0.05 * kernel.scale();
      const std::size_t n = next_power_of_two(static_cast<std::size_t>(std::ceil(2.0 * (2.0 * xmax + 40.0) / h)));
      const auto td = transition_density(kernel, t, SpatialGrid(n, h));
      for (double x : x_grid) {
        const auto j = static_cast<std::size_t>(static_cast<long>(td.grid.center()) + std::lround(x / h));
        samples.push_back({t, x, std::log(td.regular[j])});
      }
    }
  }
  PtBoundReport out;
  out.epsilon = epsilon;
  out.samples = samples.size();
  const double e2 = epsilon * epsilon;
  std::vector<double> q;
  double tmin = t_grid.front(), tmax = t_grid.front();
  for (const auto& s : samples) {
    q.push_back(s.log_p - std::log(s.t) + epsilon * std::abs(s.x));
    tmin = std::min(tmin, s.t);
    tmax = std::max(tmax, s.t);
  }
  const double t_mid = 0.5 * (tmin + tmax);
  auto log_c = [&](double alpha) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q.size(); ++i) m = std::max(m, q[i] - alpha * e2 * samples[i].t);
    return m;
  };
  double alpha = 0.0;
  if (epsilon > 0.0) {
    double lo = 0.0, hi = 1e4;
    for (int it = 0; it < 200; ++it) {
      const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
      if (log_c(a) + a * e2 * t_mid <= log_c(b) + b * e2 * t_mid)
        hi = b;
      else
        lo = a;
    }
    alpha = 0.5 * (lo + hi);
  }
  if (alpha < 1e-12) alpha = 0.0;
  out.alpha = alpha;
  const double lc = log_c(alpha);
  out.C = std::exp(lc);
  for (const auto& s : samples) {
    const double bound = lc + std::log(s.t) + alpha * e2 * s.t - epsilon * std::abs(s.x);
    if (s.log_p > bound + 1e-9) {
      out.holds = false;
      out.violations.emplace_back(s.t, s.x);
    }
  }
  return out;
}

}  // namespace nonlocal
