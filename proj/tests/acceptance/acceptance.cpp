// Acceptance suite: one PASS/FAIL line per criterion.  Exit status is the
// number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nonlocal/asymptotics.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/eigen.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/greens.hpp"
#include "nonlocal/kernels.hpp"
#include "nonlocal/spectral.hpp"
#include "oracles.hpp"

using namespace nonlocal;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kSymbolTol = 1e-8;
constexpr double kEmbeddedDensityFloor = -1e-12;
constexpr double kPlateauTol = 1e-3;
constexpr double kQuadraticTol = 1e-10;
constexpr double kResolventMassTol = 1e-4;
constexpr double kTableSeriesTol = 1e-6;
constexpr double kPerronTol = 1e-10;
constexpr double kDenseEigenRelTol = 1e-3;
constexpr double kClosedFormTol = 1e-6;
constexpr double kDualityTol = 1e-10;
constexpr double kFiniteDifferenceTol = 1e-6;
constexpr double kGreenRatioTol = 0.02;
constexpr double kGreenErrorFloor = 1e-9;
constexpr double kGaussianCltTol = 1e-10;
constexpr double kQuarticCltTol = 0.05;
constexpr double kFrontSlopeTol = 0.05;
constexpr double kFrontDriftTol = 0.25;
constexpr double kFrontBandTol = 1.0;
constexpr double kStabilizationGapTol = 1e-2;
constexpr double kIncrementTol = 1e-3;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no runtime limit
  std::function<void(Outcome&)> run;
};

Potential bump(double amplitude) { return Potential::make(PotentialProfile::kBump, amplitude, 1.0, 0.5); }

// Doubles the number of series terms until the truncation bound is met.
double series(const JumpKernel& kernel, double lambda, double x) {
  for (int n = 64;; n *= 2) {
    try {
      return resolvent_series_oracle(kernel, lambda, x, n).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInsufficientTerms || n >= 8192) throw;
    }
  }
}

void symbol_quadrature(Outcome& o) {
  const auto g = make_gaussian(1.0);
  const auto grid = kernel_symbol(g, 40.0, 1 << 14, SymbolRoute::kQuadrature);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.k.size(); ++j)
    err = std::max(err, std::abs(grid.values[j] - std::exp(-0.5 * grid.k[j] * grid.k[j])));
  o.detail << "sup error " << err;
  o.check(!grid.from_closed_form, "quadrature route");
  o.check(err <= kSymbolTol, "symbol error");
}

void embedded_family(Outcome& o) {
  const double h = 0.4;
  const auto k = make_embedded_family(h);
  double min_density = INFINITY;
  for (int i = -20000; i <= 20000; ++i) min_density = std::min(min_density, k.density(0.01 * i));
  double spread = 0.0;
  const double ref = k.numeric_symbol(1.05);
  for (double q = 1.05; q <= 1.95 + 1e-12; q += 0.05) spread = std::max(spread, std::abs(k.numeric_symbol(q) - ref));
  const auto plateaus = plateau_eigenvalues(kernel_symbol(k, 6.0, 1 << 13), 1.0);
  const double q_edge = embedded_quadratic(4.0 / 9.0, 0.625);
  double q_min = INFINITY;
  for (int i = 0; i <= 100000; ++i) q_min = std::min(q_min, embedded_quadratic(4.0 / 9.0, i * 1e-5));
  o.detail << "min density " << min_density << ", plateau spread " << spread << ", plateaus";
  for (const auto& p : plateaus) o.detail << " " << p.lambda;
  o.detail << ", q(4/9, 5/8) = " << q_edge;
  o.check(min_density >= kEmbeddedDensityFloor, "density sign");
  o.check(std::abs(ref - h) <= kPlateauTol && spread <= kPlateauTol, "numeric plateau");
  o.check(plateaus.size() == 2 && std::abs(plateaus[0].lambda - (h - 1.0)) <= kPlateauTol &&
              std::abs(plateaus[1].lambda + 1.0) <= kPlateauTol,
          "plateau eigenvalues");
  o.check(std::abs(q_edge) <= kQuadraticTol && q_min >= q_edge - kQuadraticTol, "boundary quadratic");
}

void resolvent(Outcome& o) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(8192, 0.05);
  double worst_mass = 0.0;
  bool positive = true, decreasing = true;
  std::vector<double> previous;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto r = resolvent_kernel(g, lambda, grid);
    worst_mass = std::max(worst_mass, std::abs(r.total_mass() - 1.0 / lambda) * lambda);
    const ResolventTable table(g, lambda, 0.05, 400);
    for (double t : table.values()) positive = positive && t > 0.0;
    if (!previous.empty())
      for (std::size_t j = 0; j < previous.size(); ++j) decreasing = decreasing && table.values()[j] < previous[j];
    previous = table.values();
  }
  double worst_series = 0.0;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const ResolventTable table(g, lambda, 0.05, 200);
    for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double s = series(g, lambda, x);
      worst_series = std::max(worst_series, std::abs(table(x) - s) / s);
    }
  }
  o.detail << "mass defect " << worst_mass << ", table vs series " << worst_series;
  o.check(worst_mass <= kResolventMassTol, "resolvent mass");
  o.check(positive, "positivity");
  o.check(decreasing, "monotone in lambda");
  o.check(worst_series <= kTableSeriesTol, "table vs series");
}

void transience(Outcome& o) {
  const auto gauss = transience_test(make_gaussian(1.0));
  const auto cauchy = transience_test(make_stable_like(1.0));
  const auto stable = transience_test(make_stable_like(0.5));
  const auto& p = stable.partial_integrals;
  double agreement = INFINITY;
  if (p.size() >= 3) agreement = std::abs(p.back() - p[p.size() - 3]) / std::abs(p.back());
  o.detail << "gaussian " << to_string(gauss.verdict) << ", cauchy " << to_string(cauchy.verdict) << ", stable(0.5) "
           << to_string(stable.verdict) << " (last three levels within " << agreement << ")";
  o.check(gauss.verdict == Transience::kRecurrent, "gaussian");
  o.check(cauchy.verdict == Transience::kRecurrent, "cauchy");
  o.check(stable.verdict == Transience::kTransient, "stable 0.5");
  o.check(agreement <= TransienceOptions{}.tolerance, "three-level agreement");
}

void ground_energy(Outcome& o) {
  const auto g = make_gaussian(1.0);
  const auto v = bump(0.5);
  bool decreasing = true;
  double prev = INFINITY;
  for (int i = 0; i < 20; ++i) {
    std::size_t nodes = 128;
    const double m = mu0(g, v, 0.02 + 0.05 * i, 2.0, nodes);
    decreasing = decreasing && m < prev;
    prev = m;
  }
  const auto op = build_bs_operator(g, v, 0.2, 2.0, 200);
  const double power = perron_eigenvalue(op).mu0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
  const double power_err = std::abs(power - es.eigenvalues()(199));
  const auto p = principal_eigenvalue(g, v, 2.0);
  const auto dense = oracle::dense_top_eigenvalue(g, v.with_scale(2.0), 30.0, 0.1);
  const double rel = std::abs(p.lambda0 - dense.top) / dense.top;
  o.detail << "power vs dense " << power_err << ", lambda0 " << p.lambda0 << " vs dense " << dense.top << " (rel "
           << rel << ")";
  o.check(decreasing, "mu0 decreasing");
  o.check(power_err <= kPerronTol, "power iteration");
  o.check(p.status == EigenStatus::kFound && rel <= kDenseEigenRelTol, "lambda0 vs dense operator");
}

void threshold(Outcome& o) {
  const auto v = bump(0.5);
  const auto g = principal_eigenvalue(make_gaussian(1.0), v, 1.0);
  std::vector<double> Rs;
  for (int i = 0; i < 10; ++i) Rs.push_back(0.25 * std::pow(2.0, 0.5 * i));
  const auto scan = threshold_scan(make_stable_like(0.5), v, Rs);
  std::size_t first_found = scan.size();
  for (std::size_t i = 0; i < scan.size(); ++i)
    if (scan[i].status == EigenStatus::kFound) {
      first_found = i;
      break;
    }
  bool switch_once = first_found > 0 && first_found < scan.size();
  bool non_decreasing = true, bounded = true;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    switch_once = switch_once && (scan[i].status == EigenStatus::kFound) == (i >= first_found);
    if (i > first_found) non_decreasing = non_decreasing && scan[i].lambda0 >= scan[i - 1].lambda0;
    bounded = bounded && scan[i].lambda0 <= v.sup_bound();
  }
  o.detail << "gaussian R=1 lambda0 " << g.lambda0 << ", stable(0.5) threshold between R="
           << (first_found > 0 && first_found < scan.size() ? Rs[first_found - 1] : NAN) << " and R="
           << (first_found < scan.size() ? Rs[first_found] : NAN) << ", lambda0(R=" << Rs.back()
           << ") = " << scan.back().lambda0;
  o.check(g.status == EigenStatus::kFound && g.lambda0 > 0.0, "gaussian R=1");
  o.check(switch_once, "none then found");
  o.check(non_decreasing, "lambda0 non-decreasing in R");
  o.check(bounded, "lambda0 <= 1 - delta");
}

void large_deviations(Outcome& o) {
  const LargeDeviationProfile p(make_gaussian(1.0));
  double closed = 0.0, duality = 0.0, fd = 0.0;
  for (double x : {0.25, 1.0, 2.0}) {
    const auto m = p.mgf(x);
    const auto l = p.legendre(x);
    closed = std::max({closed, std::abs(m.H - 0.5 * x * x), std::abs(l.H_star - 0.5 * x * x)});
    duality = std::max(duality, std::abs(l.H_star - (x * l.nu_star - p.H(l.nu_star))));
    const double e = 1e-4;
    fd = std::max(fd, std::abs(m.grad - (p.H(x + e) - p.H(x - e)) / (2.0 * e)));
  }
  const double phi = phase_min(p, 1.0, std::exp(1.0) - 1.0).phi;
  closed = std::max(closed, std::abs(phi - std::sqrt(2.0)));
  o.detail << "closed forms " << closed << ", phi(e-1) = " << phi << ", duality " << duality << ", fd " << fd;
  o.check(closed <= kClosedFormTol, "closed forms");
  o.check(duality <= kDualityTol, "duality");
  o.check(fd <= kFiniteDifferenceTol, "finite differences");
}

void green_asymptotics(Outcome& o) {
  const LargeDeviationProfile p(make_gaussian(1.0));
  const auto f = phase_min(p, 1.0, 1.0);
  std::vector<double> err;
  for (double r : {20.0, 30.0, 40.0}) {
    err.push_back(std::abs(green_asymptotic(f, r) / oracle::gaussian_resolvent_series(1.0, r) - 1.0));
    o.detail << "r=" << r << ": " << err.back() << " ";
  }
  o.check(err[1] <= kGreenRatioTol, "ratio at r = 30");
  o.check(err[1] <= std::max(err[0], kGreenErrorFloor) && err[2] <= std::max(err[1], kGreenErrorFloor),
          "improving with r");
}

void local_clt(Outcome& o) {
  auto grid = [](int n) {
    std::vector<double> y;
    for (int i = 0; i <= 40; ++i) y.push_back(0.025 * n * i);
    return y;
  };
  const auto g = make_gaussian(1.0);
  const double gauss = std::max(local_clt_check(g, 16, grid(16)).max_rel_error,
                                local_clt_check(g, 64, grid(64)).max_rel_error);
  const auto q = make_exponential_power(4.0);
  const double e16 = local_clt_check(q, 16, grid(16)).max_rel_error;
  const double e64 = local_clt_check(q, 64, grid(64)).max_rel_error;
  std::vector<double> far;
  for (int i = 0; i <= 30; ++i) far.push_back(16.0 * (1.0 + 0.1 * i));
  const auto tail = tail_bound_check(q, 16, far);
  o.detail << "gaussian " << gauss << ", quartic n=16 " << e16 << " n=64 " << e64 << ", tail bound "
           << (tail.holds ? "holds" : "violated") << " on " << tail.points.size() << " points";
  o.check(gauss <= kGaussianCltTol, "gaussian exact");
  o.check(e64 < e16 && e64 <= kQuarticCltTol, "quartic convergence");
  o.check(tail.holds && !tail.points.empty(), "tail bound");
}

void front(Outcome& o) {
  const auto kernel = make_gaussian(1.0);
  const auto v = bump(0.5).with_scale(2.0);
  const double lambda0 = principal_eigenvalue(kernel, bump(0.5), 2.0).lambda0;
  const double phi = phase_min(LargeDeviationProfile(kernel), 1.0, lambda0).phi;
  const SpatialGrid grid(4096, 0.1);
  const InitialCondition ic{InitialCondition::Kind::kIndicator, 1.0, 1.0};
  Evolver ev(kernel, v, grid, 0.05, ic.sample(grid));
  FrontTrace trace;
  trace.directions = {1.0, -1.0};
  trace.radii.resize(2);
  std::vector<EvolutionState> probes;
  for (int t = 1; t <= 120; ++t) {
    ev.advance_to(t);
    const auto& s = ev.state();
    if (t >= 40 && t <= 80 && t % 10 == 0) probes.push_back(s);
    const auto fr = front_extract(s, trace.directions);
    trace.times.push_back(s.t);
    trace.u_max.push_back(*std::max_element(s.u.begin(), s.u.end()));
    for (std::size_t d = 0; d < 2; ++d) trace.radii[d].push_back(fr[d].radius.value_or(NAN));
  }
  o.detail << "lambda0 " << lambda0 << ", phi " << phi;
  o.check(lambda0 >= 0.2 && lambda0 <= 0.4, "lambda0 in [0.2, 0.4]");
  for (std::size_t d = 0; d < 2; ++d) {
    const auto fit = front_law_fit(trace, lambda0, phi, d);
    const double half_window = 0.5 * (trace.times.back() - fit.window_start);
    const double drift = std::abs(fit.trend) * half_window;
    o.detail << "; dir " << trace.directions[d] << ": slope " << fit.slope << ", drift " << drift << ", band "
             << fit.band;
    o.check(fit.slope_relative_error <= kFrontSlopeTol, "slope");
    o.check(drift <= kFrontDriftTol && fit.band <= kFrontBandTol, "residual drift and band");
  }
  const auto gp = growth_probe(probes, lambda0, phi, 0.05);
  o.detail << "; probe rates " << gp.inner_rate << ", " << gp.outer_rate;
  o.check(gp.inner_rate > 0.0 && gp.outer_rate < 0.0, "growth probe signs");
}

void stabilization(Outcome& o) {
  const auto kernel = make_stable_like(0.5);
  const auto v = bump(0.05);
  auto res = stabilize(kernel, v);
  bool ratios_ok = !res.ratios.empty();
  for (double r : res.ratios) ratios_ok = ratios_ok && r <= res.norm_bound;
  EvolutionGapOptions gap_opt;
  gap_opt.increment_tol = kIncrementTol;
  const auto gap = stabilization_gap(kernel, v, res, gap_opt);
  o.detail << "norm bound " << res.norm_bound << ", " << res.neumann_terms << " terms, gap " << gap.gap << " at T = "
           << gap.T;
  o.check(res.norm_bound < 1.0, "norm bound");
  o.check(ratios_ok, "term ratios");
  o.check(res.monotone && gap.monotone, "monotonicity");
  o.check(gap.gap <= kStabilizationGapTol, "evolution gap");
}

int run_cli(const std::string& command, const std::string& config, const fs::path& out) {
  const std::string line = std::string("\"") + NONLOCAL_CLI_PATH + "\" " + command + " --config \"" +
                           NONLOCAL_CONFIG_DIR + "/" + config + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
  const int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism(Outcome& o) {
  struct Run {
    std::string config;
    std::vector<std::string> commands;
  };
  const std::vector<Run> runs{
      {"gaussian_front.json", {"spectrum", "transience", "eigen", "asym", "front", "stabilize", "oracle"}},
      {"embedded_h04.json", {"spectrum"}},
      {"stable_stabilize.json", {"transience", "eigen", "stabilize"}},
      {"quartic_oracle.json", {"asym", "oracle"}},
  };
  const fs::path root = fs::temp_directory_path() / "nonlocal_acceptance";
  fs::remove_all(root);
  int compared = 0;
  for (const auto& run : runs)
    for (const auto& cmd : run.commands) {
      const fs::path a = root / (run.config + "." + cmd + ".a"), b = root / (run.config + "." + cmd + ".b");
      const int ea = run_cli(cmd, run.config, a), eb = run_cli(cmd, run.config, b);
      o.check(ea == eb, run.config + " " + cmd + " exit codes");
      if (!fs::exists(a)) continue;
      for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        o.check(oracle::files_identical(entry.path().string(), (b / entry.path().filename()).string()),
                run.config + " " + cmd + " " + entry.path().filename().string());
      }
    }
  o.detail << compared << " csv files compared";
  o.check(compared > 0, "outputs produced");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "gaussian symbol by quadrature", 1.0, symbol_quadrature},
      {2, "embedded family density, plateaus and boundary", 5.0, embedded_family},
      {3, "resolvent mass, positivity and series oracle", 10.0, resolvent},
      {4, "transience verdicts", 5.0, transience},
      {5, "ground-energy operator and dense cross-check", 30.0, ground_energy},
      {6, "eigenvalue threshold in R", 120.0, threshold},
      {7, "large-deviation closed forms and duality", 10.0, large_deviations},
      {8, "green function asymptotics", 60.0, green_asymptotics},
      {9, "local limit theorem and tail bound", 120.0, local_clt},
      {10, "front propagation law", 300.0, front},
      {11, "stabilization series and evolution", 300.0, stabilization},
      {12, "cli determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && seconds > c.limit_seconds) {
      o.pass = false;
      o.detail << " [over the " << c.limit_seconds << " s budget]";
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
