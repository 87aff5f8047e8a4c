#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "nonlocal/asymptotics.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/eigen.hpp"
#include "nonlocal/greens.hpp"
#include "nonlocal/spectral.hpp"
#include "output.hpp"

namespace nonlocal::cli {

namespace {

using nlohmann::json;

std::string provenance(const RunContext& ctx, const std::string& command) {
  return provenance_line(command, ctx.config.hash);
}

std::filesystem::path out(const RunContext& ctx, const std::string& file) { return ctx.out_dir / file; }

json interval_json(const Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

EigenOptions eigen_options(const ExperimentConfig& c) {
  EigenOptions o;
  o.root_tol = c.tolerances.root;
  o.refinement_tol = c.tolerances.refinement;
  o.max_nodes = c.eigen.max_nodes;
  o.ground_state = false;
  return o;
}

// lambda0 for the front command: inline value, prior eigen output, or a fresh solve.
double front_lambda0(const RunContext& ctx, const JumpKernel& kernel, const Potential& v) {
  const auto& f = ctx.config.front;
  if (f.lambda0) return *f.lambda0;
  if (f.eigen_result) {
    std::ifstream in(*f.eigen_result);
    if (!in) fail(ErrorKind::kDependencyMissing, "cannot open eigen result " + *f.eigen_result);
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("points"))
      fail(ErrorKind::kDependencyMissing, *f.eigen_result + " is not an eigen result");
    for (const auto& p : doc.at("points")) {
      if (std::abs(p.at("R").get<double>() - f.R) > 1e-12) continue;
      if (p.at("status").get<std::string>() != "found")
        fail(ErrorKind::kSolverFailure, "eigen result has no principal eigenvalue at R = " + format_double(f.R));
      return p.at("lambda0").get<double>();
    }
    fail(ErrorKind::kDependencyMissing, *f.eigen_result + " has no entry for R = " + format_double(f.R));
  }
  if (!f.inline_eigen)
    fail(ErrorKind::kDependencyMissing,
         "front needs lambda0: set front.lambda0, front.eigen_result or front.inline_eigen");
  ctx.log("solving for lambda0 at R = " + format_double(f.R));
  const auto pe = principal_eigenvalue(kernel, v, f.R, eigen_options(ctx.config));
  if (pe.status != EigenStatus::kFound)
    fail(ErrorKind::kSolverFailure, "no principal eigenvalue at R = " + format_double(f.R) + " (" +
                                        to_string(pe.status) + ")");
  return pe.lambda0;
}

// Doubles the term count until the truncation bound fits, up to n_cap.
SeriesOracleValue series_value(const JumpKernel& kernel, double lambda, double x, int n_cap, double tol) {
  SeriesOracleOptions o;
  o.tolerance = tol;
  o.relative = false;
  for (int n = std::min(64, n_cap);; n = std::min(2 * n, n_cap)) {
    try {
      return resolvent_series_oracle(kernel, lambda, x, n, o);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInsufficientTerms || n == n_cap) throw;
    }
  }
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kDependencyMissing:
      return kExitConfig;
    case ErrorKind::kRecurrentResolvent:
    case ErrorKind::kContractionViolated:
    case ErrorKind::kHullViolation:
    case ErrorKind::kTiltOutOfRange:
      return kExitPrecondition;
    default:
      return kExitTolerance;
  }
}

void RunContext::log(const std::string& message) const {
  if (verbose) std::cerr << "[nonlocal_spectra] " << message << '\n';
}

int cmd_spectrum(const RunContext& ctx) {
  const auto& c = ctx.config;
  const JumpKernel kernel = c.kernel.build();
  const double chi = kernel.intensity();
  const double K = c.grid.K.value_or(default_symbol_halfwidth(kernel));
  ctx.log("symbol grid K = " + format_double(K) + ", n = " + std::to_string(c.grid.n_points));
  const SymbolGrid symbol = kernel_symbol(kernel, K, c.grid.n_points);
  PlateauOptions po;
  po.flatness_tol = c.spectrum.flatness_tol;
  po.min_width = c.spectrum.min_width;
  const SpectrumReport report = analyze_spectrum(symbol, chi, po);
  const Potential v = c.potential.build().with_scale(c.potential.R);
  const EssentialSpectrum ess = essential_spectrum(report.interval, v, chi);

  CsvWriter csv(out(ctx, "symbol.csv"), provenance(ctx, "spectrum"), {"k", "symbol"});
  for (std::size_t j = 0; j < symbol.k.size(); ++j) {
    csv << symbol.k[j] << symbol.values[j];
    csv.end_row();
  }

  json plateaus = json::array();
  for (const auto& p : report.plateaus)
    plateaus.push_back({{"lambda", p.lambda},
                        {"value", p.value},
                        {"k_lo", p.k_lo},
                        {"k_hi", p.k_hi},
                        {"measure", p.measure},
                        {"reaches_boundary", p.reaches_boundary}});
  json ac = json::array();
  for (const auto& i : report.ac) ac.push_back(interval_json(i));
  json segments = json::array();
  for (const auto& s : ess.segments) segments.push_back(interval_json(s));
  json body = {{"kernel", kernel.name()},
               {"chi", chi},
               {"symbol_grid", {{"K", K}, {"n_points", symbol.k.size()}, {"closed_form", symbol.from_closed_form}}},
               {"spectrum_of_L",
                {{"a", report.interval.a},
                 {"interval", interval_json(report.interval.interval())},
                 {"symbol_min", report.interval.symbol_min},
                 {"clamped", report.interval.clamped},
                 {"warning", report.interval.warning}}},
               {"plateaus", plateaus},
               {"ac_intervals", ac},
               {"essential_spectrum", {{"segments", segments}, {"caveat", ess.caveat}}},
               {"caveats", report.caveats}};
  write_json(out(ctx, "spectrum.json"), body, "spectrum", c.hash);
  return kExitOk;
}

int cmd_transience(const RunContext& ctx) {
  const auto& c = ctx.config;
  const JumpKernel kernel = c.kernel.build();
  const auto verdict = transience_test(kernel, c.transience.levels);
  CsvWriter csv(out(ctx, "transience.csv"), provenance(ctx, "transience"),
                {"level", "partial_integral", "band_integral", "local_exponent"});
  for (std::size_t j = 0; j < verdict.partial_integrals.size(); ++j) {
    csv << static_cast<double>(j) << verdict.partial_integrals[j]
        << (j < verdict.band_integrals.size() ? verdict.band_integrals[j] : std::nan(""))
        << (j < verdict.local_exponents.size() ? verdict.local_exponents[j] : std::nan(""));
    csv.end_row();
  }
  write_json(out(ctx, "transience.json"),
             {{"kernel", kernel.name()},
              {"verdict", to_string(verdict.verdict)},
              {"outer_integral", verdict.outer_integral},
              {"tail_estimate", verdict.tail_estimate},
              {"note", verdict.note}},
             "transience", c.hash);
  return verdict.verdict == Transience::kInconclusive ? kExitTolerance : kExitOk;
}

int cmd_eigen(const RunContext& ctx) {
  const auto& c = ctx.config;
  const JumpKernel kernel = c.kernel.build();
  const Potential v = c.potential.build();
  const auto scan = threshold_scan(kernel, v, c.eigen.R, eigen_options(c), ctx.jobs);
  CsvWriter csv(out(ctx, "eigen.csv"), provenance(ctx, "eigen"), {"R", "status", "lambda0"});
  json points = json::array();
  bool clean = true;
  const double cap = (1.0 - v.delta) * kernel.intensity();
  for (const auto& p : scan) {
    csv << p.R << to_string(p.status) << p.lambda0;
    csv.end_row();
    points.push_back({{"R", p.R}, {"status", to_string(p.status)}, {"lambda0", p.lambda0}, {"error", p.error}});
    if (!p.error.empty() || p.status == EigenStatus::kInconclusive || p.lambda0 > cap) clean = false;
  }
  write_json(out(ctx, "eigen.json"),
             {{"kernel", kernel.name()}, {"chi", kernel.intensity()}, {"lambda0_cap", cap}, {"points", points}},
             "eigen", c.hash);
  return clean ? kExitOk : kExitTolerance;
}

int cmd_asym(const RunContext& ctx) {
  const auto& c = ctx.config;
  const JumpKernel kernel = c.kernel.build();
  const LargeDeviationProfile profile(kernel);

  CsvWriter leg(out(ctx, "legendre.csv"), provenance(ctx, "asym"), {"p", "H_star", "nu_star"});
  json skipped = json::array();
  for (double p : c.asym.p) {
    if (std::abs(p) >= profile.s_plus()) {
      skipped.push_back(p);
      continue;
    }
    const auto lv = profile.legendre(p);
    leg << p << lv.H_star << lv.nu_star;
    leg.end_row();
  }

  CsvWriter ph(out(ctx, "phase.csv"), provenance(ctx, "asym"),
               {"lambda", "tau0", "phi", "s_tautau", "nu_star", "B", "prefactor"});
  CsvWriter gr(out(ctx, "green_asymptotic.csv"), provenance(ctx, "asym"), {"lambda", "r", "G_asymptotic"});
  json phases = json::array();
  for (double lambda : c.asym.lambda) {
    const auto fd = phase_min(profile, c.asym.theta, lambda);
    ph << lambda << fd.tau0 << fd.phi << fd.s_tautau << fd.nu_star << fd.B << fd.prefactor;
    ph.end_row();
    for (double r : c.asym.r) {
      gr << lambda << r << green_asymptotic(fd, r);
      gr.end_row();
    }
    phases.push_back({{"lambda", lambda}, {"tau0", fd.tau0}, {"phi", fd.phi}, {"prefactor", fd.prefactor}});
  }
  write_json(out(ctx, "asym.json"),
             {{"kernel", kernel.name()},
              {"theta", c.asym.theta},
              {"s_plus", profile.s_plus()},
              {"skipped_p_outside_hull", skipped},
              {"phases", phases}},
             "asym", c.hash);
  return kExitOk;
}

int cmd_front(const RunContext& ctx) {
  const auto& c = ctx.config;
  const auto& f = c.front;
  const JumpKernel kernel = c.kernel.build();
  const Potential v = c.potential.build();
  const double lambda0 = front_lambda0(ctx, kernel, v);
  const double chi = kernel.intensity();
  const LargeDeviationProfile profile(kernel);
  const auto fd = phase_min(profile, 1.0, lambda0 / chi);
  ctx.log("lambda0 = " + format_double(lambda0) + ", phi = " + format_double(fd.phi));

  const SpatialGrid grid(f.n_points, f.h);
  Evolver ev(kernel, v.with_scale(f.R), grid, f.dt, f.initial.sample(grid), f.initial.far_field());
  FrontTrace trace;
  trace.threshold = f.threshold;
  trace.directions = {1.0, -1.0};
  trace.radii.resize(2);
  std::vector<double> probe_times = f.probe_times;
  std::sort(probe_times.begin(), probe_times.end());
  std::vector<EvolutionState> probes;
  std::size_t next_probe = 0;

  CsvWriter csv(out(ctx, "front_trace.csv"), provenance(ctx, "front"),
                {"t", "u_max", "radius_plus", "radius_minus", "crossings_plus", "crossings_minus"});
  const auto steps = static_cast<long>(std::floor(f.T / f.snapshot_interval + 1e-9));
  for (long i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * f.snapshot_interval;
    while (next_probe < probe_times.size() && probe_times[next_probe] < t - 0.5 * f.dt) {
      ev.advance_to(probe_times[next_probe++]);
      probes.push_back(ev.state());
    }
    ev.advance_to(t);
    const auto& s = ev.state();
    if (next_probe < probe_times.size() && std::abs(probe_times[next_probe] - t) <= 0.5 * f.dt) {
      probes.push_back(s);
      ++next_probe;
    }
    const double umax = *std::max_element(s.u.begin(), s.u.end());
    const auto fr = front_extract(s, trace.directions, f.threshold);
    trace.times.push_back(s.t);
    trace.u_max.push_back(umax);
    for (std::size_t d = 0; d < 2; ++d) trace.radii[d].push_back(fr[d].radius.value_or(std::nan("")));
    csv << s.t << umax << trace.radii[0].back() << trace.radii[1].back()
        << static_cast<double>(fr[0].crossings) << static_cast<double>(fr[1].crossings);
    csv.end_row();
  }

  bool ok = true;
  json fits = json::array();
  for (std::size_t d = 0; d < 2; ++d) {
    const auto fit = front_law_fit(trace, lambda0, fd.phi, d);
    ok = ok && fit.slope_relative_error <= c.tolerances.front_slope;
    fits.push_back({{"direction", trace.directions[d]},
                    {"slope", fit.slope},
                    {"slope_relative_error", fit.slope_relative_error},
                    {"intercept", fit.intercept},
                    {"speed", fit.speed},
                    {"band", fit.band},
                    {"trend", fit.trend},
                    {"window_start", fit.window_start},
                    {"points", fit.points}});
  }
  json body = {{"kernel", kernel.name()},
               {"R", f.R},
               {"lambda0", lambda0},
               {"phi", fd.phi},
               {"predicted_speed", lambda0 / fd.phi},
               {"fits", fits}};
  if (probes.size() >= 2) {
    const auto gp = growth_probe(probes, lambda0, fd.phi, f.probe_gamma);
    ok = ok && gp.inner_rate > 0.0 && gp.outer_rate < 0.0;
    body["growth_probe"] = {{"gamma", f.probe_gamma}, {"inner_rate", gp.inner_rate}, {"outer_rate", gp.outer_rate}};
  }
  write_json(out(ctx, "front_fit.json"), body, "front", c.hash);
  return ok ? kExitOk : kExitTolerance;
}

int cmd_stabilize(const RunContext& ctx) {
  const auto& c = ctx.config;
  const JumpKernel kernel = c.kernel.build();
  const Potential v = c.potential.build().with_scale(c.potential.R);
  auto result = stabilize(kernel, v, c.stabilize.series);
  ctx.log("norm bound " + format_double(result.norm_bound) + ", " + std::to_string(result.neumann_terms) + " terms");

  bool ok = true;
  CsvWriter terms(out(ctx, "neumann_terms.csv"), provenance(ctx, "stabilize"), {"n", "increment", "ratio"});
  for (std::size_t n = 0; n < result.increments.size(); ++n) {
    const double ratio = n == 0 ? std::nan("") : result.ratios[n - 1];
    if (n > 0 && ratio > result.norm_bound) ok = false;
    terms << static_cast<double>(n + 1) << result.increments[n] << ratio;
    terms.end_row();
  }
  CsvWriter u(out(ctx, "u_infinity.csv"), provenance(ctx, "stabilize"), {"x", "u_infinity"});
  for (std::size_t i = 0; i < result.x.size(); ++i) {
    u << result.x[i] << result.u_infinity[i];
    u.end_row();
  }
  json body = {{"kernel", kernel.name()},
               {"norm_bound", result.norm_bound},
               {"neumann_terms", result.neumann_terms},
               {"monotone_series", result.monotone}};
  if (c.stabilize.evolution_check) {
    const auto gap = stabilization_gap(kernel, v, result, c.stabilize.evolution);
    ok = ok && gap.monotone && gap.gap <= c.tolerances.stabilization_gap;
    body["evolution"] = {{"T", gap.T}, {"gap", gap.gap}, {"last_increment", gap.last_increment}, {"monotone", gap.monotone}};
  }
  write_json(out(ctx, "stabilize.json"), body, "stabilize", c.hash);
  return ok ? kExitOk : kExitTolerance;
}

int cmd_oracle(const RunContext& ctx) {
  const auto& c = ctx.config;
  const JumpKernel kernel = c.kernel.build();
  bool ok = true;
  json body = {{"kernel", kernel.name()}};

  const bool light = is_ultra_light(kernel.tail()) || std::holds_alternative<Light>(kernel.tail());
  if (light) {
    CsvWriter csv(out(ctx, "clt.csv"), provenance(ctx, "oracle"), {"n", "y", "oracle", "formula", "rel_error"});
    json clt = json::array();
    for (int n : c.oracle.clt_n) {
      std::vector<double> ys;
      for (int i = 0; i < c.oracle.clt_points; ++i)
        ys.push_back(n * (-1.0 + 2.0 * i / (c.oracle.clt_points - 1)));
      const auto rep = local_clt_check(kernel, n, ys);
      for (const auto& p : rep.points) {
        csv << static_cast<double>(n) << p.y << p.oracle << p.formula << p.rel_error;
        csv.end_row();
      }
      clt.push_back({{"n", n}, {"max_rel_error", rep.max_rel_error}});
    }
    if (!c.oracle.clt_n.empty()) {
      const double last = clt.back().at("max_rel_error").get<double>();
      ok = ok && last <= c.tolerances.clt;
    }
    body["local_clt"] = clt;
  } else {
    body["local_clt"] = "skipped: needs an exponential moment";
  }

  if (!light && !kernel.stable_index()) {
    body["resolvent"] = "skipped: the series route needs light or self-similar tails";
    write_json(out(ctx, "oracle.json"), body, "oracle", c.hash);
    return ok ? kExitOk : kExitTolerance;
  }

  CsvWriter csv(out(ctx, "resolvent_oracle.csv"), provenance(ctx, "oracle"),
                {"lambda", "x", "table", "series", "truncation_bound", "terms", "abs_error"});
  double worst = 0.0;
  double x_max = 0.0;
  for (double x : c.oracle.resolvent_x) x_max = std::max(x_max, std::abs(x));
  const double h = 0.05 * kernel.scale();
  for (double lambda : c.oracle.resolvent_lambda) {
    const ResolventTable table(kernel, lambda, h, static_cast<std::size_t>(std::ceil(x_max / h)) + 16);
    for (double x : c.oracle.resolvent_x) {
      const auto s = series_value(kernel, lambda, x, c.oracle.n_max, 1e-2 * c.tolerances.oracle);
      const double t = table(x);
      const double err = std::abs(t - s.value);
      worst = std::max(worst, err);
      csv << lambda << x << t << s.value << s.truncation_bound << static_cast<double>(s.terms) << err;
      csv.end_row();
    }
  }
  ok = ok && worst <= c.tolerances.oracle;
  body["resolvent"] = {{"sup_error", worst}, {"tolerance", c.tolerances.oracle}};
  write_json(out(ctx, "oracle.json"), body, "oracle", c.hash);
  return ok ? kExitOk : kExitTolerance;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "transience", "eigen", "asym",
                                              "front",    "stabilize",  "oracle"};
  return names;
}

int run_command(const std::string& name, const RunContext& ctx) {
  static const std::map<std::string, int (*)(const RunContext&)> table{
      {"spectrum", cmd_spectrum}, {"transience", cmd_transience}, {"eigen", cmd_eigen},
      {"asym", cmd_asym},         {"front", cmd_front},           {"stabilize", cmd_stabilize},
      {"oracle", cmd_oracle}};
  const auto it = table.find(name);
  if (it == table.end()) {
    std::cerr << "unknown command '" << name << "'\n";
    return kExitConfig;
  }
  try {
    std::filesystem::create_directories(ctx.out_dir);
    const int code = it->second(ctx);
    if (code == kExitTolerance) std::cerr << name << ": tolerance breached, see outputs\n";
    return code;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return kExitTolerance;
  }
}

}  // namespace nonlocal::cli
