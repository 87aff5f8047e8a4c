#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonlocal/grid.hpp"
#include "nonlocal/kernels.hpp"

namespace nonlocal {

struct InitialCondition {
  enum class Kind { kConstant, kIndicator, kGaussian };
  Kind kind = Kind::kConstant;
  double amplitude = 1.0;
  double width = 1.0;  // half-width of the indicator, standard deviation of the Gaussian

  std::vector<double> sample(const SpatialGrid& grid) const;
  double far_field() const { return kind == Kind::kConstant ? amplitude : 0.0; }
};

struct EvolutionState {
  SpatialGrid grid;
  std::vector<double> u;
  double t = 0.0;
  double dt = 0.0;
  std::string scheme = "strang";
};

struct EvolutionOptions {
  double kill_zone = 0.2;          // outer fraction of the half-width
  double kill_threshold = 1e-6;    // allowed |u - far field| there, relative to max(1, sup |u - far field|)
};

// u_t = chi (a * u - u) + v u on a periodic grid, Strang split:
// e^{dt v/2} e^{dt L} e^{dt v/2}.  Physical units.
class Evolver {
 public:
  Evolver(const JumpKernel& kernel, const Potential& v, const SpatialGrid& grid, double dt,
          std::vector<double> u0, double far_field = 0.0, const EvolutionOptions& options = {});
  ~Evolver();
  Evolver(const Evolver&) = delete;
  Evolver& operator=(const Evolver&) = delete;

  void step();
  void advance_to(double t);
  const EvolutionState& state() const { return state_; }
  // Largest |u - far field| in the kill zone over max(1, sup |u - far field|).
  double kill_zone_excess() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  EvolutionState state_;
  std::vector<double> half_potential_;
  double far_field_;
  EvolutionOptions options_;
  std::size_t steps_ = 0;
};

std::vector<EvolutionState> evolve(const JumpKernel& kernel, const Potential& v, const InitialCondition& u0,
                                   double T, double dt, const SpatialGrid& grid,
                                   const std::vector<double>& snapshot_times,
                                   const EvolutionOptions& options = {});

struct FrontRadius {
  std::optional<double> radius;
  int crossings = 0;  // > 1: outermost returned
};

// direction +1 or -1 in d = 1.
FrontRadius front_extract(const EvolutionState& state, double direction, double threshold = 1.0);
std::vector<FrontRadius> front_extract(const EvolutionState& state, const std::vector<double>& directions,
                                       double threshold = 1.0);

struct FrontTrace {
  double threshold = 1.0;
  std::vector<double> directions;
  std::vector<double> times;
  std::vector<double> u_max;
  std::vector<std::vector<double>> radii;  // radii[d][i]; NaN when absent
};

struct FrontFit {
  double slope = 0.0;  // radius against (lambda0 t + (1-d)/2 ln t) / phi; ideally 1
  double intercept = 0.0;
  double slope_relative_error = 0.0;
  double speed = 0.0;  // d radius / dt over the window
  double band = 0.0;   // spread of residuals
  double trend = 0.0;  // residual drift per unit time over the final half-window
  double window_start = 0.0;
  std::size_t points = 0;
};

FrontFit front_law_fit(const FrontTrace& trace, double lambda0, double phi, std::size_t direction = 0,
                       int d = 1);

// Log-growth rates of u along x = c t with c = (lambda0 -+ gamma) / phi.
struct GrowthProbe {
  double inner_rate = 0.0;  // expected > 0
  double outer_rate = 0.0;  // expected < 0
};

GrowthProbe growth_probe(const std::vector<EvolutionState>& states, double lambda0, double phi, double gamma);

// ||v|| + (1/pi) int_0^inf |a^ v~| / (1 - a^) dk, internal units.
double gzero_v_norm_bound(const JumpKernel& kernel, const Potential& v);

struct StabilizationOptions {
  int max_terms = 2000;
  double tol = 1e-12;
  double h = 1.0 / 16.0;      // lattice spacing
  double window = 32.0;       // u_infinity reported on |x| <= window
};

struct StabilizationResult {
  double norm_bound = 0.0;
  int neumann_terms = 0;
  std::vector<double> increments;  // sup of each term (G0 v)^n 1, n >= 1
  std::vector<double> ratios;
  bool monotone = true;
  std::vector<double> x;
  std::vector<double> u_infinity;
  double evolution_gap = std::numeric_limits<double>::quiet_NaN();
};

StabilizationResult stabilize(const JumpKernel& kernel, const Potential& v,
                              const StabilizationOptions& options = {});

struct EvolutionGapOptions {
  SpatialGrid grid{1u << 16, 0.125};
  double dt = 0.05;
  double check_interval = 1.0;
  double increment_tol = 1e-3;  // sup |u(t + interval) - u(t)|
  double t_max = 400.0;
};

struct EvolutionGap {
  double T = 0.0;
  double gap = 0.0;
  double last_increment = 0.0;
  bool monotone = true;
};

// Evolves from u = 1 until increments drop below tolerance and compares
// with the series limit on the result's window.  Fills result.evolution_gap.
EvolutionGap stabilization_gap(const JumpKernel& kernel, const Potential& v, StabilizationResult& result,
                               const EvolutionGapOptions& options = {});

struct PtBoundReport {
  double epsilon = 0.0;
  double C = 0.0;
  double alpha = 0.0;
  bool holds = true;
  std::vector<std::pair<double, double>> violations;  // (t, x)
  std::size_t samples = 0;
};

// Smallest (C, alpha) with p(t,x) <= C t e^{alpha eps^2 t - eps |x|} on the
// sampled box, minimizing the bound at the middle time.
PtBoundReport pt_bound_check(const JumpKernel& kernel, const std::vector<double>& t_grid,
                             const std::vector<double>& x_grid, double epsilon);

}  // namespace nonlocal
