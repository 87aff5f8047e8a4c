#pragma once

#include <string>
#include <vector>

#include "nonlocal/grid.hpp"
#include "nonlocal/kernels.hpp"

namespace nonlocal {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// [-a, 0], the spectrum of L.
struct SpectrumInterval {
  double a = 0.0;
  double chi = 1.0;
  double symbol_min = 0.0;
  bool clamped = false;  // minimum found on the edge of the k box
  std::string warning;

  Interval interval() const { return {-a, 0.0}; }
};

SpectrumInterval spectrum_interval(const SymbolGrid& symbol, double chi = 1.0);

struct Plateau {
  double lambda = 0.0;  // chi (value - 1)
  double value = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  double measure = 0.0;  // level-set measure, both signs of k
  bool reaches_boundary = false;
};

struct PlateauOptions {
  double flatness_tol = 1e-4;  // total variation relative to |plateau value|
  double min_width = 0.1;
  double zero_floor = 1e-12;   // values below this count as zero plateaus
};

std::vector<Plateau> plateau_eigenvalues(const SymbolGrid& symbol, double chi = 1.0,
                                         const PlateauOptions& options = {});

// Sub-intervals of k > 0 on which the sampled |d a^/dk| stays above
// grad_floor.  A numerical indication of absolutely continuous spectrum.
std::vector<Interval> ac_intervals(const SymbolGrid& symbol, double grad_floor = 1e-8,
                                   double min_width = 0.1);

struct SpectrumReport {
  SpectrumInterval interval;
  std::vector<Plateau> plateaus;
  std::vector<Interval> ac;
  std::vector<std::string> caveats;
};

SpectrumReport analyze_spectrum(const SymbolGrid& symbol, double chi = 1.0,
                                const PlateauOptions& options = {});

// Segments known to lie in the essential spectrum of H = L + v:
// [-a, 0] and [-chi, sup v - chi], merged when they overlap.
struct EssentialSpectrum {
  std::vector<Interval> segments;
  std::string caveat;
};

EssentialSpectrum essential_spectrum(const SpectrumInterval& interval, const Potential& v,
                                     double chi = 1.0);

// ||(H - lambda0) psi|| / ||psi|| for the Gaussian quasi-mode centered at x0
// with width sqrt(epsilon), lambda0 = v(x0) - 1.  Internal units (chi = 1).
double weyl_residual(const JumpKernel& kernel, const Potential& v, double x0, double epsilon,
                     const SpatialGrid& grid);

}  // namespace nonlocal
