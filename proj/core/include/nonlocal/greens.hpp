#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nonlocal/grid.hpp"
#include "nonlocal/kernels.hpp"

namespace nonlocal {

// Symbol at the FFT modes k_m = 2 pi m / (n h), m = 0..n/2: closed form when
// available, otherwise the DFT of the sampled density.
std::vector<double> symbol_on_modes(const JumpKernel& kernel, const SpatialGrid& grid);
// Same for 1 - a^ (cancellation-free when the kernel provides it).
std::vector<double> one_minus_symbol_on_modes(const JumpKernel& kernel, const SpatialGrid& grid);

struct ConvolutionOptions {
  std::size_t padding = 2;
  double mass_tolerance = 1e-8;
};

struct ConvolutionPowers {
  SpatialGrid grid;
  std::vector<std::vector<double>> table;  // table[n-1][j] = a_n(x_j)
  std::vector<double> mass_defects;        // |h sum_j a_n(x_j) - 1|

  const std::vector<double>& power(int n) const { return table.at(static_cast<std::size_t>(n - 1)); }
  int n_max() const { return static_cast<int>(table.size()); }
};

ConvolutionPowers conv_powers(const JumpKernel& kernel, int n_max, const SpatialGrid& grid,
                              const ConvolutionOptions& options = {});

struct TransitionDensity {
  double t = 0.0;
  double atom_weight = 0.0;  // e^{-t}, carried by the origin
  SpatialGrid grid;
  std::vector<double> regular;
  double total_mass = 0.0;
};

TransitionDensity transition_density(const JumpKernel& kernel, double t, const SpatialGrid& grid,
                                     std::size_t padding = 2);

struct ResolventOptions {
  double target_error = 1e-11;  // absolute error target of the k-quadrature
  double symbol_tolerance = 1e-17;
};

// T_lambda(j h), j = 0..count-1, by direct cosine quadrature of
// a^/((1+lambda)(1+lambda-a^)).  Graded dyadic bands resolve k -> 0.
class ResolventTable {
 public:
  ResolventTable(const JumpKernel& kernel, double lambda, double h, std::size_t count,
                 const ResolventOptions& options = {});

  double lambda() const { return lambda_; }
  double spacing() const { return h_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double quadrature_error() const { return error_; }
  std::size_t k_nodes() const { return k_nodes_; }

  double at(long j) const { return values_.at(static_cast<std::size_t>(j < 0 ? -j : j)); }
  // Eight-point Lagrange interpolation in |x|.
  double operator()(double x) const;

 private:
  double lambda_;
  double h_;
  std::vector<double> values_;
  double error_ = 0.0;
  std::size_t k_nodes_ = 0;
};

struct ResolventKernel {
  double lambda = 0.0;
  double atom_weight = 0.0;  // 1 / (1 + lambda)
  SpatialGrid grid;
  std::vector<double> t_values;
  std::string method;
  std::size_t nonpositive_below_noise = 0;

  // atom + h sum_j T(x_j); equals 1/lambda for lambda > 0.
  double total_mass() const;
};

struct ResolventKernelOptions {
  std::size_t padding = 4;
  bool force_quadrature = false;
  ResolventOptions quadrature;
};

ResolventKernel resolvent_kernel(const JumpKernel& kernel, double lambda, const SpatialGrid& grid,
                                 const ResolventKernelOptions& options = {});

// Tilted sampling: a_n(x) = e^{n H(nu) - nu x} (a_nu)^{*n}(x), where a_nu is
// the exponentially tilted density.  Keeps relative accuracy far in the tail.
double log_conv_power(const JumpKernel& kernel, int n, double x);
// log of the regular part of p(t, x) via the tilted compound Poisson law.
double log_transition_regular(const JumpKernel& kernel, double t, double x);

struct SeriesOracleOptions {
  double tolerance = 1e-10;
  bool relative = true;  // truncation bound compared with tolerance * value
};

struct SeriesOracleValue {
  double value = 0.0;
  double truncation_bound = 0.0;
  int terms = 0;
  std::string route;
};

// sum_{n=1}^{n_max} a_n(x) / (1+lambda)^{n+1}
SeriesOracleValue resolvent_series_oracle(const JumpKernel& kernel, double lambda, double x, int n_max,
                                          const SeriesOracleOptions& options = {});

enum class Transience { kTransient, kRecurrent, kInconclusive };
std::string to_string(Transience verdict);

struct TransienceOptions {
  double split_radius = 1.0;
  int agree_levels = 3;
  double tolerance = 1e-6;         // relative Cauchy-tail bound for convergence
  double recurrent_exponent = 0.995;  // local exponent at or above: divergence
};

struct TransienceVerdict {
  Transience verdict = Transience::kInconclusive;
  std::vector<double> partial_integrals;  // int over |k| >= eps_j, both signs of k
  std::vector<double> band_integrals;
  std::vector<double> local_exponents;
  double outer_integral = 0.0;
  double tail_estimate = 0.0;
  std::string note;
};

TransienceVerdict transience_test(const JumpKernel& kernel, int refinement_levels = 48,
                                  const TransienceOptions& options = {});

}  // namespace nonlocal
