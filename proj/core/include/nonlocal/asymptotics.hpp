#pragma once

#include <limits>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "nonlocal/kernels.hpp"

namespace nonlocal {

// H(nu) = ln int e^{nu y} a(y) dy with its first two derivatives.
struct MgfValue {
  double H = 0.0;
  double grad = 0.0;  // mean of the tilted law
  double hess = 0.0;  // B(nu), variance of the tilted law
};

MgfValue log_mgf(const JumpKernel& kernel, double nu);

// Half-width of the hull of supp a along direction theta (+-1 in d = 1);
// +infinity when the density is positive everywhere.
double hull_support(const JumpKernel& kernel, double theta_hat = 1.0);

struct LegendreValue {
  double H_star = 0.0;
  double nu_star = 0.0;
  int iterations = 0;
};

class LargeDeviationProfile {
 public:
  explicit LargeDeviationProfile(JumpKernel kernel);

  const JumpKernel& kernel() const { return kernel_; }
  MgfValue mgf(double nu) const { return log_mgf(kernel_, nu); }
  double H(double nu) const { return mgf(nu).H; }
  double s_plus() const { return s_plus_; }

  // Cached; safe for concurrent callers.
  LegendreValue legendre(double p) const;

 private:
  JumpKernel kernel_;
  double s_plus_;
  mutable std::shared_mutex mutex_;
  mutable std::map<double, LegendreValue> cache_;
};

LegendreValue legendre(const LargeDeviationProfile& profile, double p);

struct FrontDecayProfile {
  double theta = 1.0;
  double lambda = 0.0;
  double tau0 = 0.0;
  double phi = 0.0;       // S(tau0)
  double s_tautau = 0.0;  // S''(tau0)
  double nu_star = 0.0;   // nu*(1 / tau0)
  double B = 0.0;         // B(nu_star)
  double prefactor = 0.0;
};

// Phase S(tau) = tau [H*(theta / tau) + ln(1 + lambda)].
double phase(const LargeDeviationProfile& profile, double theta, double lambda, double tau);

FrontDecayProfile phase_min(const LargeDeviationProfile& profile, double theta, double lambda);

// f r^{(1-d)/2} e^{-r phi}.
double green_asymptotic(const FrontDecayProfile& profile, double r, int d = 1);

struct CltPoint {
  double y = 0.0;
  double oracle = 0.0;
  double formula = 0.0;
  double rel_error = 0.0;
};

struct CltReport {
  int n = 0;
  double max_rel_error = 0.0;
  std::vector<CltPoint> points;
};

// Compares e^{-n H*(y/n)} / sqrt(2 pi n B(nu*(y/n))) with a_n(y) from the
// tilted-law oracle.
CltReport local_clt_check(const JumpKernel& kernel, int n, const std::vector<double>& y_grid);

struct TailPoint {
  double y = 0.0;
  double log_oracle = 0.0;
  double log_bound = 0.0;
  bool holds = true;
};

struct TailBoundReport {
  int n = 0;
  double alpha = 0.0;
  double c = 0.0;            // ln int_{-Y}^{Y} a(y) e^{|y|^alpha / 2} dy
  double Y = 0.0;            // truncation of the integral
  double edge_integrand = 0.0;  // a(Y) e^{Y^alpha / 2}, size of the neglected tail density
  bool holds = true;
  std::vector<TailPoint> points;  // only |y|/n >= 1
  std::vector<double> violations;
  double oracle_slope = 0.0;  // d log a_n / d|y| fitted over the points
  double bound_slope = 0.0;
};

TailBoundReport tail_bound_check(const JumpKernel& kernel, int n, const std::vector<double>& y_grid);

}  // namespace nonlocal
