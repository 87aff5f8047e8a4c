#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nonlocal/kernels.hpp"

namespace nonlocal::oracle {

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  double log_uniform(double a, double b);

 private:
  std::mt19937_64 rng_;
};

// 3/4 (1 - y^2) on [-1, 1], symbol 3 (sin k - k cos k) / k^3.
JumpKernel make_epanechnikov();

// Density of N(0, n sigma^2).
double gaussian_power(int n, double sigma, double x);

// sum_n e^{-t} t^n / n! N(0, n)(x), n >= 1, for the unit Gaussian kernel.
double gaussian_transition_regular(double t, double x);

// sum_n N(0, n)(x) (1+lambda)^{-(n+1)} summed in log space until the terms
// stop mattering; unit Gaussian kernel.
double gaussian_resolvent_series(double lambda, double x);

struct DenseEigen {
  double top = 0.0;
  std::vector<double> x;
  std::vector<double> vector;
};

// Largest eigenvalue of chi (A - I) + v on a truncated uniform grid, where
// A_ij = a(x_i - x_j) h.  Mass leaving the box is killed.
DenseEigen dense_top_eigenvalue(const JumpKernel& kernel, const Potential& v, double halfwidth, double h);

// Byte-for-byte file comparison.
bool files_identical(const std::string& a, const std::string& b);

}  // namespace nonlocal::oracle
