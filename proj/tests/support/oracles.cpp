#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include <Eigen/Dense>

namespace nonlocal::oracle {

double Gen::log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

JumpKernel make_epanechnikov() {
  KernelSpec s;
  s.name = "epanechnikov";
  s.tail = UltraLight{2.0};
  s.scale = 0.5;
  s.support_halfwidth = 1.0;
  s.density = [](double y) {
    y = std::abs(y);
    return y < 1.0 ? 0.75 * (1.0 - y * y) : 0.0;
  };
  s.symbol = [](double k) {
    k = std::abs(k);
    if (k < 1e-3) {
      const double k2 = k * k;
      return 1.0 - k2 / 10.0 + k2 * k2 / 280.0;
    }
    return 3.0 * (std::sin(k) - k * std::cos(k)) / (k * k * k);
  };
  return make_custom(s);
}

double gaussian_power(int n, double sigma, double x) {
  const double var = n * sigma * sigma;
  return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

namespace {

// log of N(0, n)(x).
double log_gaussian_power(int n, double x) {
  return -0.5 * x * x / n - 0.5 * std::log(2.0 * std::numbers::pi * n);
}

double log_sum(const std::vector<double>& logs) {
  double m = -INFINITY;
  for (double l : logs) m = std::max(m, l);
  double s = 0.0;
  for (double l : logs) s += std::exp(l - m);
  return m + std::log(s);
}

}  // namespace

double gaussian_transition_regular(double t, double x) {
  std::vector<double> logs;
  for (int n = 1; n < 4000; ++n) {
    const double l = -t + n * std::log(t) - std::lgamma(n + 1.0) + log_gaussian_power(n, x);
    logs.push_back(l);
    if (n > t + 10.0 && l < logs.front() - 80.0 && l < log_sum(logs) - 60.0) break;
  }
  return std::exp(log_sum(logs));
}

double gaussian_resolvent_series(double lambda, double x) {
  const double lq = -std::log1p(lambda);
  std::vector<double> logs;
  double best = -INFINITY;
  for (int n = 1; n < 1000000; ++n) {
    const double l = (n + 1) * lq + log_gaussian_power(n, x);
    logs.push_back(l);
    best = std::max(best, l);
    // Terms decay geometrically once n exceeds the peak; stop 45 e-folds down.
    if (l < best - 45.0 && n > 4 * std::abs(x)) break;
  }
  return std::exp(log_sum(logs));
}

DenseEigen dense_top_eigenvalue(const JumpKernel& kernel, const Potential& v, double halfwidth, double h) {
  const auto n = static_cast<int>(std::llround(2.0 * halfwidth / h)) + 1;
  const double chi = kernel.intensity();
  Eigen::MatrixXd M(n, n);
  DenseEigen out;
  for (int i = 0; i < n; ++i) out.x.push_back(-halfwidth + i * h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = chi * kernel.density(out.x[i] - out.x[j]) * h;
  for (int i = 0; i < n; ++i) M(i, i) += v(out.x[i]) - chi;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  out.top = es.eigenvalues()(n - 1);
  const Eigen::VectorXd vec = es.eigenvectors().col(n - 1);
  out.vector.assign(vec.data(), vec.data() + n);
  return out;
}

bool files_identical(const std::string& a, const std::string& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  return sa == sb;
}

}  // namespace nonlocal::oracle
