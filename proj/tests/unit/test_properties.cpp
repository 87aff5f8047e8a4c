// Randomized invariants with fixed seeds.
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "nonlocal/asymptotics.hpp"
#include "nonlocal/eigen.hpp"
#include "nonlocal/greens.hpp"
#include "nonlocal/kernels.hpp"
#include "oracles.hpp"

using namespace nonlocal;
using nonlocal::oracle::Gen;

namespace {

JumpKernel random_light_kernel(Gen& gen) {
  if (gen.integer(0, 1) == 0) return make_gaussian(gen.uniform(0.3, 3.0));
  return make_exponential_power(gen.uniform(1.5, 6.0));
}

}  // namespace

TEST(Properties, SymbolIsBoundedAndEven) {
  Gen gen(101);
  for (int i = 0; i < 40; ++i) {
    const auto k = random_light_kernel(gen);
    const double q = gen.log_uniform(1e-3, 30.0);
    const double s = k.symbol(q);
    EXPECT_LE(std::abs(s), 1.0 + 1e-14) << k.name();
    EXPECT_DOUBLE_EQ(s, k.symbol(-q));
    EXPECT_NEAR(k.one_minus_symbol(q), 1.0 - s, 1e-15);
  }
}

TEST(Properties, DensityIsNonnegativeAndEven) {
  Gen gen(102);
  for (int i = 0; i < 200; ++i) {
    JumpKernel k = [&] {
      switch (gen.integer(0, 2)) {
        case 0: return random_light_kernel(gen);
        case 1: return make_stable_like(gen.uniform(0.2, 1.95));
        default: return make_embedded_family(gen.uniform(0.01, 4.0 / 9.0));
      }
    }();
    const double y = gen.uniform(-50.0, 50.0);
    EXPECT_GE(k.density(y), -1e-14) << k.name() << " y=" << y;
    EXPECT_NEAR(k.density(y), k.density(-y), 1e-15);
  }
}

TEST(Properties, ResolventPositiveAndDecreasingInLambda) {
  Gen gen(103);
  const auto k = make_gaussian(1.0);
  for (int i = 0; i < 6; ++i) {
    const double l1 = gen.log_uniform(0.1, 3.0);
    const double l2 = l1 * gen.uniform(1.1, 2.0);
    const ResolventTable t1(k, l1, 0.1, 60), t2(k, l2, 0.1, 60);
    for (long j = 0; j < 60; ++j) {
      EXPECT_GT(t1.at(j), 0.0);
      EXPECT_GT(t1.at(j), t2.at(j)) << "j=" << j;
    }
  }
}

TEST(Properties, LegendreTransformIsConvex) {
  Gen gen(104);
  const LargeDeviationProfile p(make_exponential_power(3.0));
  for (int i = 0; i < 20; ++i) {
    const double a = gen.uniform(0.05, 2.0), b = gen.uniform(0.05, 2.0), w = gen.uniform(0.0, 1.0);
    const double mid = p.legendre(w * a + (1.0 - w) * b).H_star;
    EXPECT_LE(mid, w * p.legendre(a).H_star + (1.0 - w) * p.legendre(b).H_star + 1e-10);
  }
}

TEST(Properties, PhaseIsMinimal) {
  Gen gen(105);
  const LargeDeviationProfile p(make_gaussian(1.0));
  for (int i = 0; i < 10; ++i) {
    const double lambda = gen.log_uniform(0.05, 5.0);
    const auto f = phase_min(p, 1.0, lambda);
    const double tau = f.tau0 * gen.uniform(0.5, 2.0);
    EXPECT_GE(phase(p, 1.0, lambda, tau), f.phi - 1e-12);
  }
}

TEST(Properties, EigenvalueMonotoneInAmplitude) {
  Gen gen(106);
  const auto g = make_gaussian(1.0);
  EigenOptions opt;
  opt.ground_state = false;
  for (int i = 0; i < 3; ++i) {
    const double a1 = gen.uniform(0.1, 0.4);
    const double a2 = a1 + gen.uniform(0.02, 0.1);
    const auto p1 = principal_eigenvalue(g, Potential::make(PotentialProfile::kBump, a1, 1.0, 0.5), 2.0, opt);
    const auto p2 = principal_eigenvalue(g, Potential::make(PotentialProfile::kBump, a2, 1.0, 0.5), 2.0, opt);
    EXPECT_LT(p1.lambda0, p2.lambda0);
    EXPECT_LT(p2.lambda0, a2);
  }
}

TEST(Properties, PerronBoundsByRowSums) {
  Gen gen(107);
  for (int i = 0; i < 10; ++i) {
    const int n = gen.integer(5, 40);
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c <= r; ++c) m(r, c) = m(c, r) = gen.uniform(0.01, 1.0);
    const auto res = perron_eigenvalue(m);
    const Eigen::VectorXd rows = m.rowwise().sum();
    EXPECT_LE(res.mu0, rows.maxCoeff() + 1e-10);
    EXPECT_GE(res.mu0, rows.minCoeff() - 1e-10);
  }
}
