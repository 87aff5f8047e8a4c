#include <gtest/gtest.h>

#include <cmath>

#include "nonlocal/error.hpp"
#include "nonlocal/greens.hpp"
#include "oracles.hpp"

using namespace nonlocal;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kConfig;
}

}  // namespace

TEST(Greens, SymbolOnModesClosedForm) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(1024, 0.1);
  const auto s = symbol_on_modes(g, grid);
  const auto om = one_minus_symbol_on_modes(g, grid);
  for (std::size_t m = 0; m < s.size(); ++m) {
    const double k = grid.wavenumber(m);
    EXPECT_NEAR(s[m], std::exp(-0.5 * k * k), 1e-15);
    EXPECT_NEAR(om[m], -std::expm1(-0.5 * k * k), 1e-15);
  }
}

TEST(Greens, ConvolutionPowersOfGaussian) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(2048, 0.05);
  const auto p = conv_powers(g, 8, grid);
  ASSERT_EQ(p.n_max(), 8);
  for (int n = 1; n <= 8; ++n) {
    EXPECT_LT(p.mass_defects[n - 1], 1e-10);
    for (std::size_t j = 0; j < grid.n; j += 7) {
      EXPECT_NEAR(p.power(n)[j], oracle::gaussian_power(n, 1.0, grid.x(j)), 1e-12);
      EXPECT_GE(p.power(n)[j], -1e-12);
    }
  }
}

TEST(Greens, ConvolutionPowersNeedRoom) {
  const auto g = make_gaussian(1.0);
  EXPECT_EQ(kind_of([&] { conv_powers(g, 400, SpatialGrid(256, 0.05)); }), ErrorKind::kDomainTooSmall);
}

TEST(Greens, TransitionDensityOfGaussian) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(4096, 0.05);
  for (double t : {0.5, 2.0, 6.0}) {
    const auto p = transition_density(g, t, grid);
    EXPECT_NEAR(p.atom_weight, std::exp(-t), 1e-15);
    EXPECT_NEAR(p.total_mass, 1.0, 1e-10);
    for (double x : {0.5, 1.5, 4.0}) {
      const auto j = grid.center() + static_cast<std::size_t>(std::llround(x / grid.h));
      EXPECT_NEAR(p.regular[j], oracle::gaussian_transition_regular(t, x), 1e-11) << "t=" << t << " x=" << x;
    }
  }
}

TEST(Greens, TiltedPowersKeepRelativeAccuracy) {
  const auto g = make_gaussian(1.0);
  for (int n : {1, 3, 20})
    for (double x : {0.5, 5.0, 20.0, 60.0}) {
      const double exact = -0.5 * x * x / n - 0.5 * std::log(2.0 * M_PI * n);
      EXPECT_NEAR(log_conv_power(g, n, x), exact, 1e-9 * std::max(1.0, std::abs(exact)));
    }
  for (double t : {1.0, 4.0})
    for (double x : {2.0, 15.0}) {
      const double oracle_value = std::log(oracle::gaussian_transition_regular(t, x));
      EXPECT_NEAR(log_transition_regular(g, t, x), oracle_value, 1e-8 * std::abs(oracle_value));
    }
}

TEST(Greens, ResolventMassIdentity) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(8192, 0.05);
  for (double lambda : {0.5, 1.0, 2.0}) {
    const auto r = resolvent_kernel(g, lambda, grid);
    EXPECT_NEAR(r.total_mass(), 1.0 / lambda, 1e-8);
    EXPECT_NEAR(r.atom_weight, 1.0 / (1.0 + lambda), 1e-15);
  }
}

TEST(Greens, ResolventRoutesAgree) {
  const auto g = make_gaussian(1.0);
  const SpatialGrid grid(2048, 0.05);
  ResolventKernelOptions quad;
  quad.force_quadrature = true;
  const auto a = resolvent_kernel(g, 1.0, grid);
  const auto b = resolvent_kernel(g, 1.0, grid, quad);
  EXPECT_NE(a.method, b.method);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.n; ++j) err = std::max(err, std::abs(a.t_values[j] - b.t_values[j]));
  EXPECT_LT(err, 1e-10);
}

TEST(Greens, ResolventTableMatchesGaussianSeries) {
  const auto g = make_gaussian(1.0);
  for (double lambda : {0.25, 1.0, 3.0}) {
    const ResolventTable table(g, lambda, 0.05, 420);
    for (long j : {1L, 10L, 40L, 200L, 400L}) {
      const double x = 0.05 * static_cast<double>(j);
      const double expect = oracle::gaussian_resolvent_series(lambda, x);
      EXPECT_NEAR(table.at(j), expect, 1e-9 * expect + 1e-14) << "lambda=" << lambda << " x=" << x;
    }
    EXPECT_NEAR(table(1.234), oracle::gaussian_resolvent_series(lambda, 1.234), 1e-9);
  }
}

TEST(Greens, SeriesOracleMatchesTable) {
  const auto g = make_gaussian(1.0);
  const ResolventTable table(g, 1.0, 0.05, 200);
  for (double x : {0.5, 3.0, 8.0}) {
    const auto s = resolvent_series_oracle(g, 1.0, x, 80);
    EXPECT_EQ(s.route, "tilted");
    EXPECT_NEAR(s.value, table(x), 1e-10 * s.value);
  }
  const auto stable = make_stable_like(0.5);
  const ResolventTable st(stable, 1.0, 0.05, 100);
  const auto s = resolvent_series_oracle(stable, 1.0, 2.0, 80);
  EXPECT_EQ(s.route, "self-similar");
  EXPECT_NEAR(s.value, st(2.0), 1e-9 * s.value);
}

TEST(Greens, SeriesOracleReportsTruncation) {
  const auto g = make_gaussian(1.0);
  EXPECT_EQ(kind_of([&] { resolvent_series_oracle(g, 0.1, 2.0, 5); }), ErrorKind::kInsufficientTerms);
}

TEST(Greens, ZeroResolventNeedsTransience) {
  EXPECT_EQ(kind_of([] { ResolventTable(make_gaussian(1.0), 0.0, 0.1, 10); }), ErrorKind::kRecurrentResolvent);
  const ResolventTable t0(make_stable_like(0.5), 0.0, 0.1, 50);
  const ResolventTable t1(make_stable_like(0.5), 0.01, 0.1, 50);
  for (long j = 1; j < 50; ++j) {
    EXPECT_GT(t0.at(j), 0.0);
    EXPECT_GT(t0.at(j), t1.at(j));
  }
}

TEST(Greens, TransienceVerdicts) {
  EXPECT_EQ(transience_test(make_gaussian(1.0)).verdict, Transience::kRecurrent);
  EXPECT_EQ(transience_test(make_stable_like(1.0)).verdict, Transience::kRecurrent);
  EXPECT_EQ(transience_test(make_stable_like(1.5)).verdict, Transience::kRecurrent);
  EXPECT_EQ(transience_test(make_stable_like(0.5)).verdict, Transience::kTransient);
  EXPECT_EQ(transience_test(make_stable_like(0.3)).verdict, Transience::kTransient);
  EXPECT_EQ(transience_test(oracle::make_epanechnikov()).verdict, Transience::kRecurrent);
}
