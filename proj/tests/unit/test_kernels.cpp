#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nonlocal/error.hpp"
#include "nonlocal/kernels.hpp"
#include "oracles.hpp"

using namespace nonlocal;
using nonlocal::oracle::Gen;

namespace {

void expect_error(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Kernels, GaussianClosedForms) {
  const auto g = make_gaussian(1.0);
  EXPECT_NEAR(g.density(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(g.symbol(1.0), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(g.one_minus_symbol(1e-6), 0.5e-12, 1e-24);
  EXPECT_DOUBLE_EQ(g.density(2.5), g.density(-2.5));
}

TEST(Kernels, NumericSymbolMatchesClosedForm) {
  for (const auto& k : {make_gaussian(0.7), make_exponential_power(4.0), oracle::make_epanechnikov()})
    for (double q : {0.0, 0.3, 1.0, 2.5, 7.0}) EXPECT_NEAR(k.numeric_symbol(q), k.symbol(q), 1e-12) << k.name();
}

TEST(Kernels, EpanechnikovSymbolNearOrigin) {
  const auto e = oracle::make_epanechnikov();
  EXPECT_NEAR(e.symbol(1e-3 * 0.999), e.numeric_symbol(1e-3 * 0.999), 1e-14);
  EXPECT_NEAR(e.symbol(0.5), 3.0 * (std::sin(0.5) - 0.5 * std::cos(0.5)) / 0.125, 1e-15);
}

TEST(Kernels, EmbeddedDensityIdentity) {
  Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const double h = gen.uniform(0.01, 4.0 / 9.0);
    const auto k = make_embedded_family(h);
    const double x = gen.uniform(-60.0, 60.0);
    const double s = std::pow(std::sin(0.5 * x), 2);
    const double lhs = std::numbers::pi * x * x * k.density(x);
    const double rhs = 2.0 * s * (1.0 + 4.0 * h - 20.0 * h * s + 16.0 * h * s * s);
    EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(rhs))) << "h=" << h << " x=" << x;
  }
}

TEST(Kernels, EmbeddedDensityContinuousAtOrigin) {
  const auto k = make_embedded_family(0.4);
  EXPECT_NEAR(k.density(0.0), k.density(1e-6), 1e-10);
  // pi x^2 a(x) = 2 s q(s) with s ~ x^2 / 4 gives a(0) = q(0) / (2 pi).
  EXPECT_NEAR(k.density(0.0), (1.0 + 4.0 * 0.4) / (2.0 * std::numbers::pi), 1e-14);
}

TEST(Kernels, EmbeddedBoundaryQuadraticVanishes) {
  const double h = 4.0 / 9.0;
  EXPECT_NEAR(embedded_quadratic(h, 0.625), 0.0, 1e-14);
  for (double s = 0.0; s <= 1.0; s += 1e-3) EXPECT_GE(embedded_quadratic(h, s), -1e-14);
}

TEST(Kernels, EmbeddedRejectsLargeH) {
  expect_error(ErrorKind::kPositivityViolation, [] { make_embedded_family(0.45); });
  expect_error(ErrorKind::kInvalidParameter, [] { make_embedded_family(0.0); });
}

TEST(Kernels, EmbeddedSymbolPlateau) {
  const auto k = make_embedded_family(0.4);
  for (double q = 1.05; q <= 1.95; q += 0.05) EXPECT_NEAR(k.symbol(q), 0.4, 1e-12);
  for (double q = 1.05; q <= 1.95; q += 0.15) EXPECT_NEAR(k.numeric_symbol(q), 0.4, 1e-3);
  EXPECT_NEAR(k.symbol(3.5), 0.0, 1e-15);
}

TEST(Kernels, EmbeddedMultiPlateauValues) {
  // Weights are normalized to unit mass; c_m is the tail sum from m on.
  const std::vector<double> h{1.0, 0.01, 2e-4};
  const double total = h[0] + h[1] + h[2];
  const auto k = make_embedded_family_multi(h, 2);
  EXPECT_NEAR(k.symbol(1.5), (h[1] + h[2]) / total, 1e-6);
  EXPECT_NEAR(k.symbol(3.5), h[2] / total, 1e-6);
  EXPECT_NEAR(k.symbol(5.5), 0.0, 1e-12);
  expect_error(ErrorKind::kInvalidParameter, [] { make_embedded_family_multi({1.0, 0.5}, 1); });
}

TEST(Kernels, StableLikeSymbolAndDensity) {
  const auto k = make_stable_like(0.5);
  EXPECT_NEAR(k.symbol(4.0), std::exp(-2.0), 1e-15);
  EXPECT_GT(k.density(100.0), 0.0);
  // Heavy tail: a(y) ~ c |y|^{-1-gamma}, so the ratio at 2y and y tends to 2^{-1.5}.
  EXPECT_NEAR(k.density(2e4) / k.density(1e4), std::pow(2.0, -1.5), 1e-3);
  const auto cauchy = make_stable_like(1.0);
  EXPECT_NEAR(cauchy.density(1.0), 1.0 / (2.0 * std::numbers::pi), 1e-15);
  expect_error(ErrorKind::kInvalidParameter, [] { make_stable_like(2.0); });
}

TEST(Kernels, ValidationPasses) {
  for (const auto& k : {make_gaussian(1.0), make_exponential_power(4.0), oracle::make_epanechnikov()}) {
    const auto rep = validate_kernel(k, {20.0, 1 << 14, true}, 1e-8);
    EXPECT_TRUE(rep.passed) << k.name();
    EXPECT_LT(rep.mass_defect, 1e-8);
    EXPECT_GE(rep.min_density, 0.0);
  }
}

TEST(Kernels, IntensityIsCarried) {
  const auto k = make_gaussian(1.0).with_intensity(2.5);
  EXPECT_DOUBLE_EQ(k.intensity(), 2.5);
  EXPECT_DOUBLE_EQ(k.symbol(1.0), std::exp(-0.5));
}

TEST(Kernels, SineIntegral) {
  EXPECT_NEAR(sine_integral(1.0), 0.946083070367183, 1e-14);
  EXPECT_NEAR(sine_integral(1e6), 0.5 * std::numbers::pi, 1e-6);
  EXPECT_NEAR(sine_integral(-2.0), -sine_integral(2.0), 1e-15);
}

TEST(Kernels, SymbolGridInvariants) {
  Gen gen(5);
  for (int i = 0; i < 12; ++i) {
    JumpKernel k = [&] {
      switch (i % 3) {
        case 0: return make_gaussian(gen.uniform(0.3, 3.0));
        case 1: return make_stable_like(gen.uniform(0.3, 1.9));
        default: return make_embedded_family(gen.uniform(0.05, 4.0 / 9.0));
      }
    }();
    const auto grid = kernel_symbol(k, default_symbol_halfwidth(k), 1 << 12);
    const std::size_t n = grid.k.size();
    const std::size_t c = n / 2;
    EXPECT_NEAR(grid.values[c], 1.0, 1e-12) << k.name();
    double sup = -1.0;
    for (std::size_t j = 1; j < c; ++j) {
      EXPECT_NEAR(grid.values[c + j], grid.values[c - j], 1e-14);
      sup = std::max(sup, grid.values[c + j]);
    }
    EXPECT_LT(sup, 1.0) << k.name();
  }
}

TEST(Potentials, BumpShapeAndAdmissibility) {
  const auto v = Potential::make(PotentialProfile::kBump, 0.4, 1.0, 0.5, 3.0);
  EXPECT_DOUBLE_EQ(v(0.0), 0.4);
  EXPECT_EQ(v(3.0), 0.0);
  EXPECT_GT(v(2.9), 0.0);
  EXPECT_DOUBLE_EQ(v.scaled_radius(), 3.0);
  EXPECT_NO_THROW(check_admissible(v, 1.0));
  expect_error(ErrorKind::kInvalidParameter, [&] { check_admissible(v, 0.5); });
  EXPECT_EQ(potential_profile_from_string(to_string(PotentialProfile::kRaisedCosine)),
            PotentialProfile::kRaisedCosine);
}
