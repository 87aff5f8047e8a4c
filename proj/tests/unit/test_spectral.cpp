#include <gtest/gtest.h>

#include <cmath>

#include "nonlocal/error.hpp"
#include "nonlocal/kernels.hpp"
#include "nonlocal/spectral.hpp"

using namespace nonlocal;

TEST(Spectral, GaussianIntervalHasNoPlateaus) {
  const auto g = make_gaussian(1.0);
  const auto sym = kernel_symbol(g, default_symbol_halfwidth(g), 1 << 12);
  const auto rep = analyze_spectrum(sym, 2.0);
  EXPECT_NEAR(rep.interval.a, 2.0, 1e-9);
  EXPECT_FALSE(rep.interval.clamped);
  EXPECT_TRUE(rep.plateaus.empty());
  ASSERT_FALSE(rep.ac.empty());
  EXPECT_LT(rep.ac.front().lo, 0.2);
}

TEST(Spectral, EmbeddedPlateaus) {
  const auto k = make_embedded_family(0.4);
  const auto sym = kernel_symbol(k, 6.0, 1 << 13);
  const auto plateaus = plateau_eigenvalues(sym, 1.0);
  ASSERT_EQ(plateaus.size(), 2u);
  EXPECT_NEAR(plateaus[0].lambda, -0.6, 1e-9);
  EXPECT_NEAR(plateaus[0].k_lo, 1.0, 0.01);
  EXPECT_NEAR(plateaus[0].k_hi, 2.0, 0.01);
  EXPECT_NEAR(plateaus[0].measure, 2.0, 0.05);
  EXPECT_NEAR(plateaus[1].lambda, -1.0, 1e-12);
  EXPECT_TRUE(plateaus[1].reaches_boundary);
}

TEST(Spectral, PlateausScaleWithIntensity) {
  const auto sym = kernel_symbol(make_embedded_family(0.4), 6.0, 1 << 13);
  const auto plateaus = plateau_eigenvalues(sym, 3.0);
  ASSERT_EQ(plateaus.size(), 2u);
  EXPECT_NEAR(plateaus[0].lambda, 3.0 * (0.4 - 1.0), 1e-9);
  EXPECT_NEAR(plateaus[1].lambda, -3.0, 1e-12);
}

TEST(Spectral, SmallBoxIsRejected) {
  const auto g = make_gaussian(1.0);
  try {
    kernel_symbol(g, 2.0, 1 << 10);
    ADD_FAILURE() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTruncation);
  }
}

TEST(Spectral, EssentialSpectrumSegments) {
  SpectrumInterval iv;
  iv.a = 1.0;
  const auto v = Potential::make(PotentialProfile::kBump, 0.4, 1.0, 0.5);
  const auto ess = essential_spectrum(iv, v, 1.0);
  ASSERT_EQ(ess.segments.size(), 1u);
  EXPECT_DOUBLE_EQ(ess.segments[0].lo, -1.0);
  EXPECT_DOUBLE_EQ(ess.segments[0].hi, 0.0);
  iv.a = 0.3;
  const auto split = essential_spectrum(iv, v, 1.0);
  ASSERT_EQ(split.segments.size(), 2u);
}

TEST(Spectral, WeylResidualShrinksWithWidth) {
  const auto g = make_gaussian(1.0);
  const auto v = Potential::make(PotentialProfile::kBump, 0.4, 1.0, 0.5, 20.0);
  const SpatialGrid grid(1 << 14, 0.01);
  // ||a * psi|| / ||psi|| scales like eps^{1/4}; the potential term is O(sqrt eps).
  double prev = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double r = weyl_residual(g, v, 3.0, eps, grid);
    EXPECT_LT(r, 0.7 * prev) << "eps=" << eps;
    prev = r;
  }
}
