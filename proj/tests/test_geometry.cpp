#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rsn/geometry.hpp"

using namespace rsn;

namespace {

DeploymentConfig config(std::size_t n, double side, std::uint64_t seed) {
  return {n, Region::cube(side), seed, 0.0, 0.0};
}

}  // namespace

TEST(SampleUniform, SinglePointInsideUnitCube) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
    const auto pts = sample_uniform(config(1, 1.0, seed));
    ASSERT_EQ(pts.size(), 1u);
    for (std::size_t a = 0; a < 3; ++a) {
      EXPECT_GE(pts[0][a], 0.0);
      EXPECT_LE(pts[0][a], 1.0);
    }
  }
}

TEST(SampleUniform, SameSeedSamePoints) {
  const auto a = sample_uniform(config(500, 3.0, 7));
  const auto b = sample_uniform(config(500, 3.0, 7));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(a[i][k], b[i][k]);
  const auto c = sample_uniform(config(500, 3.0, 8));
  EXPECT_NE(a[0].x, c[0].x);
}

TEST(SampleUniform, PerAxisMeanNearCentre) {
  // sd of the mean is 10/sqrt(12e4) ~ 0.029, so [4.9, 5.1] is a ~3.5 sigma window.
  const auto pts = sample_uniform(config(10000, 10.0, 2024));
  std::array<double, 3> sum{};
  for (const auto& p : pts)
    for (std::size_t a = 0; a < 3; ++a) sum[a] += p[a];
  for (std::size_t a = 0; a < 3; ++a) {
    const double mean = sum[a] / 1e4;
    EXPECT_GE(mean, 4.9);
    EXPECT_LE(mean, 5.1);
  }
}

TEST(SampleUniform, OctantChiSquare) {
  constexpr std::size_t n = 100000;
  constexpr double kChi2Crit7dof001 = 18.475;
  const auto pts = sample_uniform(config(n, 2.0, 31337));
  std::array<double, 8> cells{};
  for (const auto& p : pts) cells[(p.x >= 1.0) + 2 * (p.y >= 1.0) + 4 * (p.z >= 1.0)] += 1.0;
  const double expected = n / 8.0;
  double chi2 = 0.0;
  for (double c : cells) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, kChi2Crit7dof001);
}

TEST(SampleUniform, BoxRegionRespectsSides) {
  const DeploymentConfig cfg{2000, Region::box(1.0, 2.0, 5.0), 3, 0.0, 0.0};
  for (const auto& p : sample_uniform(cfg)) EXPECT_TRUE(cfg.region.contains(p));
}

TEST(Config, Validation) {
  EXPECT_THROW(Region::cube(0.0), std::invalid_argument);
  EXPECT_THROW(Region::box(1.0, -1.0, 1.0), std::invalid_argument);
  DeploymentConfig bad{0, Region::cube(1.0), 1, 0.0, 0.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  DeploymentConfig ok{8, Region::cube(2.0), 1, 0.0, 0.0};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_DOUBLE_EQ(ok.density(), 1.0);
  EXPECT_NEAR(Region::cube_for_density(1000, 2.0).volume(), 500.0, 1e-9);
}

TEST(Distance, Examples) {
  const auto hard = Region::cube(10.0);
  EXPECT_DOUBLE_EQ(distance({0, 0, 0}, {1, 0, 0}, hard), 1.0);
  EXPECT_DOUBLE_EQ(distance({0, 0, 0}, {3, 4, 0}, hard), 5.0);
  const auto torus = Region::cube(10.0, BoundaryMode::toroidal);
  EXPECT_NEAR(distance({0.1, 0, 0}, {9.9, 0, 0}, torus), 0.2, 1e-12);
  EXPECT_NEAR(distance({0.1, 0, 0}, {9.9, 0, 0}, hard), 9.8, 1e-12);
}

TEST(Distance, ToroidalNeverExceedsHard) {
  const auto hard = Region::box(3.0, 5.0, 7.0);
  const auto torus = hard.with_boundary(BoundaryMode::toroidal);
  const auto pts = sample_uniform({400, hard, 99, 0.0, 0.0});
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double t = distance(pts[i], pts[i + 1], torus);
    EXPECT_LE(t, distance(pts[i], pts[i + 1], hard) + 1e-15);
    EXPECT_LE(t, 0.5 * hard.diagonal() + 1e-12);
  }
}

TEST(LensVolume, Examples) {
  EXPECT_NEAR(lens_volume(1.0), 1.308996939, 1e-9);
  EXPECT_DOUBLE_EQ(lens_volume(2.0), 8.0 * lens_volume(1.0));
  EXPECT_NEAR(lens_volume(1.0), oracle::lens_volume_quadrature(1.0), 1e-6);
  EXPECT_THROW(lens_volume(0.0), std::invalid_argument);
  EXPECT_THROW(lens_volume(-1.0), std::invalid_argument);
}

TEST(LensVolume, CubicScaling) {
  for (double r : {0.01, 0.3, 1.7, 12.0, 1e3}) EXPECT_NEAR(lens_volume(r) / (r * r * r), 5.0 * std::numbers::pi / 12.0, 1e-14);
}

TEST(Rng, BelowIsInRangeAndStreamsDiffer) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(7), 7u);
  EXPECT_NE(derive_seed(5, 0), derive_seed(5, 1));
  EXPECT_EQ(derive_seed(5, 1), derive_seed(5, 1));
}
