#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#define RSN_WITH_BOOST_QUADRATURE
#include "oracles.hpp"
#include "rsn/geometry.hpp"
#include "rsn/specfun.hpp"

using namespace rsn;

namespace {

double residual(double w, double z) { return std::abs(w * std::exp(w) - z) / std::max(1.0, std::abs(z)); }

}  // namespace

TEST(LambertW, FixedPoints) {
  EXPECT_EQ(lambert_w(WBranch::principal, 0.0), 0.0);
  const double m = -1.0 / std::numbers::e;
  EXPECT_NEAR(lambert_w(WBranch::principal, m), -1.0, 1e-7);
  EXPECT_NEAR(lambert_w(WBranch::lower, m), -1.0, 1e-7);
  EXPECT_NEAR(lambert_w(WBranch::principal, std::numbers::e), 1.0, 1e-14);
}

TEST(LambertW, LowerBranchAgainstBisection) {
  const double w = lambert_w(WBranch::lower, -0.1);
  EXPECT_LT(w, -1.0);
  EXPECT_NEAR(w, oracle::lambert_bisect(-0.1, -20.0, -1.0), 1e-12);
  EXPECT_NEAR(w, -3.57715206395729714135851398985, 1e-13);
}

TEST(LambertW, PrincipalBranchAgainstBisection) {
  for (double z : {-0.36, -0.2, -0.01, 0.5, 3.0, 100.0, 1e6}) {
    const double w = lambert_w(WBranch::principal, z);
    EXPECT_NEAR(w, oracle::lambert_bisect(z, -1.0, 20.0), 1e-11 * std::max(1.0, std::abs(w))) << z;
  }
}

TEST(LambertW, RoundTripSweep) {
  Rng rng(11);
  const double m = -1.0 / std::numbers::e;
  for (int i = 0; i < 10000; ++i) {
    // Log-spread magnitudes so the branch point, the origin and the tail are all exercised.
    const double t = rng.uniform();
    const double zl = m * std::pow(10.0, -12.0 * t);
    const double wl = lambert_w(WBranch::lower, zl);
    EXPECT_LE(wl, -1.0);
    EXPECT_LE(residual(wl, zl), 1e-12) << zl;

    const double zp = rng.bernoulli(0.3) ? m * rng.uniform() : std::pow(10.0, 12.0 * rng.uniform() - 4.0);
    const double wp = lambert_w(WBranch::principal, zp);
    EXPECT_GE(wp, -1.0);
    EXPECT_LE(residual(wp, zp), 1e-12) << zp;
  }
}

TEST(LambertW, DomainErrors) {
  EXPECT_THROW(lambert_w(WBranch::principal, -0.5), std::domain_error);
  EXPECT_THROW(lambert_w(WBranch::lower, 0.0), std::domain_error);
  EXPECT_THROW(lambert_w(WBranch::lower, 1.0), std::domain_error);
  EXPECT_THROW(lambert_w(WBranch::principal, std::nan("")), std::domain_error);
}

TEST(WRatio, KnownValues) {
  EXPECT_NEAR(w_ratio(WBranch::lower, 0.5), 0.1520088850, 1e-9);
  EXPECT_NEAR(w_ratio(WBranch::lower, 0.5), 0.152008884915201869729743400114, 1e-14);
  EXPECT_NEAR(w_ratio(WBranch::principal, 0.5), 3.54039345737001342024773590044, 1e-12);
  const double z = -0.5 / (1.5 * std::numbers::e);
  const double w0 = lambert_w(WBranch::principal, z);
  EXPECT_NEAR(w0 * std::exp(w0), z, 1e-15);
  EXPECT_DOUBLE_EQ(w_ratio(WBranch::principal, 0.5), -0.5 / w0);
}

TEST(WRatio, LargeEllIsAsymptoticallyEll) {
  const double ell = 1e6;
  EXPECT_NEAR(w_ratio(WBranch::lower, ell) / ell, 1.0, 0.05);
  EXPECT_NEAR(w_ratio(WBranch::principal, ell) / ell, 1.0, 0.05);
}

TEST(WRatio, LowerBelowPrincipal) {
  for (double ell = 1e-3; ell < 1e5; ell *= 1.37)
    EXPECT_LT(w_ratio(WBranch::lower, ell), w_ratio(WBranch::principal, ell)) << ell;
  EXPECT_THROW(w_ratio(WBranch::lower, 0.0), std::domain_error);
  EXPECT_THROW(w_ratio(WBranch::principal, -1.0), std::domain_error);
}

TEST(Phi, Examples) {
  for (double y : {0.0, 0.3, 5.0, 40.0}) EXPECT_DOUBLE_EQ(phi(0, y), std::exp(-y));
  for (long long x : {0LL, 1LL, 7LL, 100LL}) EXPECT_EQ(phi(x, 0.0), 1.0);
  EXPECT_NEAR(phi(5, 3.2), 0.89459189453082258674044891079, 1e-14);
  EXPECT_NEAR(phi(5, 3.2), oracle::upper_gamma_regularized(5, 3.2), 1e-10);
}

TEST(Phi, MatchesQuadratureOracle) {
  for (long long x : {0LL, 1LL, 3LL, 10LL, 30LL})
    for (double y : {0.1, 1.0, 4.5, 12.0, 35.0})
      EXPECT_NEAR(phi(x, y), oracle::upper_gamma_regularized(x, y), 1e-10) << x << ' ' << y;
}

TEST(Phi, LargeArgumentsStayInRange) {
  // Past the e^{-y} underflow point the log-space path takes over.
  EXPECT_NEAR(phi(1000, 1000.0), 0.5, 0.01);
  EXPECT_NEAR(phi(20000, 20000.0), 0.5, 0.005);
  EXPECT_LT(phi(10, 5000.0), 1e-300);
  EXPECT_NEAR(phi(100000, 10000.0), 1.0, 1e-12);
}

TEST(Phi, MonotoneAndBounded) {
  Rng rng(3);
  for (int i = 0; i < 3000; ++i) {
    const long long x = static_cast<long long>(rng.below(60));
    const double y = 80.0 * rng.uniform();
    const double d = 5.0 * rng.uniform();
    const double v = phi(x, y);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    // Rounding allowance of a few ulps near 1.
    EXPECT_GE(phi(x + 1, y), v - 4e-16);
    EXPECT_LE(phi(x, y + d), v + 4e-16);
  }
}

TEST(Phi, Errors) {
  EXPECT_THROW(phi(-1, 1.0), std::domain_error);
  EXPECT_THROW(phi(1, -0.5), std::domain_error);
  EXPECT_THROW(phi(1, INFINITY), std::domain_error);
}
