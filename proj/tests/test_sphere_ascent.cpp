#include <resent/sphere_ascent.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace resent;

namespace {

RVector target() { return (RVector(4) << 1.0, -2.0, 0.5, 2.0).finished(); }

}  // namespace

TEST(SphereAscent, LinearFunctionalReachesNorm) {
  const RVector c = target();
  auto f = [&](const RVector& x, double) { return c.dot(x) / x.norm(); };
  OptimizerConfig cfg;
  cfg.restarts = 3;
  const AscentResult r = maximize_on_sphere(f, 4, cfg);
  EXPECT_NEAR(r.value, c.norm(), 1e-10);
  EXPECT_LE((r.x - c.normalized()).norm(), 1e-5);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x.norm(), 1.0, 1e-12);
}

TEST(SphereAscent, SuppliedGradientMatchesFiniteDifferences) {
  const RVector c = target();
  auto plain = [&](const RVector& x, double) { return std::abs(c.dot(x)) / x.norm(); };
  auto with_grad = [&](const RVector& x, double, RVector* g) {
    const double n = x.norm();
    const double v = c.dot(x) / n;
    if (g) {
      const RVector u = x / n;
      *g = (v >= 0 ? 1.0 : -1.0) * (c - u * u.dot(c)) / n;
    }
    return std::abs(v);
  };
  OptimizerConfig cfg;
  cfg.restarts = 4;
  EXPECT_NEAR(maximize_on_sphere(plain, 4, cfg).value, maximize_on_sphere(with_grad, 4, cfg).value,
              1e-10);
}

TEST(SphereAscent, DeterministicAndMonotoneInRestarts) {
  // Two competing maxima of different height.
  auto f = [](const RVector& x, double) {
    const RVector u = x.normalized();
    return std::exp(-10 * (u - RVector::Unit(3, 0)).squaredNorm()) +
           0.5 * std::exp(-10 * (u - RVector::Unit(3, 2)).squaredNorm());
  };
  OptimizerConfig few;
  few.restarts = 2;
  OptimizerConfig many = few;
  many.restarts = 12;
  const AscentResult a = maximize_on_sphere(f, 3, few);
  const AscentResult b = maximize_on_sphere(f, 3, few);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.x, b.x);
  const AscentResult c = maximize_on_sphere(f, 3, many);
  EXPECT_GE(c.value, a.value);
  EXPECT_NEAR(c.value, 1.0, 1e-8);  // the second bump adds 0.5 e^-20
}

TEST(SphereAscent, RejectsBadConfig) {
  auto f = [](const RVector& x, double) { return x(0); };
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(maximize_on_sphere(f, 2, cfg), InvalidArgument);
  EXPECT_THROW(maximize_on_sphere(f, 0, OptimizerConfig{}), InvalidArgument);
}
