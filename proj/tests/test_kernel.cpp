#include <gtest/gtest.h>

#include "lorentzian/kernel.hpp"
#include "oracles.hpp"

using namespace lorentzian;

TEST(Kernel, D1IsExponential) {
  KernelContext k(1);
  for (double r : {0.01, 0.5, 3.0, 20.0}) EXPECT_NEAR(kernel_k(k, r), -0.5 * std::exp(-r), 1e-15);
}

TEST(Kernel, MatchesFrozenD2Values) {
  KernelContext k(2);
  for (const auto& row : oracle::kernel_d2) {
    const double ref = row[1];
    EXPECT_NEAR(kernel_k(k, row[0]), ref, 1e-12 * std::abs(ref)) << "rho " << row[0];
  }
}

TEST(Kernel, MatchesFrozenD3Values) {
  KernelContext k(3);
  for (const auto& row : oracle::kernel_d3) {
    const double ref = row[1];
    EXPECT_NEAR(kernel_k(k, row[0]), ref, 1e-11 * std::abs(ref)) << "rho " << row[0];
  }
}

TEST(Kernel, ClosedFormD2AgreesWithQuadrature) {
  KernelContext k(2);
  for (double r : {0.2, 0.9, 1.0, 1.7})
    EXPECT_NEAR(kernel_k(k, r), kernel_k_quadrature(k, r), 1e-12) << r;
}

TEST(Kernel, SeriesAndQuadratureAgreeAcrossTheSwitch) {
  KernelContext k3(3);
  EXPECT_NEAR(kernel_k(k3, 1.0), kernel_k_quadrature(k3, 1.0), 1e-13);
  EXPECT_NEAR(kernel_k(k3, 1.0 - 1e-12), kernel_k(k3, 1.0), 1e-10);
}

TEST(Kernel, OdeResidualSmall) {
  std::vector<double> rhos;
  for (int i = 0; i < 50; ++i) rhos.push_back(0.05 + 0.2 * i);
  for (int d = 1; d <= 3; ++d) {
    KernelContext k(d);
    for (double r : kernel_ode_residual(k, rhos)) EXPECT_LT(r, 1e-8) << "d=" << d;
  }
}

TEST(Kernel, UnitFluxNearZero) {
  for (int d = 1; d <= 3; ++d) EXPECT_NEAR(kernel_flux(KernelContext(d), 1e-4), 1.0, 1e-3) << "d=" << d;
}

TEST(Kernel, IsNegativeAndIncreasing) {
  for (int d = 2; d <= 3; ++d) {
    KernelContext k(d);
    double prev = kernel_k(k, 0.01);
    for (double r = 0.1; r < 12; r += 0.3) {
      const double v = kernel_k(k, r);
      EXPECT_LT(v, 0.0);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(Kernel, RejectsNonPositiveRadius) {
  KernelContext k(2);
  EXPECT_THROW(kernel_k(k, 0.0), ValidationError);
  EXPECT_THROW(KernelContext(0), ValidationError);
}

TEST(Kernel, GreenIsSymmetric) {
  KernelContext k(2);
  const Vec x = polar_to(origin(2), 0.4, direction_from_angles(2, 0.3));
  const Vec y = polar_to(origin(2), 1.1, direction_from_angles(2, 2.0));
  EXPECT_DOUBLE_EQ(green(k, x, y), green(k, y, x));
  EXPECT_NEAR(green(k, x, y), kernel_k(k, hyperbolic_distance(x, y)), 1e-15);
}
