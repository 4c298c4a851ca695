#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace lorentzian;
using testing_support::random_points;

TEST(Duality, RadialFunctionOfBalls) {
  for (double t : {0.5, 1.0, 3.0})
    for (const Vec& eta : random_points(2, 4, 1.5, 1)) EXPECT_NEAR(radial_function(constant(-t), eta).R, t, 1e-8);
}

TEST(Duality, RadialFunctionOfBallPlusCone) {
  const SupportSpec bc = minkowski_sum(constant(-1.0), cone_apex(origin(2)));
  for (const Vec& eta : random_points(2, 5, 1.0, 2)) EXPECT_NEAR(radial_function(bc, eta).R, 2 * eta[2], 1e-8);
}

TEST(Duality, RadialFunctionNeedsANegativeSupportFunction) {
  EXPECT_THROW(radial_function(cone_apex(Vec::Zero(3)), origin(2)), ValidationError);
  EXPECT_THROW(radial_function(constant(0.5), origin(2)), ValidationError);
}

TEST(Duality, DualOfABall) {
  DualGrid g;
  g.rho_max = 1.0;
  g.n_rho = 6;
  g.n1 = 8;
  const SupportSpec D = dual(constant(-4.0), 2, g);
  for (const Vec& eta : random_points(2, 10, 0.9, 3)) EXPECT_NEAR(eval_h(D, eta), -0.25, 1e-8);
}

TEST(Duality, DualOfBallPlusConeMatchesTheClosedForm) {
  const SupportSpec bc = minkowski_sum(constant(-1.0), cone_apex(origin(2)));
  const SupportSpec closed = closed_form("dual_ball_cone", {}, origin(2));
  DualGrid g;
  g.rho_max = 1.0;
  g.n_rho = 24;
  g.n1 = 32;
  const SolutionField f = dual_field(bc, origin(2), g);
  for (int j = 0; j <= f.n_rho; j += 4)
    for (int a = 0; a < f.n1; a += 5) {
      const Vec x = f.node(j, a, 0);
      EXPECT_NEAR(f.values[f.index(j, a, 0)], eval_h(closed, x), 1e-8);
      EXPECT_NEAR(eval_h(closed, x), -1 / (2 * x[2]), 1e-14);
    }
}

TEST(Hedgehog, DecomposesADifferenceOfSupportFunctions) {
  const Vec ax = polar_to(origin(2), 0.5, direction_from_angles(2, 1.0));
  const SupportSpec h = combination({1.0, -0.7}, {power_cosh(2.0, 1, origin(2)), power_cosh(1.5, 1, ax)});
  HedgehogOptions opt;
  opt.check_points = 150;
  const HedgehogDecomposition r = decompose_hedgehog(h, 2, 1.0, opt);
  EXPECT_EQ(r.report_h1.verdict, Verdict::certified_on_samples);
  EXPECT_EQ(r.report_h2.verdict, Verdict::certified_on_samples);
  EXPECT_LT(r.max_difference, 1e-10);
  for (std::size_t j = 1; j < r.h_star.size(); ++j) EXPECT_GE(r.h_star[j], 0.0);
}

TEST(Hedgehog, ConvexInputStillSplits) {
  const HedgehogDecomposition r = decompose_hedgehog(constant(-1.0), 2, 0.8);
  EXPECT_EQ(r.report_h2.verdict, Verdict::certified_on_samples);
  EXPECT_LT(r.max_difference, 1e-12);
}

TEST(Hedgehog, RejectsNonSmoothInput) {
  Vec v(3);
  v << 1, 0, 0;
  EXPECT_THROW(decompose_hedgehog(polyhedral_max({Vec::Zero(3), v}), 2, 1.0), ValidationError);
  EXPECT_THROW(decompose_hedgehog(constant(-1.0), 2, -1.0), ValidationError);
}

TEST(Hedgehog, WorksInD3) {
  Vec ax = polar_to(origin(3), 0.3, direction_from_angles(3, 1.0, 0.5));
  const SupportSpec h = combination({-1.0}, {power_cosh(2.0, 1, ax)});
  HedgehogOptions opt;
  opt.n_rho = 16;
  opt.n_dirs = 32;
  opt.check_points = 60;
  const HedgehogDecomposition r = decompose_hedgehog(h, 3, 0.7, opt);
  EXPECT_EQ(r.report_h1.verdict, Verdict::certified_on_samples);
  EXPECT_EQ(r.report_h2.verdict, Verdict::certified_on_samples);
  EXPECT_LT(r.max_difference, 1e-10);
}
