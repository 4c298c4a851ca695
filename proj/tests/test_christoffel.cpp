#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace lorentzian;
using testing_support::e1;

namespace {

Vec e1_3d() {
  Vec v(4);
  v << 1, 0, 0, 0;
  return v;
}

/// Point of H^d with <x, e1> = z.
Vec at_height(int d, double z) { return polar_to(origin(d), std::asinh(z), direction_from_angles(d, d == 3 ? numeric::pi / 2 : 0.0)); }

}  // namespace

TEST(Christoffel, WallSolutionMatchesFrozenD2) {
  KernelContext k(2);
  for (const auto& row : oracle::wall_d2) {
    const Vec x = at_height(2, row[0]);
    EXPECT_NEAR(minkowski_form(x, e1()), row[0], 1e-14);
    EXPECT_NEAR(wall_solution(k, {e1(), 1.0}, x), row[1], 1e-12);
    EXPECT_NEAR(elementary_closed_form(1.0, e1(), x), row[1], 1e-14);
  }
}

TEST(Christoffel, WallSolutionMatchesFrozenD3) {
  KernelContext k(3);
  for (const auto& row : oracle::wall_d3) {
    const Vec x = at_height(3, row[0]);
    EXPECT_NEAR(minkowski_form(x, e1_3d()), row[0], 1e-14);
    EXPECT_NEAR(wall_solution(k, {e1_3d(), 1.0}, x), row[1], 1e-10);
  }
}

TEST(Christoffel, WallWeightIsLinear) {
  KernelContext k(2);
  const Vec x = at_height(2, 0.6);
  EXPECT_NEAR(wall_solution(k, {e1(), 3.0}, x), 3.0 * wall_solution(k, {e1(), 1.0}, x), 1e-14);
}

TEST(Christoffel, SmoothSolutionAtBumpCenterD2) {
  KernelContext k(2);
  for (const auto& row : oracle::bump_center_d2) {
    const Bump b{origin(2), row[0], 1.0};
    EXPECT_NEAR(solve_smooth(k, b, origin(2)), row[1], 1e-7 * std::abs(row[1])) << "R " << row[0];
  }
}

TEST(Christoffel, SmoothSolutionAtBumpCenterD3) {
  KernelContext k(3);
  QuadratureSpec q;
  q.angular_nodes = 24;
  const Bump b{origin(3), oracle::bump_center_d3[0][0], 1.0};
  EXPECT_NEAR(solve_smooth(k, b, origin(3), q), oracle::bump_center_d3[0][1], 1e-6);
}

TEST(Christoffel, SmoothSolutionSolvesTheEquation) {
  KernelContext k(2);
  const Bump b{polar_to(origin(2), 0.3, direction_from_angles(2, 1.0)), 1.0, 1.0};
  auto h = [&](const Vec& x) { return solve_smooth(k, b, x); };
  for (double r : {0.0, 0.4, 0.8, 1.5})
    for (double a : {0.0, 2.5}) {
      const Vec x = polar_to(b.center, r, direction_from_angles(2, a));
      EXPECT_LT(residual_wave(h, b(x), x, 1e-3), 2e-3) << r << ' ' << a;
    }
}

TEST(Christoffel, TruncatedQuadratureIsRefused) {
  KernelContext k(2);
  QuadratureSpec q;
  q.rho_max = 0.5;
  const Bump b{origin(2), 1.0, 1.0};
  EXPECT_THROW(solve_smooth(k, b, polar_to(origin(2), 0.3, direction_from_angles(2, 0.0)), q), NumericalRefusal);
}

TEST(Christoffel, MeasureCombinesPieces) {
  KernelContext k(2);
  const Vec p = polar_to(origin(2), 0.5, direction_from_angles(2, 2.0));
  MeasureSpec mu;
  mu.atoms = {{p, 2.0}};
  mu.walls = {{e1(), 1.0}};
  const Vec x = polar_to(origin(2), 0.8, direction_from_angles(2, 0.3));
  const double expect = 2 * 2.0 * kernel_k(k, hyperbolic_distance(x, p)) + elementary_closed_form(1.0, e1(), x);
  EXPECT_NEAR(solve_measure(k, mu, x), expect, 1e-12);
  EXPECT_THROW(solve_measure(k, mu, p), NumericalRefusal);
  MeasureSpec bad;
  bad.atoms = {{p, -1.0}};
  EXPECT_THROW(solve_measure(k, bad, x), ValidationError);
}

TEST(Christoffel, OneWallLambdaIsNegativeSomewhere) {
  KernelContext k(2);
  MeasureSpec mu;
  mu.walls = {{e1(), 1.0}};
  // a point on the wall paired with a point far on one side
  const double lo = convexity_lambda(k, mu, origin(2), polar_to(origin(2), 2.0, direction_from_angles(2, 0.0)));
  EXPECT_LT(lo, 0.0);
}

TEST(Christoffel, ConvexityIntegralMatchesFiniteDifferences) {
  KernelContext k(2);
  const Bump b{origin(2), 1.0, 1.0};
  const Vec x = polar_to(origin(2), 0.5, direction_from_angles(2, 0.4));
  Vec X(2);
  X << 0.6, 0.8;
  const SmoothConvexity c = convexity_integral_smooth(k, b, x, X);
  const double s = 1e-2;
  const double h0 = solve_smooth(k, b, x);
  const double d2 = (solve_smooth(k, b, exp_map(x, Vec(s * X))) - 2 * h0 + solve_smooth(k, b, exp_map(x, Vec(-s * X)))) / (s * s);
  EXPECT_NEAR(c.reverse_II, d2 - h0, 1e-3 * std::max(1.0, std::abs(c.reverse_II)));
  EXPECT_NEAR(c.local, b(x), 1e-15);
}

TEST(Christoffel, ConvexityIntegralIsRadialAtTheCenter) {
  KernelContext k(2);
  const Bump b{origin(2), 1.0, 1.0};
  Vec X1(2), X2(2);
  X1 << 1, 0;
  X2 << std::sqrt(0.5), std::sqrt(0.5);
  const double a = convexity_integral_smooth(k, b, origin(2), X1).integral;
  const double c = convexity_integral_smooth(k, b, origin(2), X2).integral;
  EXPECT_NEAR(a, c, 1e-10);
  EXPECT_NEAR(a, 0.0, 1e-10);  // |X|^2 - 2 <u,X>^2 averages to zero over the circle
}

TEST(Christoffel, FuchsianConstantAndCosineModes) {
  const double T = 2.3, c = 0.7;
  for (double x : {-1.0, 0.0, 0.4, 3.0})
    EXPECT_NEAR(fuchsian_solve_d1(T, [&](double) { return c; }, x), -c, 1e-12);
  const double w = 2 * numeric::pi / T;
  auto phi = [&](double s) { return std::cos(w * s); };
  for (double x : {-1.0, 0.0, 0.4, 3.0}) {
    EXPECT_NEAR(fuchsian_solve_d1(T, phi, x), -phi(x) / (1 + w * w), 1e-12);
    EXPECT_NEAR(fuchsian_solve_d1(T, phi, x + T), fuchsian_solve_d1(T, phi, x), 1e-12);
  }
  EXPECT_THROW(fuchsian_solve_d1(0.0, phi, 0.0), ValidationError);
}

TEST(Christoffel, InvarianceDefect) {
  auto h = [](const Vec&) { return -1.0; };
  Mat L2 = Mat::Identity(3, 3);
  L2.block(1, 1, 2, 2) = boost_d1(0.5).linear;  // boost in the (x2, x3) plane
  std::vector<Vec> samples{origin(2), polar_to(origin(2), 0.5, direction_from_angles(2, 1.0))};
  EXPECT_LT(invariance_defect(h, {{L2, Vec::Zero(3)}}, samples), 1e-15);
  auto z = [](const Vec& x) { return x[2]; };
  EXPECT_GT(invariance_defect(z, {{L2, Vec::Zero(3)}}, samples), 0.1);
}

TEST(Christoffel, UniquenessAtInfinityComparesBoundaryFunctions) {
  const auto dirs = numeric::sphere_directions(2, 8);
  EXPECT_TRUE(check_uniqueness_at_infinity(constant(-1.0), constant(-2.0), dirs).equal);
  EXPECT_FALSE(check_uniqueness_at_infinity(constant(-1.0), cone_apex(origin(2)), dirs).equal);
}
