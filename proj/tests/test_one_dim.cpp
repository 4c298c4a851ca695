#include <gtest/gtest.h>

#include "lorentzian/one_dim.hpp"
#include "lorentzian/polyhedral.hpp"

using namespace lorentzian;

namespace {

std::vector<std::pair<double, double>> samples() {
  std::vector<std::pair<double, double>> s;
  for (double r = -2; r <= 2; r += 0.25)
    for (double a : {0.1, 0.5, 1.0, 2.0}) s.push_back({r, a});
  return s;
}

}  // namespace

TEST(OneDim, DiracSolution) {
  OneDimMeasure mu;
  mu.atoms = {{0.0, 1.0}};
  const Solution1D h = solve_1d(mu);
  for (double t : {-3.0, -0.5, 0.0, 0.2, 4.0}) EXPECT_NEAR(h(t), -0.5 * std::exp(-std::abs(t)), 1e-15);
  ASSERT_EQ(h.kinks.size(), 1u);
  for (double c : {-0.7, 0.0, 0.4})
    for (double R : {0.5, 1.5})
      EXPECT_NEAR(pairing_1d(h.as_function(), {c, R}, {0.0}), measure_pairing_1d(mu, {c, R}), 1e-10);
}

TEST(OneDim, DensitySolutionPassesThePairingOracle) {
  OneDimMeasure mu;
  mu.density = Density1D{[](double s) { return std::exp(-s * s); }};
  mu.atoms = {{0.3, 0.5}};
  const Solution1D h = solve_1d(mu);
  for (double c : {-1.0, 0.2, 0.9})
    EXPECT_NEAR(pairing_1d(h.as_function(), {c, 0.8}, {0.3}), measure_pairing_1d(mu, {c, 0.8}), 1e-8);
}

TEST(OneDim, ConstantDensityGivesMinusTheConstant) {
  OneDimMeasure mu;
  mu.density = Density1D{[](double) { return 2.0; }};
  const Solution1D h = solve_1d(mu);
  for (double t : {-2.0, 0.0, 1.5}) EXPECT_NEAR(h(t), -2.0, 1e-9);
}

TEST(OneDim, SmoothSolverSolvesTheOde) {
  auto phi = [](double s) { return std::sin(s); };
  const Solution1D h = solve_1d_smooth(phi, 0.3, -0.2);
  for (double t : {-1.0, 0.5, 2.0}) {
    const double d = 1e-3;
    const double lhs = (h(t + d) - 2 * h(t) + h(t - d)) / (d * d) - h(t);
    EXPECT_NEAR(lhs, phi(t), 1e-5);
  }
  // the particular part vanishes to first order at t = 1
  EXPECT_NEAR(h(1.0), 0.3 * std::cosh(1.0) - 0.2 * std::sinh(1.0), 1e-15);
}

TEST(OneDim, SmoothAndGreenFormsAgree) {
  Density1D D{[](double s) { return 1 / (1 + s * s); }};
  OneDimMeasure mu;
  mu.density = D;
  const auto [A, B] = cd_to_ab(D, 0.4, -1.2);
  const Solution1D g = solve_1d(mu, A, B);
  const Solution1D s = solve_1d_smooth(D.phi, 0.4, -1.2);
  for (double t : {-2.0, 0.0, 1.0, 2.5}) EXPECT_NEAR(g(t), s(t), 1e-9 * std::max(1.0, std::abs(s(t))));
}

TEST(OneDim, CoefficientConversionsAreInverse) {
  Density1D D{[](double s) { return std::exp(-std::abs(s) / 2); }, -INFINITY, INFINITY, 0.5};
  const auto [A, B] = cd_to_ab(D, 0.4, -1.2);
  const auto [C, Dc] = ab_to_cd(D, A, B);
  EXPECT_NEAR(C, 0.4, 1e-12);
  EXPECT_NEAR(Dc, -1.2, 1e-12);
}

TEST(OneDim, TailCheckRejectsFastGrowth) {
  OneDimMeasure mu;
  mu.density = Density1D{[](double s) { return std::exp(s); }, -INFINITY, INFINITY, 1.0};
  EXPECT_THROW(solve_1d(mu), ValidationError);
  OneDimMeasure bad;
  bad.atoms = {{0.0, -1.0}};
  EXPECT_THROW(solve_1d(bad), ValidationError);
}

TEST(OneDim, ConvexityOfTheDiracRepresentatives) {
  EXPECT_EQ(convexity_1d([](double t) { return std::abs(std::sinh(t)) / 2; }, samples()).verdict,
            Verdict::certified_on_samples);
  const ConvexityReport r = convexity_1d([](double t) { return std::exp(-std::abs(t)) / 2; }, samples());
  EXPECT_EQ(r.verdict, Verdict::violated);
  EXPECT_LT(r.min_eigenvalue, 0.0);
  // the signed Dirac solution and the convex representative differ by cosh/sinh terms
  for (double t : {-1.0, 0.4}) EXPECT_NEAR(std::abs(std::sinh(t)) / 2 - (-0.5 * std::exp(-std::abs(t))), 0.5 * std::cosh(t), 1e-15);
}

TEST(OneDim, CurveOfTheDiracRepresentativeIsOneEdge) {
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i) grid.push_back(0.1 * i);
  const auto c = curve_from_support([](double t) { return std::abs(std::sinh(t)) / 2; }, grid);
  ASSERT_EQ(c.size(), grid.size() + 1);
  EXPECT_EQ(c[10].side, -1);
  EXPECT_EQ(c[11].side, 1);
  EXPECT_NEAR(c[10].x1, -0.5, 1e-7);
  EXPECT_NEAR(c[11].x1, 0.5, 1e-7);
  EXPECT_NEAR(curve_length(c), 1.0, 1e-6);
  std::ostringstream os;
  write_curve_csv(os, c);
  EXPECT_EQ(os.str().rfind("rho,x1,x2,kink\n", 0), 0u);
}

TEST(OneDim, RadiusOfCurvature) {
  for (double t : {-1.0, 0.5, 2.0}) {
    EXPECT_NEAR(radius_1d([](double s) { return std::cosh(s); }, t), 0.0, 1e-8);
    EXPECT_NEAR(radius_1d([](double s) { return -1.0; }, t), 1.0, 1e-9);
    const auto zm = [](double s) { return std::sinh(s) * std::atan(1 / std::sinh(s)) - 1; };
    EXPECT_NEAR(radius_1d(zm, t), -1 / (std::cosh(t) * std::cosh(t)), 1e-8);
  }
  EXPECT_THROW(radius_1d([](double s) { return std::abs(std::sinh(s)); }, 0.0), NonDifferentiable);
}

TEST(OneDim, PolygonAndInvariantPolygon) {
  const PolyhedralFConvex P = build_d1({{-1.0, 1.0}, {1.0, 3.0}});
  const S1Report r = recompute_s1(P);
  for (const auto& e : r.entries) EXPECT_NEAR(e.length, e.weight, 1e-15 * e.weight);
  const InvariantBuildResult inv = build_invariant_d1(1.0, {{0.3, 0.5}});
  EXPECT_TRUE(inv.cocycle_report.ok);
  EXPECT_LT(inv.coboundary_residual, 1e-10);
}
