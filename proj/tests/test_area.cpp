#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace lorentzian;
using testing_support::e1;

namespace {

const RegionSpec& disc() {
  static const RegionSpec w = RegionSpec::polar_rect(origin(2), 0, 1, 0, 2 * numeric::pi);
  return w;
}

}  // namespace

TEST(Area, RegionVolumesAndMembership) {
  EXPECT_NEAR(disc().volume(), 2 * numeric::pi * (std::cosh(1.0) - 1), 1e-12);
  EXPECT_TRUE(disc().contains(polar_to(origin(2), 0.9, direction_from_angles(2, 4.0))));
  EXPECT_FALSE(disc().contains(polar_to(origin(2), 1.1, direction_from_angles(2, 4.0))));
  const RegionSpec ball3 = RegionSpec::polar_rect(origin(3), 0, 0.5, 0, numeric::pi, 0, 2 * numeric::pi);
  EXPECT_NEAR(ball3.volume(), numeric::pi * (std::sinh(1.0) - 1.0), 1e-10);
  const RegionSpec fd = RegionSpec::fundamental_domain(0.2, 1.7);
  EXPECT_NEAR(fd.volume(), 1.7, 1e-15);
  EXPECT_THROW(RegionSpec::polar_rect(origin(2), 1, 0.5, 0, 1), ValidationError);
  EXPECT_THROW(RegionSpec::fundamental_domain(0, -1), ValidationError);
}

TEST(Area, SmoothDensityOfBallsAndCones) {
  for (const Vec& eta : testing_support::random_points(2, 10, 1.5, 1)) {
    for (int i = 0; i <= 2; ++i) {
      EXPECT_NEAR(smooth_area_density(constant(-2.0), eta, i), std::pow(2.0, i), 1e-12);
      EXPECT_NEAR(smooth_area_density(cone_apex(origin(2)), eta, i), i == 0 ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Area, SmoothIntegralOverADisc) {
  const double A = disc().volume();
  EXPECT_NEAR(smooth_area_integral(constant(-1.0), disc(), 1), A, 1e-12 * A);
  EXPECT_NEAR(smooth_area_integral(constant(-3.0), disc(), 2), 9 * A, 1e-11 * A);
}

TEST(Area, ProjectionOntoBallAndCone) {
  const Vec k = 2.0 * origin(2);
  const ProjectionResult b = project_and_time(constant(-1.0), k);
  EXPECT_TRUE(b.inside);
  EXPECT_NEAR(b.T, 1.0, 1e-12);
  EXPECT_LT((b.N - origin(2)).norm(), 1e-12);
  const ProjectionResult c = project_and_time(cone_apex(Vec::Zero(3)), k);
  EXPECT_NEAR(c.T, 2.0, 1e-12);
  EXPECT_LT(c.r.norm(), 1e-12);
  const ProjectionResult out = project_and_time(constant(-1.0), Vec(0.5 * origin(2)));
  EXPECT_FALSE(out.inside);
}

TEST(Area, ProjectionOntoAPolyhedron) {
  const SupportSpec P = polyhedral_max({Vec::Zero(3), e1()});
  Vec k(3);
  k << 0.5, 0.0, 2.0;  // the time is realized at the midpoint of the spacelike edge
  const ProjectionResult r = project_and_time(P, k);
  EXPECT_TRUE(r.inside);
  EXPECT_NEAR(r.T, 2.0, 1e-9);
  EXPECT_LT((r.r - Vec(0.5 * e1())).norm(), 1e-6);
}

TEST(Area, CollarVolumeOfTheConeMatchesTheFormula) {
  const double eps = 0.5, n = 400000;
  const VolumeEstimate v = epsilon_volume_mc(cone_apex(origin(2)), disc(), eps, n, 3);
  const double exact = eps * eps * eps / 3 * disc().volume();
  EXPECT_LT(std::abs(v.volume - exact), 4 * v.stderr_ + 1e-12);
}

TEST(Area, McIsDeterministicPerSeed) {
  const auto a = collar_counts(constant(-1.0), disc(), {0.2, 0.4}, 50000, 9);
  const auto b = collar_counts(constant(-1.0), disc(), {0.2, 0.4}, 50000, 9);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_LE(a.counts[0], a.counts[1]);
}

TEST(Area, FitNeedsEnoughEpsilons) {
  EXPECT_THROW(fit_area_polynomial(constant(-1.0), disc(), {0.1, 0.2}, 1000, 1), ValidationError);
  EXPECT_THROW(fit_area_polynomial(constant(-1.0), disc(), {0.1, 0.1, 0.2, 0.2}, 1000, 1), ValidationError);
}

TEST(Area, FitRecoversTheBallCoefficients) {
  std::vector<double> eps;
  for (int i = 1; i <= 12; ++i) eps.push_back(0.25 * i);
  const AreaFit f = fit_area_polynomial(constant(-1.0), disc(), eps, 2000000, 5);
  const double A = disc().volume();
  for (const AreaReport& r : f.reports) {
    EXPECT_LT(std::abs(r.value / A - 1), 5 * r.error / A + 1e-3) << "order " << r.order;
    EXPECT_EQ(r.method, "mc-fit");
  }
}

TEST(Area, PolyhedralSlabOrders) {
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 1.5}}));
  const RegionSpec slab = RegionSpec::facet_subset(e1(), origin(2), 0.8, 0.3);
  EXPECT_NEAR(polyhedral_area(P, slab, 1).value, 1.5 * 0.8, 1e-9);
  EXPECT_NEAR(polyhedral_area(P, slab, 2).value, 0.0, 1e-12);
  EXPECT_NEAR(polyhedral_area(P, slab, 0).value, slab.volume(), 1e-6 * slab.volume());
}

TEST(Area, PolyhedralCrossingWallsOrderTwo) {
  Vec v(3);
  v << 0, 1, 0;
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 1.0}, Wall{v, 2.0}}));
  // the crossing point carries the area of the parallelogram spanned by the two edges
  EXPECT_NEAR(polyhedral_area(P, disc(), 2).value, 2.0, 1e-9);
}

TEST(Area, S1PairingOfOneWall) {
  const double a = 1.5;
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), a}}));
  const Bump b{polar_to(origin(2), 0.2, direction_from_angles(2, 0.4)), 0.6, 1.0};
  // weighted trace: Int over the wall geodesic of f
  const Vec foot = renormalize(Vec(b.center - minkowski_form(b.center, e1()) * e1()));
  Vec t(3);
  t << 0, 1, 0;
  t = tangent_part(foot, t);
  t /= std::sqrt(minkowski_sq(t));
  const double L = numeric::gauss_panels([&](double s) { return b(Vec(std::cosh(s) * foot + std::sinh(s) * t)); }, -2, 2, 32);
  EXPECT_NEAR(s1_pairing(P.spec, b), 0.5 * a * L, 1e-4 * L);
}

TEST(Area, CsvHeader) {
  std::ostringstream os;
  write_area_csv(os, {{0, 1.0, 0.1, "mc", 3}});
  EXPECT_EQ(os.str().substr(0, 29), "order,value,error,method,seed");
}
