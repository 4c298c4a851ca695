#include <gtest/gtest.h>

#include "helpers.hpp"
#include "suites.hpp"

using namespace lorentzian;
using testing_support::e1;

namespace {

/// Three geodesic rays from the origin, 120 degrees apart, cell k between
/// ray k and ray k+1.
Cellulation tripod(std::array<double, 3> weights) {
  Cellulation c;
  c.kind = Cellulation::Kind::explicit_complex;
  c.d = 2;
  c.n_cells = 3;
  for (int k = 0; k < 3; ++k) {
    const double a = 2 * numeric::pi * k / 3;
    ExplicitFacet f;
    f.a = (k + 2) % 3;
    f.b = k;
    f.weight = weights[k];
    f.normal = (Vec(3) << -std::sin(a), std::cos(a), 0).finished();
    f.points = {polar_to(origin(2), 2.0, direction_from_angles(2, a))};
    c.facets.push_back(f);
    c.interior_points.push_back({polar_to(origin(2), 1.0, direction_from_angles(2, a + numeric::pi / 3)),
                                 polar_to(origin(2), 3.0, direction_from_angles(2, a + numeric::pi / 4))});
  }
  c.ridges.push_back({origin(2), {0, 1, 2}});
  return c;
}

}  // namespace

TEST(Polyhedral, OneWallHasVerticesZeroAndAV) {
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 2.5}}));
  ASSERT_EQ(P.n_cells(), 2);
  EXPECT_EQ(P.vertices[0], Vec::Zero(3));
  EXPECT_EQ(P.vertices[1], Vec(2.5 * e1()));
}

TEST(Polyhedral, TwoCrossingWallsGiveFourCells) {
  Vec v(3);
  v << 0, 1, 0;
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 1.0}, Wall{v, 2.0}}));
  EXPECT_EQ(P.n_cells(), 4);
  EXPECT_EQ(P.adjacency.size(), 4u);
  EXPECT_LT(recompute_s1(P).max_deviation, 1e-14);
}

TEST(Polyhedral, DisjointWallsGiveThreeCells) {
  // <x, v> = 0 for v = (cosh 2, 0, sinh 2) misses the wall x_1 = 0 on H^2
  Vec v(3);
  v << std::cosh(2.0), 0, std::sinh(2.0);
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 1.0}, Wall{v, 1.0}}));
  EXPECT_EQ(P.n_cells(), 3);
}

TEST(Polyhedral, RandomArrangementsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::mt19937_64 rng(seed);
    const Cellulation c = cli::suites::random_arrangement(rng, 1 + static_cast<int>(seed % 5));
    const PolyhedralFConvex P = build_polyhedron(c);
    EXPECT_TRUE(check_closure(c).ok);
    EXPECT_LT(verify_path_independence(P, 10, seed), 1e-9) << seed;
    EXPECT_TRUE(verify_gauss_decomposition(P, 10).ok) << seed;
    EXPECT_LT(recompute_s1(P).max_deviation, 1e-10) << seed;
  }
}

TEST(Polyhedral, ArrangementInD3) {
  std::vector<Wall> ws;
  for (int i = 0; i < 3; ++i) {
    Vec v = Vec::Zero(4);
    v[i] = 1;
    ws.push_back({v, 1.0 + i});
  }
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(3, ws));
  EXPECT_EQ(P.n_cells(), 8);
  EXPECT_TRUE(verify_gauss_decomposition(P, 10).ok);
  EXPECT_LT(recompute_s1(P).max_deviation, 1e-12);
}

TEST(Polyhedral, ExplicitTripodClosesAndBuilds) {
  const Cellulation c = tripod({1.0, 1.0, 1.0});
  EXPECT_TRUE(check_closure(c).ok);
  const PolyhedralFConvex P = build_polyhedron(c);
  EXPECT_EQ(P.n_cells(), 3);
  EXPECT_LT(verify_path_independence(P, 10, 1), 1e-12);
  EXPECT_TRUE(verify_gauss_decomposition(P).ok);
  EXPECT_LT(recompute_s1(P).max_deviation, 1e-12);
}

TEST(Polyhedral, ExplicitTripodWithUnbalancedWeightsIsRejected) {
  const Cellulation c = tripod({1.0, 1.0, 1.5});
  const ClosureReport r = check_closure(c);
  EXPECT_FALSE(r.ok);
  EXPECT_NEAR(r.max_defect, 0.5, 1e-12);
  EXPECT_THROW(build_polyhedron(c), ValidationError);
}

TEST(Polyhedral, InvalidInputs) {
  EXPECT_THROW(Cellulation::arrangement(2, {Wall{e1(), 0.0}}), ValidationError);
  EXPECT_THROW(Cellulation::arrangement(2, {Wall{e1(), 1.0}, Wall{Vec(-e1()), 1.0}}), ValidationError);
  EXPECT_THROW(Cellulation::arrangement(2, {Wall{origin(2), 1.0}}), ValidationError);
  EXPECT_THROW(build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 1.0}}), 5), ValidationError);
}

TEST(Polyhedral, D1PolygonEdgeLengths) {
  const PolyhedralFConvex P = build_d1({{0.5, 2.0}, {-1.0, 1.0}, {2.0, 0.25}});
  ASSERT_EQ(P.n_cells(), 4);
  const S1Report r = recompute_s1(P);
  EXPECT_LT(r.max_deviation, 1e-14);
  EXPECT_EQ(P.vertices[1], h1_normal(-1.0));
}

TEST(Polyhedral, InvariantD1Polygon) {
  const InvariantBuildResult r = build_invariant_d1(1.2, {{0.3, 0.5}, {0.9, 0.2}});
  EXPECT_TRUE(r.cocycle_report.ok);
  EXPECT_LT(r.coboundary_residual, 1e-10);
  EXPECT_LT(r.invariance_error, 1e-10);
  EXPECT_THROW(build_invariant_d1(0.0, {{0.3, 0.5}}), ValidationError);
}

TEST(Polyhedral, VertexCsvHasFullPrecision) {
  const PolyhedralFConvex P = build_polyhedron(Cellulation::arrangement(2, {Wall{e1(), 1.0 / 3.0}}));
  std::ostringstream os;
  P.write_csv(os);
  EXPECT_NE(os.str().find("cell,signs,x1,x2,x3"), std::string::npos);
  EXPECT_NE(os.str().find("0.33333333333333331"), std::string::npos);
}
