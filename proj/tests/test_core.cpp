#include <gtest/gtest.h>

#include "helpers.hpp"
#include "lorentzian/core.hpp"

using namespace lorentzian;
using testing_support::random_points;

TEST(Core, MinkowskiFormSignature) {
  Vec x(3), y(3);
  x << 1, 2, 3;
  y << -1, 0.5, 2;
  EXPECT_DOUBLE_EQ(minkowski_form(x, y), -1 + 1 - 6);
  EXPECT_DOUBLE_EQ(minkowski_sq(origin(2)), -1.0);
  EXPECT_EQ(classify(origin(3)), CausalClass::future_timelike);
  EXPECT_EQ(classify(Vec(-origin(3))), CausalClass::past_timelike);
  Vec l(3);
  l << 1, 0, 1;
  EXPECT_EQ(classify(l), CausalClass::future_lightlike);
  EXPECT_EQ(classify(testing_support::e1()), CausalClass::spacelike);
  EXPECT_EQ(classify(Vec::Zero(3)), CausalClass::zero);
}

TEST(Core, HPointRejectsOffSheet) {
  EXPECT_NO_THROW(HPoint::from(origin(2)));
  EXPECT_THROW(HPoint::from(Vec(-origin(2))), ValidationError);
  Vec x(3);
  x << 1, 0, 1.2;
  EXPECT_THROW(HPoint::from(x), ValidationError);
  EXPECT_THROW(SpacelikeUnit::from(origin(2)), ValidationError);
  EXPECT_THROW(require_dimension(4), ValidationError);
}

TEST(Core, BoostFrameIsOrthonormal) {
  for (int d = 1; d <= 3; ++d)
    for (const Vec& eta : random_points(d, 10, 3.0, 11)) {
      const Mat B = boost_to(eta);
      const Mat J = minkowski_metric(d);
      EXPECT_LT((B.transpose() * J * B - J).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((B.col(d) - eta).norm(), 1e-14);
    }
}

TEST(Core, ExpMapDistanceAndPolarRoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int d = 1; d <= 3; ++d)
    for (const Vec& eta : random_points(d, 10, 2.0, 5 + d)) {
      Vec s(d);
      for (int k = 0; k < d; ++k) s[k] = 0.7 * N(rng);
      const Vec y = exp_map(eta, s);
      EXPECT_NEAR(minkowski_sq(y), -1.0, 1e-10 * y.squaredNorm());
      EXPECT_NEAR(hyperbolic_distance(eta, y), s.norm(), 1e-8);
      const Polar p = polar_from(eta, y);
      EXPECT_NEAR(p.rho, s.norm(), 1e-9);
      EXPECT_LT((polar_to(eta, p.rho, p.theta) - y).norm(), 1e-9 * y.norm());
    }
}

TEST(Core, PolarAtBaseIsDegenerate) {
  const Polar p = polar_from(origin(2), origin(2));
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(p.rho, 0.0);
}

TEST(Core, IsometryInverseAndComposition) {
  const LorentzIsometry g = boost_d1(0.8);
  EXPECT_TRUE(g.is_valid());
  const LorentzIsometry id = g.compose(g.inverse());
  EXPECT_LT((id.linear - Mat::Identity(2, 2)).norm(), 1e-12);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = 0.3;
  EXPECT_THROW((LorentzIsometry{bad, Vec::Zero(2)}.validate()), ValidationError);
}

TEST(Core, CoboundarySolveD1) {
  const LorentzIsometry g = boost_d1(1.3);
  Vec v(2);
  v << 0.4, -1.1;
  const Vec tau = v - g.linear * v;
  const Vec w = coboundary_solve_d1({g, tau});
  EXPECT_LT((w - v).norm(), 1e-10);
  EXPECT_THROW(coboundary_solve_d1({boost_d1(0.0), tau}), ValidationError);
}

TEST(Core, CocycleCheckFlagsInconsistentTranslations) {
  Vec tau(2);
  tau << 0.3, 0.1;
  const std::vector<LorentzIsometry> gens{{boost_d1(0.9).linear, tau}};
  const std::vector<Word> words{{1, 1}, {1, -1}, {1, 1, -1}};
  EXPECT_TRUE(cocycle_check(gens, words).ok);
  // a translation assignment that is linear in the word length is not a cocycle
  auto wrong = [&](const Word& w) { return Vec(static_cast<double>(w.size()) * tau); };
  const CocycleReport r = cocycle_check(gens, words, wrong);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.failing_word.has_value());
}
