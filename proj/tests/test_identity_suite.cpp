#include "gcf/bodies.hpp"
#include "gcf/identities.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <random>

using namespace gcf;

TEST(IdentitySuite, NamesRoundTrip) {
  for (Identity id : all_identities()) EXPECT_EQ(identity_from_name(identity_name(id)), id);
  EXPECT_EQ(all_identities().size(), 10u);
  EXPECT_FALSE(shrinker_only(Identity::GradInverseForm));
  EXPECT_FALSE(shrinker_only(Identity::RadialPositionGradient));
  EXPECT_TRUE(shrinker_only(Identity::LCurvaturePower));
}

TEST(IdentitySuite, StandardCasesPass) {
  for (const auto& r : run_suite(standard_cases(), all_identities())) {
    EXPECT_TRUE(r.passed) << identity_name(r.id) << " on " << r.body;
    EXPECT_TRUE(r.applicable);
  }
}

TEST(IdentitySuite, SphereIsAtRoundoff) {
  const auto bb = build_bundle(sphere_body(build_grid(2, {24, 48})));
  for (Identity id : all_identities()) {
    for (double alpha : {0.6, 1.0, 1.4}) {
      EXPECT_LT(check_identity(id, bb, alpha).max_abs, kRoundoffThreshold) << identity_name(id);
    }
  }
}

TEST(IdentitySuite, EllipseConvergesAtFourthOrder) {
  for (const auto& c : standard_cases()) {
    if (c.name.rfind("ellipse", 0) != 0) continue;
    for (Identity id : all_identities()) {
      const auto r = run_identity(id, c);
      if (id == Identity::SecondFormTrace) {
        EXPECT_LT(r.residuals.back(), 1e-12);
      } else {
        EXPECT_GE(r.order, kMinimumOrder) << identity_name(id);
      }
    }
  }
}

TEST(IdentitySuite, ShrinkerGateRejectsNonShrinkers) {
  const auto g = build_grid(2, {24, 48});
  const auto bb = build_bundle(ellipsoid_body(g, {1.3, 1.0, 0.8}));
  for (Identity id : all_identities()) {
    EXPECT_EQ(check_identity(id, bb, 1.0).applicable, !shrinker_only(id)) << identity_name(id);
  }
  EXPECT_DOUBLE_EQ(shrinker_gate(build_grid(1, {16})), 100.0 * std::pow(2.0 * M_PI / 16.0, 4));
  EXPECT_DOUBLE_EQ(shrinker_gate(build_grid(1, {4096})), 1e-8);
}

TEST(IdentitySuite, ChartFreeIdentitiesDecayOnRandomBodies) {
  // Refinement on one fuzzed body: the chart-free identities converge at grid order.
  std::mt19937_64 rng(17);
  const auto coeffs = random_coefficients(2, rng);
  for (Identity id : fuzz_identities()) {
    std::vector<double> res;
    for (int n : {24, 48, 96}) {
      const auto bb = build_bundle(harmonic_body(build_grid(2, {n, 2 * n}), coeffs));
      res.push_back(check_identity(id, bb, 1.0).max_abs);
    }
    EXPECT_GE(observed_order(res), kMinimumOrder) << identity_name(id);
  }
}

TEST(IdentitySuite, ChartCovariance) {
  // Rotating the ellipse rotates the grid chart; residual maxima stay within a factor 2.
  const auto g = build_grid(1, {256});
  const auto a = build_bundle(ellipse_body(g, 2.0, 0.5));
  const auto b = build_bundle(ellipse_body(g, 2.0, 0.5, 0.3));
  for (Identity id : {Identity::GradInverseForm, Identity::GradCurvaturePower,
                      Identity::RadialPositionGradient}) {
    const double ra = check_identity(id, a, 1.0 / 3.0).max_abs;
    const double rb = check_identity(id, b, 1.0 / 3.0).max_abs;
    EXPECT_LT(rb, 2.0 * ra) << identity_name(id);
    EXPECT_GT(rb, 0.5 * ra) << identity_name(id);
  }
}

TEST(IdentitySuite, ObservedOrder) {
  EXPECT_NEAR(observed_order({1.6e-3, 1e-4, 6.25e-6}), 4.0, 1e-12);
  EXPECT_TRUE(std::isnan(observed_order({1e-3})));
  EXPECT_TRUE(std::isnan(observed_order({1e-13, 1e-14})));
}

TEST(IdentitySuite, FuzzCasesAreSeeded) {
  const auto a = fuzz_cases(5, 3, {16, 32});
  const auto b = fuzz_cases(5, 3, {16, 32});
  const auto g = build_grid(2, {16, 32});
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].make(g).h, b[i].make(g).h);
  EXPECT_NE(a[0].make(g).h, a[1].make(g).h);
}

TEST(IdentitySuite, TableAndJsonMentionEveryReport) {
  const auto reports = run_suite({standard_cases()[0]}, all_identities());
  const auto table = format_table(reports);
  for (Identity id : all_identities()) {
    EXPECT_NE(table.find(std::string(identity_name(id))), std::string::npos);
  }
}
