#include "gcf/bodies.hpp"
#include "gcf/error.hpp"
#include "gcf/flow.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace gcf;

namespace {

constexpr double kPi = std::numbers::pi;

FlowConfig round_config(int n, double alpha, double r) {
  FlowConfig c;
  c.n = n;
  c.alpha = alpha;
  c.resolution = n == 1 ? std::vector<int>{64} : std::vector<int>{24, 48};
  c.normalization = Normalization::None;
  c.initial = InitialBody::Sphere;
  c.radius = r;
  return c;
}

// Unnormalized round flow at a fixed dt: h stays constant in space, r' = -r^(-n alpha).
// Explicit Euler has global error O(dt), so dt is far below the stability limit.
double evolve_round(int n, double alpha, double r0, double dt, long steps) {
  auto cfg = round_config(n, alpha, r0);
  cfg.resolution = n == 1 ? std::vector<int>{32} : std::vector<int>{16, 32};
  FlowState s{initial_body(cfg), 0.0, 0, 1.0};
  for (long i = 0; i < steps; ++i) s = advance(s, cfg, dt);
  double spread = 0.0;
  for (double h : s.body.h) spread = std::max(spread, std::abs(h - s.body.h[0]));
  EXPECT_LT(spread, 1e-12);
  return s.body.h[0];
}

}  // namespace

TEST(Step, CircleContractionLaw) {
  const auto cfg = round_config(1, 1.0, 2.0);
  FlowState s{initial_body(cfg), 0.0, 0, 1.0};
  const auto next = step(s, cfg);
  const double dt = next.time;
  EXPECT_GT(dt, 0.0);
  for (double h : next.body.h) EXPECT_NEAR(h, 2.0 - dt / 2.0, 1e-14);
}

TEST(Step, SphereMatchesClosedForm) {
  // h = r, n = 2, alpha = 1: r(t) = (r0^3 - 3t)^(1/3).
  const double dt = 2e-6, t = 50000 * dt;
  const double r = evolve_round(2, 1.0, 1.5, dt, 50000);
  EXPECT_NEAR(r, std::cbrt(1.5 * 1.5 * 1.5 - 3.0 * t), 1e-6);
}

TEST(Step, CircleMatchesClosedFormForPowerFlow) {
  // n = 1, r' = -r^-alpha: r(t) = (r0^(1+alpha) - (1+alpha) t)^(1/(1+alpha)), extinct at t = 0.4.
  const double alpha = 1.5, dt = 2e-6, t = 100000 * dt;
  const double r = evolve_round(1, alpha, 1.0, dt, 100000);
  EXPECT_NEAR(r, std::pow(1.0 - (1.0 + alpha) * t, 1.0 / (1.0 + alpha)), 1e-6);
}

TEST(Step, ComparisonPrincipleForRoundBodies) {
  const auto c1 = round_config(2, 1.0, 0.8);
  const auto c2 = round_config(2, 1.0, 1.0);
  FlowState s1{initial_body(c1), 0.0, 0, 1.0};
  FlowState s2{initial_body(c2), 0.0, 0, 1.0};
  // Same time step for both bodies: the smaller one sets the stability limit.
  const double dt = stable_timestep(s1.body, radii_matrix(s1.body), 1.0, 0.5);
  for (int i = 0; i < 200; ++i) {
    s1 = advance(s1, c1, dt);
    s2 = advance(s2, c2, dt);
    ASSERT_LT(s1.body.h[0], s2.body.h[0]);
  }
}

TEST(Step, UnnormalizedVolumeDecreases) {
  FlowConfig c;
  c.n = 2;
  c.resolution = {24, 48};
  c.normalization = Normalization::None;
  c.initial = InitialBody::Random;
  FlowState s{initial_body(c), 0.0, 0, 1.0};
  double v = enclosed_volume(s.body);
  for (int i = 0; i < 50; ++i) {
    s = step(s, c);
    const double nv = enclosed_volume(s.body);
    ASSERT_LT(nv, v);
    v = nv;
  }
}

TEST(Step, NonConvexCandidateHalvesTimestep) {
  const auto g = build_grid(1, {64});
  const auto cfg = round_config(1, 1.0, 1.0);
  FlowState s{ellipse_body(g, 2.0, 0.5), 0.0, 0, 1.0};
  // dt = 1 would drive h negative at the ends of the minor axis; the retry halves it.
  const auto next = advance(s, cfg, 1.0);
  EXPECT_LT(next.time, 1.0);
  EXPECT_GT(min_radius(next.body), 0.0);
}

TEST(Step, CollapseAfterRepeatedRejection) {
  const auto cfg = round_config(1, 1.0, 1e-4);
  FlowState s{initial_body(cfg), 0.0, 0, 1.0};
  EXPECT_THROW(advance(s, cfg, 1e12), CollapseError);
}

TEST(Normalize, ScalesToUnitBallVolume) {
  const auto g = build_grid(1, {64});
  FlowState s{sphere_body(g, 2.0), 0.0, 0, 1.0};
  const auto n = normalize(s);
  EXPECT_NEAR(n.scale, 0.5, 1e-12);
  for (double h : n.body.h) EXPECT_NEAR(h, 1.0, 1e-12);

  std::mt19937_64 rng(3);
  const auto g2 = build_grid(2, {24, 48});
  FlowState r{random_convex_body(g2, rng), 0.0, 0, 1.0};
  const auto once = normalize(r, true);
  EXPECT_NEAR(enclosed_volume(once.body), 4.0 * kPi / 3.0, 1e-10 * 4.0);
  const auto twice = normalize(once, true);
  for (std::size_t k = 0; k < g2.size(); ++k) EXPECT_NEAR(twice.body.h[k], once.body.h[k], 1e-12);
}

TEST(Normalize, SteinerPointOfTranslatedSphere) {
  const auto g = build_grid(2, {24, 48});
  const Eigen::Vector3d c(0.1, -0.2, 0.05);
  auto body = sphere_body(g, 1.0);
  for (std::size_t k = 0; k < g.size(); ++k) body.h[k] += c.dot(g.normal(k));
  EXPECT_LT((steiner_point(body) - c).norm(), 1e-12);
}

TEST(Roundness, SphereAndEllipsoid) {
  const auto sphere = build_bundle(sphere_body(build_grid(2, {24, 48})));
  const auto r = roundness(sphere);
  EXPECT_NEAR(r.pinching_max, 0.0, 1e-20);
  for (char v : r.in_v) EXPECT_TRUE(v);
  const auto circle = build_bundle(ellipse_body(build_grid(1, {64}), 2.0, 0.5));
  for (double v : roundness(circle).pinching) EXPECT_EQ(v, 0.0);
  const auto e = build_bundle(ellipsoid_body(build_grid(2, {48, 96}), {1.3, 1.0, 0.8}));
  const auto re = roundness(e);
  EXPECT_GT(re.pinching_max, 0.0);
  for (std::size_t k = 0; k < e.K.size(); ++k) {
    const double a = e.curvatures[k][0], b = e.curvatures[k][1];
    EXPECT_NEAR(re.pinching[k], 2.0 * std::pow(a / b - b / a, 2), 1e-12);
  }
}

TEST(Run, EllipseShrinkerIsSelfSimilar) {
  FlowConfig c;
  c.n = 1;
  c.alpha = 1.0 / 3.0;
  c.resolution = {256};
  c.initial = InitialBody::Ellipsoid;
  c.axes = {2.0, 0.5, 1.0};
  c.max_steps = 2000;
  const auto res = run(c);
  const auto g = build_grid(1, {256});
  const auto start = ellipse_body(g, 2.0, 0.5);
  double d = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    d = std::max(d, std::abs(res.final_state.body.h[k] - start.h[k]));
  }
  EXPECT_EQ(res.stop_reason, "max-steps");
  EXPECT_LT(d, 1e-4);
}

TEST(Run, LateStagePinchingDoesNotGrow) {
  FlowConfig c;
  c.n = 1;
  c.alpha = 1.5;
  c.resolution = {128};
  c.initial = InitialBody::Perturbed;
  c.harmonics = {0.0, 0.0, 0.05, 0.0, 0.02, 0.0};
  c.record_every = 200;
  c.roundness_tolerance = 1e-8;
  const auto res = run(c);
  EXPECT_TRUE(res.converged);
  double prev = 0.0;
  for (const auto& r : res.records) {
    const double ratio = r.lambda_ratio - 1.0;
    if (prev > 0.0 && prev < 1e-3) {
      EXPECT_LE(ratio, prev + 1e-8);
    }
    prev = ratio;
  }
}

TEST(Run, UnnormalizedFlowEndsByVolumeOrCollapse) {
  FlowConfig c;
  c.n = 1;
  c.alpha = 1.0;
  c.resolution = {64};
  c.normalization = Normalization::None;
  c.initial = InitialBody::Perturbed;
  c.harmonics = {0.0, 0.0, 0.3, 0.0, 0.1, 0.0};
  c.min_volume = 1e-3;
  c.roundness_tolerance = 1e-30;
  const auto res = run(c);
  EXPECT_TRUE(res.stop_reason == "min-volume" || res.stop_reason == "collapse");
  EXPECT_FALSE(res.converged);
}

TEST(Run, RecordsAreFiniteAndDeterministic) {
  FlowConfig c;
  c.n = 2;
  c.resolution = {16, 32};
  c.initial = InitialBody::Random;
  c.seed = 21;
  c.max_steps = 300;
  c.record_every = 100;
  const auto a = run(c);
  const auto b = run(c);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& r = a.records[i];
    for (double v : {r.t, r.volume, r.k_min, r.k_max, r.lambda_ratio, r.lambda_max, r.residual_max,
                     r.f_max, r.w_max, r.umbilicity_at_fmax, r.grad_x_norm2_at_fmax}) {
      EXPECT_TRUE(std::isfinite(v));
    }
    EXPECT_GE(r.lambda_max, 0.0);
    EXPECT_EQ(r.t, b.records[i].t);
    EXPECT_EQ(r.residual_max, b.records[i].residual_max);
  }
  EXPECT_EQ(a.final_state.body.h, b.final_state.body.h);
}

TEST(Run, SnapshotsFollowCadence) {
  FlowConfig c;
  c.n = 1;
  c.resolution = {32};
  c.initial = InitialBody::Perturbed;
  c.harmonics = {0.0, 0.0, 0.1};
  c.max_steps = 100;
  c.snapshot_every = 25;
  std::vector<long> steps;
  run(c, [&](const FlowState& s) { steps.push_back(s.step); });
  EXPECT_EQ(steps, (std::vector<long>{0, 25, 50, 75, 100}));
}
