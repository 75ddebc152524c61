#include "gcf/inequality.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gcf;

TEST(I1, Values) {
  EXPECT_DOUBLE_EQ(I1(2, 1.0), 0.5);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(I1(n, 1.0 / n + 1e-12), 1.0 - 1.0 / n, 1e-10);
    EXPECT_NEAR(I1(n, 1.0 + std::sqrt((n - 1.0) / n)), 0.0, 1e-12);
  }
}

TEST(I1, ZeroLocation) {
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(locate_I1_zero(n), 1.0 + std::sqrt((n - 1.0) / n), 1e-9) << n;
  }
}

TEST(I1, PositiveOnOpenRangeForPlanesAndUp) {
  for (int n = 2; n <= 10; ++n) {
    for (int k = 0; k < 10000; ++k) {
      const double a = 1.0 / n + (k + 0.5) / 10000.0;
      ASSERT_GT(I1(n, a), 0.0) << n << " " << a;
    }
  }
  // n = 1: I1 = -(alpha - 1)^2 / alpha is never positive.
  EXPECT_LT(I1(1, 1.5), 0.0);
}

TEST(J, FormsAgree) {
  // Exact rational evaluation of both forms at (2, 1, 1) gives 1/4.
  EXPECT_NEAR(J_def(2, 1.0, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(J_closed(2, 1.0, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(J_def(2, 1.0, 1.0), J_closed(2, 1.0, 1.0), 1e-12);
  for (int n = 1; n <= 10; ++n) {
    for (double a : {1.0 / n + 0.01, 1.0, 1.0 + 1.0 / n - 0.01}) {
      for (double t : {0.01, 0.5, 1.0, 3.0, 10.0}) {
        const double d = J_def(n, a, t);
        EXPECT_LE(std::abs(J_discrepancy(n, a, t)), 1e-11 * (1.0 + std::abs(d)));
        EXPECT_GE(d, J_bound(n, a) - 1e-12);
      }
    }
  }
}

TEST(J, BoundAttainedWhereSquareVanishes) {
  for (int n = 1; n <= 10; ++n) {
    const double a = 1.0 / n + 0.37;
    const double theta = n * a - 1.0;
    EXPECT_NEAR(J_closed(n, a, theta), J_bound(n, a), 1e-13);
  }
}

TEST(J, RejectsNonPositiveTheta) {
  EXPECT_ANY_THROW(J_def(2, 1.0, 0.0));
  EXPECT_ANY_THROW(J_closed(2, 1.0, -1.0));
}

TEST(YPoly, EndpointsAndCertificate) {
  EXPECT_DOUBLE_EQ(y_poly(2, 1.0), 3.0);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(y_poly(n, 1.0 / n), 3.0 / n - 3.0 / (n * n), 1e-12);
    EXPECT_NEAR(y_poly(n, 1.0 + 1.0 / n), 3.0 * n - 2.0 - 3.0 / n - 3.0 / (n * n), 1e-12);
    const auto c = y_certificate(n);
    EXPECT_TRUE(c.concave);
    EXPECT_TRUE(c.endpoints_match);
    EXPECT_EQ(c.nonnegative, n >= 2) << n;
  }
  const auto c2 = y_certificate(2);
  EXPECT_EQ(c2.lower_num * 4, 3 * c2.lower_den);  // 3/2 - 3/4 = 3/4
}

TEST(Scan, SmallScanSummary) {
  ScanOptions o;
  o.n_max = 3;
  o.alpha_samples = 50;
  o.theta_samples = 50;
  const auto s = scan_inequalities(o);
  ASSERT_EQ(s.dims.size(), 3u);
  EXPECT_LE(s.max_form_discrepancy, kFormTolerance);
  for (const auto& d : s.dims) {
    const auto v = judge(d);
    EXPECT_TRUE(v.forms_agree);
    EXPECT_TRUE(v.bound_holds);
    EXPECT_TRUE(v.I1_zero_located);
    EXPECT_TRUE(v.y_endpoints);
    EXPECT_EQ(v.all(), d.n >= 2) << d.n;
  }
}

TEST(Params, Beta) {
  const auto p = make_params(2, 1.0, 1.5);
  EXPECT_DOUBLE_EQ(p.beta, 0.5);
  EXPECT_LT(pogorelov_beta(3, 0.2), 0.0);
  EXPECT_GT(pogorelov_beta(3, 0.5), 0.0);
  EXPECT_LT(pogorelov_beta(3, 100.0), 1.0);
}
