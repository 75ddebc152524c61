#include "gcf/inequality.hpp"

#include "gcf/error.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcf {

namespace {

using Rational = boost::rational<std::int64_t>;

Rational y_exact(int n, const Rational& a) {
  return Rational(-(2 * n + 3)) * a * a + Rational(5 * (n + 1)) * a - Rational(5);
}

double neumaier(std::initializer_list<double> terms) {
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

void require_args(int n, double alpha) {
  if (n < 1) throw ContractError("n must be a positive integer");
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
}

}  // namespace

double pogorelov_beta(int n, double alpha) {
  require_args(n, alpha);
  return (n * alpha - 1.0) / (n * alpha);
}

PogorelovParams make_params(int n, double alpha, double theta) {
  if (!(theta > 0.0)) throw ContractError("theta must be positive");
  return {n, alpha, pogorelov_beta(n, alpha), theta};
}

double I1(int n, double alpha) { return pogorelov_beta(n, alpha) + 1.0 - alpha; }

double J_def(int n, double alpha, double theta) {
  const PogorelovParams p = make_params(n, alpha, theta);
  const double d = p.beta - theta;
  return 2.0 * alpha * d + alpha * (1.0 / (theta * theta) + 2.0 / theta) * d * d + p.beta;
}

double J_closed(int n, double alpha, double theta) {
  const PogorelovParams p = make_params(n, alpha, theta);
  const double sq = p.beta / theta - 1.0 / (n * alpha);
  return p.beta * (1.0 - alpha) + 1.0 / n + alpha * sq * sq - 1.0 / (double(n) * n * alpha);
}

double J_bound(int n, double alpha) {
  return pogorelov_beta(n, alpha) * (1.0 - alpha + 1.0 / n);
}

double J_discrepancy(int n, double alpha, double theta) {
  const PogorelovParams p = make_params(n, alpha, theta);
  const double d = p.beta - theta;
  const double sq = p.beta / theta - 1.0 / (n * alpha);
  return neumaier({2.0 * alpha * d, alpha * d * d / (theta * theta), 2.0 * alpha * d * d / theta,
                   p.beta, -p.beta * (1.0 - alpha), -1.0 / n, -alpha * sq * sq,
                   1.0 / (double(n) * n * alpha)});
}

double y_poly(int n, double alpha) {
  if (n < 1) throw ContractError("n must be a positive integer");
  return -(2.0 * n + 3.0) * alpha * alpha + 5.0 * (n + 1.0) * alpha - 5.0;
}

YCertificate y_certificate(int n) {
  if (n < 1) throw ContractError("n must be a positive integer");
  YCertificate c;
  c.n = n;
  const Rational lo = y_exact(n, Rational(1, n));
  const Rational hi = y_exact(n, Rational(1) + Rational(1, n));
  c.lower_num = lo.numerator();
  c.lower_den = lo.denominator();
  c.upper_num = hi.numerator();
  c.upper_den = hi.denominator();
  c.concave = -(2 * n + 3) < 0;
  const Rational inv(1, n);
  const Rational lo_expected = Rational(3) * inv - Rational(3) * inv * inv;
  const Rational hi_expected = Rational(3 * n - 2) - Rational(3) * inv - Rational(3) * inv * inv;
  c.endpoints_match = lo == lo_expected && hi == hi_expected;
  c.nonnegative = c.concave && lo >= 0 && hi >= 0;
  return c;
}

double locate_I1_zero(int n) {
  if (n < 1) throw ContractError("n must be a positive integer");
  if (n == 1) {
    // I1 = -(alpha - 1)^2 / alpha; its derivative 1/alpha^2 - 1 changes sign at the root.
    double a = 0.5, b = 2.0;
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      (1.0 / (m * m) - 1.0 > 0.0 ? a : b) = m;
    }
    return 0.5 * (a + b);
  }
  double a = 1.0 + 1.0 / n, b = 2.0;
  double fa = I1(n, a);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = I1(n, m);
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

ScanSummary scan_inequalities(const ScanOptions& opt) {
  if (opt.n_max < 1 || opt.alpha_samples < 1 || opt.theta_samples < 1 || !(opt.theta_max > 0.0)) {
    throw ContractError("invalid scan options");
  }
  ScanSummary s;
  s.options = opt;
  s.min_J_margin = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= opt.n_max; ++n) {
    DimensionSummary d;
    d.n = n;
    d.min_J_margin = std::numeric_limits<double>::infinity();
    for (int ia = 0; ia < opt.alpha_samples; ++ia) {
      const double alpha = 1.0 / n + (ia + 0.5) / opt.alpha_samples;
      const double bound = J_bound(n, alpha);
      for (int it = 0; it < opt.theta_samples; ++it) {
        const double theta = opt.theta_max * (it + 1) / opt.theta_samples;
        const double jd = J_def(n, alpha, theta);
        const double disc = std::abs(J_discrepancy(n, alpha, theta)) / (1.0 + std::abs(jd));
        d.max_form_discrepancy = std::max(d.max_form_discrepancy, disc);
        d.min_J_margin = std::min(d.min_J_margin, jd - bound);
      }
    }
    constexpr int kFine = 10000;
    d.min_I1 = std::numeric_limits<double>::infinity();
    d.min_y = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kFine; ++k) {
      d.min_I1 = std::min(d.min_I1, I1(n, 1.0 / n + (k + 0.5) / kFine));
      d.min_y = std::min(d.min_y, y_poly(n, 1.0 / n + double(k) / (kFine - 1)));
    }
    d.I1_zero = locate_I1_zero(n);
    d.I1_zero_expected = 1.0 + std::sqrt((n - 1.0) / n);
    d.certificate = y_certificate(n);
    s.max_form_discrepancy = std::max(s.max_form_discrepancy, d.max_form_discrepancy);
    s.min_J_margin = std::min(s.min_J_margin, d.min_J_margin);
    s.dims.push_back(d);
  }
  return s;
}

DimensionVerdict judge(const DimensionSummary& d) {
  DimensionVerdict v;
  v.forms_agree = d.max_form_discrepancy <= kFormTolerance;
  v.bound_holds = d.min_J_margin >= -kBoundSlack;
  v.I1_positive = d.min_I1 > 0.0;
  v.I1_zero_located = std::abs(d.I1_zero - d.I1_zero_expected) <= kZeroTolerance;
  v.y_nonnegative = d.min_y >= -kYSlack && d.certificate.nonnegative;
  v.y_endpoints = d.certificate.endpoints_match;
  return v;
}

}  // namespace gcf
