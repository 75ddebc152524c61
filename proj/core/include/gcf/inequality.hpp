#pragma once

#include <cstdint>
#include <vector>

namespace gcf {

/// Scalars of the maximum-point argument for dimension n, exponent alpha and curvature ratio
/// theta = lambda_i / lambda_min.
struct PogorelovParams {
  int n = 2;
  double alpha = 1.0;
  double beta = 0.5;   // (n alpha - 1) / (n alpha)
  double theta = 1.0;
};

PogorelovParams make_params(int n, double alpha, double theta);

double pogorelov_beta(int n, double alpha);

/// beta + 1 - alpha.
double I1(int n, double alpha);

/// 2 alpha (beta - theta) + alpha (theta^-2 + 2 theta^-1)(beta - theta)^2 + beta.
double J_def(int n, double alpha, double theta);

/// beta (1 - alpha) + 1/n + alpha (beta / theta - 1/(n alpha))^2 - 1/(n^2 alpha).
double J_closed(int n, double alpha, double theta);

/// beta (1 - alpha + 1/n), the minimum of J over theta.
double J_bound(int n, double alpha);

/// J_def - J_closed summed term by term with compensated summation.
double J_discrepancy(int n, double alpha, double theta);

/// -(2n + 3) alpha^2 + 5(n + 1) alpha - 5.
double y_poly(int n, double alpha);

/// Exact rational certificate for y on [1/n, 1 + 1/n].
struct YCertificate {
  int n = 0;
  std::int64_t lower_num = 0, lower_den = 1;  // y(1/n)
  std::int64_t upper_num = 0, upper_den = 1;  // y(1 + 1/n)
  bool concave = false;          // leading coefficient < 0
  bool endpoints_match = false;  // y(1/n) = 3/n - 3/n^2 and y(1+1/n) = 3n - 2 - 3/n - 3/n^2
  bool nonnegative = false;      // concave and both endpoints >= 0
};

YCertificate y_certificate(int n);

/// Zero of I1 above the exponent range: bisection on [1 + 1/n, 2] for n >= 2. For n = 1 the zero
/// is the double root alpha = 1, located by bisecting dI1/dalpha.
double locate_I1_zero(int n);

struct ScanOptions {
  int n_max = 10;
  int alpha_samples = 1000;
  int theta_samples = 1000;
  double theta_max = 10.0;
};

struct DimensionSummary {
  int n = 0;
  double max_form_discrepancy = 0.0;  // |J_def - J_closed| / (1 + |J_def|)
  double min_J_margin = 0.0;          // min J - beta (1 - alpha + 1/n)
  double min_I1 = 0.0;                // over 10^4 interior alpha
  double I1_zero = 0.0;
  double I1_zero_expected = 0.0;      // 1 + sqrt((n - 1)/n)
  double min_y = 0.0;                 // over 10^4 alpha in the closed interval
  YCertificate certificate;
};

struct ScanSummary {
  ScanOptions options;
  std::vector<DimensionSummary> dims;
  double max_form_discrepancy = 0.0;
  double min_J_margin = 0.0;
};

inline constexpr double kFormTolerance = 1e-11;
inline constexpr double kBoundSlack = 1e-12;
inline constexpr double kZeroTolerance = 1e-9;
inline constexpr double kYSlack = 1e-12;

/// Pass/fail of each scanned property for one dimension.
struct DimensionVerdict {
  bool forms_agree = false;   // max_form_discrepancy <= kFormTolerance
  bool bound_holds = false;   // min_J_margin >= -kBoundSlack
  bool I1_positive = false;   // min_I1 > 0
  bool I1_zero_located = false;
  bool y_nonnegative = false; // min_y >= -kYSlack and the certificate holds
  bool y_endpoints = false;
  bool all() const {
    return forms_agree && bound_holds && I1_positive && I1_zero_located && y_nonnegative &&
           y_endpoints;
  }
};

DimensionVerdict judge(const DimensionSummary& d);

/// alpha_k = 1/n + (k + 1/2)/samples (open range), theta_j = theta_max (j + 1)/samples.
ScanSummary scan_inequalities(const ScanOptions& options);

}  // namespace gcf
