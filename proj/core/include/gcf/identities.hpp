#pragma once

#include "gcf/geometry.hpp"
#include "gcf/support.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gcf {

/// Tensor identities of a convex immersion. Names describe the left-hand side.
enum class Identity {
  GradInverseForm,       // nabla_i b^jk = -b^jl b^km nabla_i h_lm
  LPositionNorm,         // L|F|^2 = 2 alpha K^a b^ij g_ij - 2 n alpha K^2a
  GradCurvaturePower,    // nabla_i K^a = h_ij <F, F^j>
  LCurvaturePower,       // L K^a = <F, nabla K^a> + n alpha K^a - alpha K^2a H
  LInverseForm,          // L b^pq, gradient-quadratic form
  LSecondForm,           // L h_ij, gradient-quadratic form
  SecondFormTrace,       // alpha K^a b^pq (L h_pq) reproduces L K^a algebraically
  PrincipalFrame,        // b^ii nabla_i K^a = <F, F^i> in a principal orthonormal frame
  RadialPositionGradient,  // <F, nabla |F|^2> = 2 <F, F_i><F, F^i>
  LTraceFunction,        // L f - <F, nabla f>, gradient-quadratic form
};

std::string_view identity_name(Identity id);
Identity identity_from_name(std::string_view name);
const std::vector<Identity>& all_identities();

/// True if the identity relies on the shrinker equation K^alpha = <F, nu>.
bool shrinker_only(Identity id);

/// Shrinker-only identities refuse inputs whose residual reaches max(1e-8, 100 * spacing^4).
double shrinker_gate(const SphereGrid& grid);

/// Pointwise LHS - RHS as a tensor field (rank 0 for scalar identities).
TensorField identity_defect(Identity id, const GeometryBundle& bundle, double alpha);

struct IdentityResidual {
  double max_abs = 0.0;            // largest metric norm of the defect
  double shrinker_residual = 0.0;  // of the input
  double gate = 0.0;
  bool applicable = true;
};

IdentityResidual check_identity(Identity id, const GeometryBundle& bundle, double alpha);

/// How a report decides pass/fail.
enum class CheckMode {
  Roundoff,    // every residual <= kRoundoffThreshold
  Refinement,  // finest residual <= C * spacing^4 and observed order >= 3
  Fixed,       // every residual < fixed_threshold
};

inline constexpr double kRoundoffThreshold = 1e-9;
inline constexpr double kMinimumOrder = 3.0;

/// Residual constant C of the refinement threshold C * spacing^4.
double refinement_constant(Identity id);

struct BodyCase {
  std::string name;
  int n = 1;
  double alpha = 1.0;
  std::function<SupportField(const SphereGrid&)> make;
  std::vector<std::vector<int>> resolutions;
  CheckMode mode = CheckMode::Refinement;
  double fixed_threshold = 0.0;
};

struct IdentityReport {
  Identity id = Identity::GradInverseForm;
  std::string body;
  double alpha = 0.0;
  std::vector<std::vector<int>> resolutions;
  std::vector<double> residuals;
  double order = 0.0;  // NaN when not estimated
  double threshold = 0.0;
  bool applicable = true;
  bool passed = false;
};

/// Smallest log2 ratio of successive residuals; NaN for fewer than two values or when the
/// coarse residual is already at roundoff.
double observed_order(const std::vector<double>& residuals);

IdentityReport run_identity(Identity id, const BodyCase& body);

std::vector<IdentityReport> run_suite(const std::vector<BodyCase>& bodies,
                                      const std::vector<Identity>& ids);

/// Standard cases: unit sphere (n = 1, 2), the alpha = 1/3 ellipse with ab = 1, and an ODE
/// shrinker sampled from the shooting solver.
std::vector<BodyCase> standard_cases();

/// Residual bound for the chart-free identities on fuzzed bodies.
inline constexpr double kFuzzThreshold = 1e-5;

/// `count` random convex n = 2 bodies drawn from `seed`, one resolution, CheckMode::Fixed.
std::vector<BodyCase> fuzz_cases(std::uint64_t seed, int count, std::vector<int> resolution);

/// Identities valid on any convex body, run on fuzz_cases.
std::vector<Identity> fuzz_identities();

std::string format_table(const std::vector<IdentityReport>& reports);

}  // namespace gcf
