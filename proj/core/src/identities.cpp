#include "gcf/identities.hpp"

#include "gcf/bodies.hpp"
#include "gcf/error.hpp"
#include "gcf/shrinker.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

namespace gcf {

namespace {

constexpr double kRoundoffFloor = 1e-11;

struct Common {
  int n;
  double alpha;
  std::vector<double> ka;
  TensorField grad_ka;  // alpha K^a b^pq nabla_i h_pq
  TensorField grad_b;   // -b^jl b^km nabla_i h_lm
};

Common make_common(const GeometryBundle& bb, double alpha) {
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  const int n = bb.dim;
  Common c{n, alpha, curvature_power(bb, alpha),
           TensorField(n, {Slot::Co}, bb.K.size()),
           TensorField(n, {Slot::Co, Slot::Contra, Slot::Contra}, bb.K.size())};
  for (std::size_t k = 0; k < bb.K.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      double t = 0.0;
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) t += bb.b.at(k, p, q) * bb.grad_h.at(k, i, p, q);
      }
      c.grad_ka(k, i) = alpha * c.ka[k] * t;
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            for (int r = 0; r < n; ++r) {
              acc += bb.b.at(k, j, l) * bb.b.at(k, m, r) * bb.grad_h.at(k, i, l, r);
            }
          }
          c.grad_b.at(k, i, j, m) = -acc;
        }
      }
    }
  }
  return c;
}

// t_i = b^rs nabla_i h_rs.
double trace_grad(const GeometryBundle& bb, std::size_t k, int i) {
  double t = 0.0;
  for (int r = 0; r < bb.dim; ++r) {
    for (int s = 0; s < bb.dim; ++s) t += bb.b.at(k, r, s) * bb.grad_h.at(k, i, r, s);
  }
  return t;
}

// P_ij = tr(b nabla_i h b nabla_j h).
double quad_grad(const GeometryBundle& bb, std::size_t k, int i, int j) {
  const int n = bb.dim;
  double acc = 0.0;
  for (int p = 0; p < n; ++p) {
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        for (int q = 0; q < n; ++q) {
          acc += bb.b.at(k, p, r) * bb.grad_h.at(k, i, r, s) * bb.b.at(k, s, q) *
                 bb.grad_h.at(k, j, q, p);
        }
      }
    }
  }
  return acc;
}

// (b g b)^{rs}.
double bgb(const GeometryBundle& bb, std::size_t k, int r, int s) {
  double acc = 0.0;
  for (int p = 0; p < bb.dim; ++p) {
    for (int q = 0; q < bb.dim; ++q) acc += bb.b.at(k, r, p) * bb.g.at(k, p, q) * bb.b.at(k, q, s);
  }
  return acc;
}

double radial(const GeometryBundle& bb, std::size_t k, const TensorField& covector) {
  double acc = 0.0;
  for (int i = 0; i < bb.dim; ++i) acc += bb.x_upper(k, i) * covector(k, i);
  return acc;
}

double rhs_curvature_power(const GeometryBundle& bb, const Common& c, std::size_t k) {
  const double a = c.alpha;
  return radial(bb, k, c.grad_ka) + c.n * a * c.ka[k] - a * c.ka[k] * c.ka[k] * bb.H[k];
}

double rhs_second_form(const GeometryBundle& bb, const Common& c, std::size_t k, int i, int j) {
  const int n = c.n;
  const double a = c.alpha;
  const double ka = c.ka[k];
  double transport = 0.0;
  for (int m = 0; m < n; ++m) transport += bb.x_upper(k, m) * bb.grad_h.at(k, m, i, j);
  double hh = 0.0;
  for (int m = 0; m < n; ++m) {
    for (int l = 0; l < n; ++l) hh += bb.h.at(k, i, m) * bb.g_inv.at(k, m, l) * bb.h.at(k, l, j);
  }
  return -a * a * ka * trace_grad(bb, k, i) * trace_grad(bb, k, j) +
         a * ka * quad_grad(bb, k, i, j) + transport + bb.h.at(k, i, j) +
         (n * a - 1.0) * hh * ka - a * ka * bb.H[k] * bb.h.at(k, i, j);
}

TensorField scalar_field(const std::vector<double>& v, int dim) { return scalar_tensor(dim, v); }

TensorField defect_grad_inverse_form(const GeometryBundle& bb, const Common& c) {
  return difference(covariant_derivative(bb.grid, bb.b, bb.gamma), c.grad_b);
}

TensorField defect_l_position_norm(const GeometryBundle& bb, const Common& c) {
  auto lhs = apply_L(bb.x_norm2, bb, c.alpha);
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    double tr = 0.0;
    for (int p = 0; p < c.n * c.n; ++p) tr += bb.b(k, p) * bb.g(k, p);
    lhs[k] -= 2.0 * c.alpha * c.ka[k] * tr - 2.0 * c.n * c.alpha * c.ka[k] * c.ka[k];
  }
  return scalar_field(lhs, c.n);
}

TensorField defect_grad_curvature_power(const GeometryBundle& bb, const Common& c) {
  TensorField d = gradient(c.ka, bb);
  for (std::size_t k = 0; k < bb.K.size(); ++k) {
    for (int i = 0; i < c.n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < c.n; ++j) acc += bb.h.at(k, i, j) * bb.x_upper(k, j);
      d(k, i) -= acc;
    }
  }
  return d;
}

TensorField defect_l_curvature_power(const GeometryBundle& bb, const Common& c) {
  auto lhs = apply_L(c.ka, bb, c.alpha);
  for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] -= rhs_curvature_power(bb, c, k);
  return scalar_field(lhs, c.n);
}

TensorField defect_l_inverse_form(const GeometryBundle& bb, const Common& c) {
  TensorField d = apply_L_tensor(bb.b, bb, c.alpha);
  const int n = c.n;
  const double a = c.alpha;
  for (std::size_t k = 0; k < bb.K.size(); ++k) {
    const double ka = c.ka[k];
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        double grad_sq = 0.0, quad = 0.0;
        for (int r = 0; r < n; ++r) {
          for (int s = 0; s < n; ++s) {
            const double bb_rs = bb.b.at(k, p, r) * bb.b.at(k, q, s);
            grad_sq += bb_rs * c.grad_ka(k, r) * c.grad_ka(k, s);
            quad += bb_rs * quad_grad(bb, k, r, s);
          }
        }
        double transport = 0.0;
        for (int i = 0; i < n; ++i) transport += bb.x_upper(k, i) * c.grad_b.at(k, i, p, q);
        const double rhs = grad_sq / ka + a * ka * quad + transport - bb.b.at(k, p, q) -
                           (n * a - 1.0) * bb.g_inv.at(k, p, q) * ka +
                           a * ka * bb.H[k] * bb.b.at(k, p, q);
        d.at(k, p, q) -= rhs;
      }
    }
  }
  return d;
}

TensorField defect_l_second_form(const GeometryBundle& bb, const Common& c) {
  TensorField d = apply_L_tensor(bb.h, bb, c.alpha);
  for (std::size_t k = 0; k < bb.K.size(); ++k) {
    for (int i = 0; i < c.n; ++i) {
      for (int j = 0; j < c.n; ++j) d.at(k, i, j) -= rhs_second_form(bb, c, k, i, j);
    }
  }
  return d;
}

TensorField defect_second_form_trace(const GeometryBundle& bb, const Common& c) {
  const int n = c.n;
  const double a = c.alpha;
  std::vector<double> out(bb.K.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double ka = c.ka[k];
    double contracted = 0.0, cubic = 0.0, quad = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double bij = bb.b.at(k, i, j);
        contracted += bij * rhs_second_form(bb, c, k, i, j);
        cubic += bij * trace_grad(bb, k, i) * trace_grad(bb, k, j);
        quad += bij * quad_grad(bb, k, i, j);
      }
    }
    const double lhs = a * ka * contracted + a * a * a * ka * ka * cubic - a * a * ka * ka * quad;
    out[k] = lhs - rhs_curvature_power(bb, c, k);
  }
  return scalar_field(out, n);
}

TensorField defect_principal_frame(const GeometryBundle& bb, const Common& c) {
  const TensorField dk = gradient(c.ka, bb);
  std::vector<double> out(bb.K.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (c.n == 1) {
      const double e = 1.0 / std::sqrt(bb.g(k, 0));
      const double lambda = bb.h(k, 0) / bb.g(k, 0);
      out[k] = std::abs(e * dk(k, 0) / lambda - e * bb.x_lower(k, 0));
      continue;
    }
    Eigen::Matrix2d hm, gm;
    hm << bb.h(k, 0), bb.h(k, 1), bb.h(k, 2), bb.h(k, 3);
    gm << bb.g(k, 0), bb.g(k, 1), bb.g(k, 2), bb.g(k, 3);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(hm, gm);
    double acc = 0.0;
    for (int a = 0; a < 2; ++a) {
      const Eigen::Vector2d e = es.eigenvectors().col(a);  // e^T g e = 1
      const double lambda = es.eigenvalues()(a);
      const double lhs = (e(0) * dk(k, 0) + e(1) * dk(k, 1)) / lambda;
      const double rhs = e(0) * bb.x_lower(k, 0) + e(1) * bb.x_lower(k, 1);
      acc += (lhs - rhs) * (lhs - rhs);
    }
    out[k] = std::sqrt(acc);
  }
  return scalar_field(out, c.n);
}

TensorField defect_radial_position_gradient(const GeometryBundle& bb, const Common& c) {
  auto lhs = radial_derivative(bb.x_norm2, bb);
  for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] -= 2.0 * radial(bb, k, bb.x_lower);
  return scalar_field(lhs, c.n);
}

TensorField defect_l_trace_function(const GeometryBundle& bb, const Common& c) {
  const int n = c.n;
  const double a = c.alpha;
  std::vector<double> f(bb.K.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    double tr = 0.0;
    for (int p = 0; p < n * n; ++p) tr += bb.b(k, p) * bb.g(k, p);
    f[k] = c.ka[k] * tr - (n * a - 1.0) / (2.0 * a) * bb.x_norm2[k];
  }
  auto lhs = apply_L(f, bb, a);
  const auto transport = radial_derivative(f, bb);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double ka = c.ka[k];
    double mixed = 0.0, grad_sq = 0.0, quad = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double gdb = 0.0;
        for (int p = 0; p < n; ++p) {
          for (int q = 0; q < n; ++q) gdb += bb.g.at(k, p, q) * c.grad_b.at(k, j, p, q);
        }
        mixed += bb.b.at(k, i, j) * c.grad_ka(k, i) * ka * gdb;
        const double w = bgb(bb, k, i, j);
        grad_sq += w * c.grad_ka(k, i) * c.grad_ka(k, j);
        quad += w * quad_grad(bb, k, i, j);
      }
    }
    const double rhs = 2.0 * a * mixed + grad_sq + a * ka * ka * quad +
                       (n - 1.0 / a) * radial(bb, k, bb.x_lower);
    lhs[k] -= transport[k] + rhs;
  }
  return scalar_field(lhs, n);
}

}  // namespace

std::string_view identity_name(Identity id) {
  switch (id) {
    case Identity::GradInverseForm: return "grad_inverse_form";
    case Identity::LPositionNorm: return "L_position_norm";
    case Identity::GradCurvaturePower: return "grad_curvature_power";
    case Identity::LCurvaturePower: return "L_curvature_power";
    case Identity::LInverseForm: return "L_inverse_form";
    case Identity::LSecondForm: return "L_second_form";
    case Identity::SecondFormTrace: return "second_form_trace";
    case Identity::PrincipalFrame: return "principal_frame";
    case Identity::RadialPositionGradient: return "radial_position_gradient";
    case Identity::LTraceFunction: return "L_trace_function";
  }
  return "unknown";
}

const std::vector<Identity>& all_identities() {
  static const std::vector<Identity> ids{
      Identity::GradInverseForm, Identity::LPositionNorm,   Identity::GradCurvaturePower,
      Identity::LCurvaturePower, Identity::LInverseForm,    Identity::LSecondForm,
      Identity::SecondFormTrace, Identity::PrincipalFrame,  Identity::RadialPositionGradient,
      Identity::LTraceFunction};
  return ids;
}

Identity identity_from_name(std::string_view name) {
  for (Identity id : all_identities()) {
    if (identity_name(id) == name) return id;
  }
  throw ContractError("unknown identity '" + std::string(name) + "'");
}

bool shrinker_only(Identity id) {
  switch (id) {
    case Identity::GradInverseForm:
    case Identity::SecondFormTrace:
    case Identity::RadialPositionGradient:
      return false;
    default:
      return true;
  }
}

double shrinker_gate(const SphereGrid& grid) {
  const double d = grid.max_spacing();
  return std::max(1e-8, 100.0 * d * d * d * d);
}

TensorField identity_defect(Identity id, const GeometryBundle& bundle, double alpha) {
  const Common c = make_common(bundle, alpha);
  switch (id) {
    case Identity::GradInverseForm: return defect_grad_inverse_form(bundle, c);
    case Identity::LPositionNorm: return defect_l_position_norm(bundle, c);
    case Identity::GradCurvaturePower: return defect_grad_curvature_power(bundle, c);
    case Identity::LCurvaturePower: return defect_l_curvature_power(bundle, c);
    case Identity::LInverseForm: return defect_l_inverse_form(bundle, c);
    case Identity::LSecondForm: return defect_l_second_form(bundle, c);
    case Identity::SecondFormTrace: return defect_second_form_trace(bundle, c);
    case Identity::PrincipalFrame: return defect_principal_frame(bundle, c);
    case Identity::RadialPositionGradient: return defect_radial_position_gradient(bundle, c);
    case Identity::LTraceFunction: return defect_l_trace_function(bundle, c);
  }
  throw ContractError("unknown identity");
}

IdentityResidual check_identity(Identity id, const GeometryBundle& bundle, double alpha) {
  IdentityResidual r;
  r.shrinker_residual = bundle_shrinker_residual(bundle, alpha);
  r.gate = shrinker_gate(bundle.grid);
  r.applicable = !shrinker_only(id) || r.shrinker_residual < r.gate;
  const TensorField d = identity_defect(id, bundle, alpha);
  for (std::size_t k = 0; k < d.nodes(); ++k) {
    const double v = d.rank() == 0 ? std::abs(d(k, 0)) : tensor_norm(d, k, bundle.g, bundle.g_inv);
    r.max_abs = std::max(r.max_abs, v);
  }
  return r;
}

double refinement_constant(Identity id) {
  // Twice the ellipse (a = 2, b = 1/2) residual at N = 128, divided by (2 pi / 128)^4.
  switch (id) {
    case Identity::GradInverseForm: return 1.1e4;
    case Identity::LPositionNorm: return 9.5e3;
    case Identity::GradCurvaturePower: return 80.0;
    case Identity::LCurvaturePower: return 2.9e3;
    case Identity::LInverseForm: return 1.9e5;
    case Identity::LSecondForm: return 3.4e4;
    case Identity::SecondFormTrace: return 1.0;
    case Identity::PrincipalFrame: return 540.0;
    case Identity::RadialPositionGradient: return 2.1e3;
    case Identity::LTraceFunction: return 3.0e4;
  }
  return 0.0;
}

double observed_order(const std::vector<double>& residuals) {
  double order = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
    if (!(residuals[i] > kRoundoffFloor)) continue;
    const double o = std::log2(residuals[i] / residuals[i + 1]);
    order = std::isnan(order) ? o : std::min(order, o);
  }
  return order;
}

IdentityReport run_identity(Identity id, const BodyCase& body) {
  IdentityReport rep;
  rep.id = id;
  rep.body = body.name;
  rep.alpha = body.alpha;
  rep.resolutions = body.resolutions;
  double spacing = 0.0;
  for (const auto& res : body.resolutions) {
    const SphereGrid grid = build_grid(body.n, res);
    const GeometryBundle bundle = build_bundle(body.make(grid));
    const IdentityResidual r = check_identity(id, bundle, body.alpha);
    rep.residuals.push_back(r.max_abs);
    rep.applicable = rep.applicable && r.applicable;
    spacing = grid.max_spacing();
  }
  rep.order = observed_order(rep.residuals);
  bool ok = !rep.residuals.empty();
  switch (body.mode) {
    case CheckMode::Roundoff:
      rep.threshold = kRoundoffThreshold;
      for (double v : rep.residuals) ok = ok && v <= rep.threshold;
      rep.order = std::numeric_limits<double>::quiet_NaN();
      break;
    case CheckMode::Refinement:
      rep.threshold = refinement_constant(id) * std::pow(spacing, 4);
      ok = ok && rep.residuals.back() <= rep.threshold &&
           (std::isnan(rep.order) || rep.order >= kMinimumOrder);
      break;
    case CheckMode::Fixed:
      rep.threshold = body.fixed_threshold;
      for (double v : rep.residuals) ok = ok && v < rep.threshold;
      break;
  }
  rep.passed = ok && rep.applicable;
  return rep;
}

std::vector<IdentityReport> run_suite(const std::vector<BodyCase>& bodies,
                                      const std::vector<Identity>& ids) {
  std::vector<IdentityReport> out;
  for (const auto& body : bodies) {
    for (Identity id : ids) out.push_back(run_identity(id, body));
  }
  return out;
}

std::vector<BodyCase> standard_cases() {
  std::vector<BodyCase> cases;
  cases.push_back({"unit-sphere-n1", 1, 1.5, [](const SphereGrid& g) { return sphere_body(g); },
                   {{64}, {128}}, CheckMode::Roundoff, 0.0});
  cases.push_back({"unit-sphere-n2", 2, 1.0, [](const SphereGrid& g) { return sphere_body(g); },
                   {{24, 48}, {48, 96}}, CheckMode::Roundoff, 0.0});
  cases.push_back({"ellipse-a2-b0.5", 1, 1.0 / 3.0,
                   [](const SphereGrid& g) { return ellipse_body(g, 2.0, 0.5); },
                   {{128}, {256}, {512}}, CheckMode::Refinement, 0.0});
  cases.push_back({"ode-shrinker-h1.5", 1, 1.0 / 3.0,
                   [](const SphereGrid& g) {
                     return solve_shrinker_ode_n1(1.0 / 3.0, 1.5, 0.0, g.n_longitude()).body;
                   },
                   {{64}, {128}, {256}}, CheckMode::Refinement, 0.0});
  return cases;
}

std::vector<BodyCase> fuzz_cases(std::uint64_t seed, int count, std::vector<int> resolution) {
  std::mt19937_64 rng(seed);
  std::vector<BodyCase> cases;
  for (int i = 0; i < count; ++i) {
    auto coeffs = random_coefficients(2, rng);
    cases.push_back({"random-" + std::to_string(i), 2, 1.0,
                     [coeffs](const SphereGrid& g) { return harmonic_body(g, coeffs); },
                     {resolution}, CheckMode::Fixed, kFuzzThreshold});
  }
  return cases;
}

std::vector<Identity> fuzz_identities() {
  return {Identity::GradInverseForm, Identity::RadialPositionGradient};
}

std::string format_table(const std::vector<IdentityReport>& reports) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-26s %-20s %8s %12s %8s %12s  %s\n", "identity", "body",
                "alpha", "finest", "order", "threshold", "status");
  out += line;
  for (const auto& r : reports) {
    const char* status = !r.applicable ? "inapplicable" : (r.passed ? "pass" : "FAIL");
    std::snprintf(line, sizeof line, "%-26s %-20s %8.4g %12.4e %8.3f %12.4e  %s\n",
                  std::string(identity_name(r.id)).c_str(), r.body.c_str(), r.alpha,
                  r.residuals.empty() ? 0.0 : r.residuals.back(), r.order, r.threshold, status);
    out += line;
  }
  return out;
}

}  // namespace gcf
