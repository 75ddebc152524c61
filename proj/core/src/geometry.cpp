#include "gcf/geometry.hpp"

#include "gcf/error.hpp"
#include "gcf/stencil.hpp"

#include <algorithm>
#include <Eigen/LU>

#include <cmath>
#include <string>

namespace gcf {

namespace {

void require_grid_chart(const GeometryBundle& bundle) {
  if (!bundle.chart.isIdentity(0.0)) {
    throw ContractError("stencil operations need the grid chart");
  }
}

// Metric, curvature and connection data from X, nu, F_i and h_ij already in the bundle.
void finish_bundle(GeometryBundle& bb) {
  const int dim = bb.dim;
  const std::size_t nodes = bb.grid.size();
  bb.g = TensorField(dim, {Slot::Co, Slot::Co}, nodes);
  bb.g_inv = TensorField(dim, {Slot::Contra, Slot::Contra}, nodes);
  bb.b = TensorField(dim, {Slot::Contra, Slot::Contra}, nodes);
  bb.x_lower = TensorField(dim, {Slot::Co}, nodes);
  bb.x_upper = TensorField(dim, {Slot::Contra}, nodes);
  bb.K.resize(nodes);
  bb.H.resize(nodes);
  bb.x_norm2.resize(nodes);
  bb.support.resize(nodes);
  bb.curvatures.resize(nodes);

  for (std::size_t k = 0; k < nodes; ++k) {
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) bb.g.at(k, i, j) = bb.tangent[k][i].dot(bb.tangent[k][j]);
    }
    double det_g, det_h;
    if (dim == 1) {
      det_g = bb.g(k, 0);
      det_h = bb.h(k, 0);
    } else {
      det_g = bb.g(k, 0) * bb.g(k, 3) - bb.g(k, 1) * bb.g(k, 2);
      det_h = bb.h(k, 0) * bb.h(k, 3) - bb.h(k, 1) * bb.h(k, 2);
    }
    if (!(det_g > 0.0)) {
      throw ConvexityError("degenerate metric at node " + std::to_string(k), k, det_g);
    }
    if (!(bb.h(k, 0) > 0.0 && det_h > 0.0)) {
      throw ConvexityError("second fundamental form not positive definite at node " +
                               std::to_string(k),
                           k, det_h);
    }
    if (dim == 1) {
      bb.g_inv(k, 0) = 1.0 / det_g;
      bb.b(k, 0) = 1.0 / det_h;
      const double kappa = det_h / det_g;
      bb.K[k] = kappa;
      bb.H[k] = kappa;
      bb.curvatures[k] = {kappa, kappa};
    } else {
      bb.g_inv(k, 0) = bb.g(k, 3) / det_g;
      bb.g_inv(k, 3) = bb.g(k, 0) / det_g;
      bb.g_inv(k, 1) = bb.g_inv(k, 2) = -bb.g(k, 1) / det_g;
      bb.b(k, 0) = bb.h(k, 3) / det_h;
      bb.b(k, 3) = bb.h(k, 0) / det_h;
      bb.b(k, 1) = bb.b(k, 2) = -bb.h(k, 1) / det_h;
      const double kk = det_h / det_g;
      double hh = 0.0;
      for (int c = 0; c < 4; ++c) hh += bb.g_inv(k, c) * bb.h(k, c);
      bb.K[k] = kk;
      bb.H[k] = hh;
      const double mean = 0.5 * hh;
      // Discriminant from the shape operator S = g^-1 h; mean^2 - K cancels near umbilics.
      const auto s = [&](int i, int j) {
        return bb.g_inv.at(k, i, 0) * bb.h.at(k, 0, j) + bb.g_inv.at(k, i, 1) * bb.h.at(k, 1, j);
      };
      const double half_diff = 0.5 * (s(0, 0) - s(1, 1));
      const double gap = std::sqrt(std::max(half_diff * half_diff + s(0, 1) * s(1, 0), 0.0));
      if (2.0 * gap < 1e-12 * std::abs(hh)) {
        bb.curvatures[k] = {mean, mean};
      } else {
        const double big = mean + gap;
        bb.curvatures[k] = {kk / big, big};
      }
    }
    bb.x_norm2[k] = bb.x[k].squaredNorm();
    bb.support[k] = bb.x[k].dot(bb.nu[k]);
    for (int i = 0; i < dim; ++i) bb.x_lower(k, i) = bb.x[k].dot(bb.tangent[k][i]);
    for (int i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dim; ++j) acc += bb.g_inv.at(k, i, j) * bb.x_lower(k, j);
      bb.x_upper(k, i) = acc;
    }
  }
  bb.gamma = christoffel_from_metric(bb.grid, bb.g, bb.g_inv);
  bb.grad_h = covariant_derivative(bb.grid, bb.h, bb.gamma);
}

}  // namespace

GeometryBundle build_bundle(const SupportField& body) {
  const SphereGrid& grid = body.grid;
  const RadiiField radii = radii_matrix(body);
  const ImmersionField imm = embed(body);
  GeometryBundle bb;
  bb.grid = grid;
  bb.dim = grid.dim();
  bb.x = imm.x;
  bb.nu = imm.nu;
  bb.tangent.resize(grid.size());
  bb.h = TensorField(bb.dim, {Slot::Co, Slot::Co}, grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Sym2& w = radii.w[k];
    if (bb.dim == 1) {
      bb.tangent[k][0] = w.xx * grid.frame_vector(k, 0);
      bb.h(k, 0) = w.xx;
      continue;
    }
    const double s = grid.sin_colatitude(grid.ring(k));
    const Eigen::Vector3d ep = grid.frame_vector(k, 0);
    const Eigen::Vector3d et = grid.frame_vector(k, 1);
    bb.tangent[k][0] = w.xx * ep + w.xy * et;
    bb.tangent[k][1] = s * (w.xy * ep + w.yy * et);
    bb.h.at(k, 0, 0) = w.xx;
    bb.h.at(k, 0, 1) = bb.h.at(k, 1, 0) = s * w.xy;
    bb.h.at(k, 1, 1) = s * s * w.yy;
  }
  finish_bundle(bb);
  return bb;
}

GeometryBundle build_bundle(const ImmersionField& imm) {
  const SphereGrid& grid = imm.grid;
  if (imm.x.size() != grid.size() || imm.nu.size() != grid.size()) {
    throw ContractError("immersion field size mismatch");
  }
  GeometryBundle bb;
  bb.grid = grid;
  bb.dim = grid.dim();
  bb.x = imm.x;
  bb.nu = imm.nu;
  bb.tangent.resize(grid.size());
  bb.h = TensorField(bb.dim, {Slot::Co, Slot::Co}, grid.size());

  std::array<std::vector<double>, 3> comp;
  for (int c = 0; c < 3; ++c) {
    comp[c].resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) comp[c][k] = imm.x[k][c];
  }
  for (int c = 0; c < 3; ++c) {
    for (int a = 0; a < bb.dim; ++a) {
      const auto d = first_derivative(grid, comp[c], a);
      for (std::size_t k = 0; k < grid.size(); ++k) bb.tangent[k][a][c] = d[k];
    }
    const auto d00 = second_derivative(grid, comp[c], 0);
    for (std::size_t k = 0; k < grid.size(); ++k) bb.h.at(k, 0, 0) -= d00[k] * imm.nu[k][c];
    if (bb.dim == 2) {
      const auto d11 = second_derivative(grid, comp[c], 1);
      const auto d01 = mixed_derivative(grid, comp[c]);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        bb.h.at(k, 1, 1) -= d11[k] * imm.nu[k][c];
        bb.h.at(k, 0, 1) -= d01[k] * imm.nu[k][c];
      }
    }
  }
  if (bb.dim == 2) {
    for (std::size_t k = 0; k < grid.size(); ++k) bb.h.at(k, 1, 0) = bb.h.at(k, 0, 1);
  }
  finish_bundle(bb);
  return bb;
}

GeometryBundle reparametrize(const GeometryBundle& bundle, const Eigen::Matrix2d& a) {
  const double det = bundle.dim == 2 ? a.determinant() : a(0, 0);
  if (!(std::abs(det) > 1e-12)) throw ContractError("chart change must be invertible");
  GeometryBundle out = bundle;
  out.g = transform_chart(bundle.g, a);
  out.g_inv = transform_chart(bundle.g_inv, a);
  out.h = transform_chart(bundle.h, a);
  out.b = transform_chart(bundle.b, a);
  out.gamma = transform_chart(bundle.gamma, a);
  out.grad_h = transform_chart(bundle.grad_h, a);
  out.x_lower = transform_chart(bundle.x_lower, a);
  out.x_upper = transform_chart(bundle.x_upper, a);
  for (std::size_t k = 0; k < out.tangent.size(); ++k) {
    for (int i = 0; i < bundle.dim; ++i) {
      Eigen::Vector3d v = Eigen::Vector3d::Zero();
      for (int j = 0; j < bundle.dim; ++j) v += a(j, i) * bundle.tangent[k][j];
      out.tangent[k][i] = v;
    }
  }
  if (bundle.dim == 1) {
    out.chart = bundle.chart;
    out.chart(0, 0) *= a(0, 0);
  } else {
    out.chart = bundle.chart * a;
  }
  return out;
}

TensorField covariant_derivative_sym2(const TensorField& t, const GeometryBundle& bundle) {
  require_grid_chart(bundle);
  if (t.rank() != 2 || t.slots()[0] != Slot::Co || t.slots()[1] != Slot::Co) {
    throw ContractError("expected a covariant 2-tensor");
  }
  return covariant_derivative(bundle.grid, t, bundle.gamma);
}

TensorField gradient(std::span<const double> phi, const GeometryBundle& bundle) {
  require_grid_chart(bundle);
  return partial_derivatives(bundle.grid, scalar_tensor(bundle.dim, phi));
}

TensorField covariant_hessian_scalar(std::span<const double> phi, const GeometryBundle& bundle) {
  require_grid_chart(bundle);
  const SphereGrid& grid = bundle.grid;
  const int dim = bundle.dim;
  const TensorField d = gradient(phi, bundle);
  TensorField out(dim, {Slot::Co, Slot::Co}, grid.size());
  const auto d00 = second_derivative(grid, phi, 0);
  std::vector<double> d11, d01;
  if (dim == 2) {
    d11 = second_derivative(grid, phi, 1);
    d01 = mixed_derivative(grid, phi);
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.at(k, 0, 0) = d00[k];
    if (dim == 2) {
      out.at(k, 0, 1) = out.at(k, 1, 0) = d01[k];
      out.at(k, 1, 1) = d11[k];
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        double acc = 0.0;
        for (int m = 0; m < dim; ++m) acc += bundle.gamma.at(k, m, i, j) * d(k, m);
        out.at(k, i, j) -= acc;
      }
    }
  }
  return out;
}

std::vector<double> curvature_power(const GeometryBundle& bundle, double alpha) {
  std::vector<double> ka(bundle.K.size());
  for (std::size_t k = 0; k < ka.size(); ++k) ka[k] = std::pow(bundle.K[k], alpha);
  return ka;
}

std::vector<double> apply_L(std::span<const double> phi, const GeometryBundle& bundle,
                            double alpha) {
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  const TensorField hess = covariant_hessian_scalar(phi, bundle);
  const auto ka = curvature_power(bundle, alpha);
  std::vector<double> out(phi.size());
  const int nc = bundle.dim * bundle.dim;
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0;
    for (int c = 0; c < nc; ++c) acc += bundle.b(k, c) * hess(k, c);
    out[k] = alpha * ka[k] * acc;
  }
  return out;
}

TensorField apply_L_tensor(const TensorField& t, const GeometryBundle& bundle, double alpha) {
  require_grid_chart(bundle);
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  if (t.rank() > 2) throw ContractError("L is implemented for tensors of rank <= 2");
  const TensorField d = covariant_derivative(bundle.grid, t, bundle.gamma);
  const TensorField dd = covariant_derivative(bundle.grid, d, bundle.gamma);
  const auto ka = curvature_power(bundle, alpha);
  const int dim = bundle.dim;
  const int nc = t.components();
  TensorField out(dim, t.slots(), t.nodes());
  for (std::size_t k = 0; k < t.nodes(); ++k) {
    for (int c = 0; c < nc; ++c) {
      double acc = 0.0;
      for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) acc += bundle.b.at(k, i, j) * dd(k, (i * dim + j) * nc + c);
      }
      out(k, c) = alpha * ka[k] * acc;
    }
  }
  return out;
}

std::vector<double> radial_derivative(std::span<const double> phi, const GeometryBundle& bundle) {
  const TensorField d = gradient(phi, bundle);
  std::vector<double> out(phi.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    double acc = 0.0;
    for (int i = 0; i < bundle.dim; ++i) acc += bundle.x_upper(k, i) * d(k, i);
    out[k] = acc;
  }
  return out;
}

double euler_quotient(const GeometryBundle& bundle, std::size_t node, int axis) {
  const int dim = bundle.dim;
  if (axis < 0 || axis >= dim) throw ContractError("axis out of range");
  double acc = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int m = 0; m < dim; ++m) {
      acc += bundle.b.at(node, axis, j) * bundle.g.at(node, j, m) * bundle.b.at(node, m, axis);
    }
  }
  return acc / bundle.g_inv.at(node, axis, axis);
}

std::vector<double> euler_formula_gap(const GeometryBundle& bundle, int axis) {
  std::vector<double> gap(bundle.K.size());
  for (std::size_t k = 0; k < gap.size(); ++k) {
    const double lmin = bundle.curvatures[k][0];
    gap[k] = 1.0 / (lmin * lmin) - euler_quotient(bundle, k, axis);
  }
  return gap;
}

std::vector<double> pogorelov_wbar(const GeometryBundle& bundle, double alpha, int axis) {
  if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
  const int n = bundle.dim;
  const double shift = (n * alpha - 1.0) / (2.0 * n * alpha);
  std::vector<double> out(bundle.K.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::pow(bundle.K[k], alpha) * std::sqrt(euler_quotient(bundle, k, axis)) -
             shift * bundle.x_norm2[k];
  }
  return out;
}

}  // namespace gcf
