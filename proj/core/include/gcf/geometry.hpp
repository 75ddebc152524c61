#pragma once

#include "gcf/sphere_grid.hpp"
#include "gcf/support.hpp"
#include "gcf/tensor.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <vector>

namespace gcf {

/// Extrinsic geometry of a strictly convex immersion, per node, in the grid chart (or a linear
/// reparametrization of it). The second fundamental form uses the inward normal, so h > 0.
struct GeometryBundle {
  SphereGrid grid;
  int dim = 0;
  std::vector<Eigen::Vector3d> x;                     // position F
  std::vector<Eigen::Vector3d> nu;                    // outward unit normal
  std::vector<std::array<Eigen::Vector3d, 2>> tangent;  // F_i; tangent[k][1] unused for n = 1
  TensorField g, g_inv;   // (Co, Co), (Contra, Contra)
  TensorField h, b;       // (Co, Co), (Contra, Contra)
  TensorField gamma;      // Gamma^k_ij as (Contra, Co, Co)
  TensorField grad_h;     // nabla_i h_jk as (Co, Co, Co)
  TensorField x_lower;    // <F, F_i>
  TensorField x_upper;    // <F, F^i>
  std::vector<double> K, H;
  std::vector<double> x_norm2;   // |F|^2
  std::vector<double> support;   // <F, nu>
  std::vector<std::array<double, 2>> curvatures;  // ascending; [1] unused for n = 1
  /// Linear chart change from the grid chart; stencil operations need the identity.
  Eigen::Matrix2d chart = Eigen::Matrix2d::Identity();
};

/// Bundle from a support function. Tangents are F_i = W d_i(nu) and h_ij = W(d_i nu, d_j nu),
/// which is exact on round bodies.
GeometryBundle build_bundle(const SupportField& body);

/// Bundle from a sampled immersion by differencing X: F_i = d_i X, h_ij = -<d_i d_j X, nu>.
/// Throws ConvexityError if g or h fails to be positive definite at some node.
GeometryBundle build_bundle(const ImmersionField& imm);

/// Same geometry in the chart u = A u' (A invertible, n = 2; for n = 1 only A(0,0) is used).
GeometryBundle reparametrize(const GeometryBundle& bundle, const Eigen::Matrix2d& a);

/// nabla_i T_jk for a symmetric 2-tensor with lower indices.
TensorField covariant_derivative_sym2(const TensorField& t, const GeometryBundle& bundle);

/// d_i phi as a covector field.
TensorField gradient(std::span<const double> phi, const GeometryBundle& bundle);

/// nabla_i nabla_j phi = d_i d_j phi - Gamma^k_ij d_k phi with direct second-difference stencils.
TensorField covariant_hessian_scalar(std::span<const double> phi, const GeometryBundle& bundle);

/// L phi = alpha K^alpha b^ij nabla_i nabla_j phi.
std::vector<double> apply_L(std::span<const double> phi, const GeometryBundle& bundle,
                            double alpha);

/// L on a tensor field: alpha K^alpha b^ij (nabla nabla T)_ij..., by nested covariant derivatives.
TensorField apply_L_tensor(const TensorField& t, const GeometryBundle& bundle, double alpha);

/// <F, nabla phi> = <F, F^i> d_i phi.
std::vector<double> radial_derivative(std::span<const double> phi, const GeometryBundle& bundle);

/// (b g b)^{ii} / g^{ii} for chart axis i at one node.
double euler_quotient(const GeometryBundle& bundle, std::size_t node, int axis);

/// lambda_min^-2 - (b g b)^{ii} / g^{ii}, per node, for chart axis i.
std::vector<double> euler_formula_gap(const GeometryBundle& bundle, int axis);

/// K^alpha ((b g b)^{ii} / g^{ii})^{1/2} - (n alpha - 1)/(2 n alpha) |F|^2 for chart axis i.
std::vector<double> pogorelov_wbar(const GeometryBundle& bundle, double alpha, int axis);

/// K^alpha per node.
std::vector<double> curvature_power(const GeometryBundle& bundle, double alpha);

}  // namespace gcf
