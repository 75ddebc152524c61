#pragma once

#include "gcf/sphere_grid.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace gcf {

/// Symmetric 2x2 matrix; for n = 1 only `xx` is used.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Eigenvalues of a symmetric matrix in descending order. For n = 2, eigenvalues closer than
/// 1e-12 * |trace| are reported as an exact tie.
std::array<double, 2> symmetric_eigenvalues(const Sym2& m, int dim);

/// Support function of a convex body sampled on a sphere grid, with the outward normal
/// convention: a self-similar shrinker satisfies K^alpha = h.
struct SupportField {
  SphereGrid grid;
  std::vector<double> h;
};

SupportField make_support(const SphereGrid& grid, std::vector<double> h);

/// Radii-of-curvature matrix W = Hess_S h + h * g_S in the orthonormal sphere frame.
struct RadiiField {
  int dim = 0;
  std::vector<Sym2> w;
  std::vector<std::array<double, 2>> radii;  // descending; radii[k][1] unused for n = 1
};

/// Sampled embedding: X = h nu + grad_S h with nu the grid normal (outward).
struct ImmersionField {
  SphereGrid grid;
  std::vector<Eigen::Vector3d> x;
  std::vector<Eigen::Vector3d> nu;
};

/// Frame matrix W at every node, no admissibility checks.
RadiiField compute_radii(const SupportField& body);

/// W for a nodal field h written into `w` (size grid.size()). Linear in h; `scratch` is
/// resized as needed so repeated calls do not allocate.
void frame_matrix(const SphereGrid& grid, std::span<const double> h, std::span<Sym2> w,
                  std::vector<double>& scratch);

/// W with checks: throws ConvexityError naming the worst node if h <= 0 or some radius <= 0.
RadiiField radii_matrix(const SupportField& body);

/// det W per node, the product of the radii of curvature.
std::vector<double> radii_determinant(const RadiiField& radii);

/// K = 1 / det W.
std::vector<double> gauss_curvature_from_support(const SupportField& body);

struct ShrinkerResidual {
  std::vector<double> field;  // h - K^alpha
  double max_abs = 0.0;
};

ShrinkerResidual shrinker_residual(const SupportField& body, double alpha);

/// (1/(n+1)) * integral of h det W over the sphere.
double enclosed_volume(const SupportField& body);
double enclosed_volume(const SupportField& body, const RadiiField& radii);

ImmersionField embed(const SupportField& body);

/// Scaled copy c * h.
SupportField scaled(const SupportField& body, double c);

}  // namespace gcf
