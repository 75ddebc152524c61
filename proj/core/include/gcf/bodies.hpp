#pragma once

#include "gcf/sphere_grid.hpp"
#include "gcf/support.hpp"

#include <Eigen/Core>

#include <array>
#include <random>
#include <span>
#include <vector>

namespace gcf {

/// Round body of radius r centred at the origin.
SupportField sphere_body(const SphereGrid& grid, double r = 1.0);

/// Ellipse with semi-axes (a, b) rotated by `rotation` radians (n = 1).
SupportField ellipse_body(const SphereGrid& grid, double a, double b, double rotation = 0.0);

/// Ellipsoid with semi-axes along x, y, z (n = 2); for n = 1 the first two axes are used.
SupportField ellipsoid_body(const SphereGrid& grid, const std::array<double, 3>& axes);

/// Number of low-harmonic basis functions: cos/sin k theta for k <= 4 (n = 1), or harmonic
/// polynomials of degree 1..3 in the normal (n = 2).
int harmonic_count(int n);

/// Basis function `index` evaluated at every node.
std::vector<double> harmonic_field(const SphereGrid& grid, int index);

/// Smallest radius of curvature over the grid (-inf if h <= 0 somewhere).
double min_radius(const SupportField& body);

/// h = 1 + s * sum c_k Y_k with s = 0.9^m the largest factor giving min radius >= margin.
SupportField harmonic_body(const SphereGrid& grid, std::span<const double> coefficients,
                           double margin = 0.1);

/// Harmonic coefficients uniform in [-0.2, 0.2], harmonic_count(n) of them.
std::vector<double> random_coefficients(int n, std::mt19937_64& rng);

/// harmonic_body of random_coefficients.
SupportField random_convex_body(const SphereGrid& grid, std::mt19937_64& rng);

/// Random linear chart A = I + E, E uniform in [-0.5, 0.5], resampled until |det A| >= 0.2.
Eigen::Matrix2d random_chart(std::mt19937_64& rng);

}  // namespace gcf
